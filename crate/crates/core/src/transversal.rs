//! Poincaré section components as exact triangles, the winner partition
//! of their right edge, emptiness certificates for unbounded candidate
//! strips, and winner-region polygons.

use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{HalfPlane, Point, Polygon};
use crate::orbit::{cusp_datum_for_vertex, contains_minus_identity, CuspDatum, OrbitError, OrbitGraph};
use crate::origami::HolonomyOracle;
use crate::rational::{fmt_q, q, q_floor, qr, Q};
use crate::words::direction_to_horizontal;

#[derive(Debug, Error)]
pub enum TransversalError {
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error("candidate search exhausted at edge point b = {0}")]
    CandidateSearchExhausted(String),
    #[error("periodicity certificate unavailable for direction ({0},{1})")]
    NotCertifiable(i64, i64),
    #[error("winner regions do not tile the section component")]
    TilingGap,
}

/// A holonomy vector on a scaled cusp-relative: unscaled integer
/// components (xu, yu) with the diagonal scaling d, so the scaled vector
/// is (xu/d, yu*d).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Winner {
    pub xu: i64,
    pub yu: i64,
    pub d: i64,
}

impl Winner {
    pub fn x(&self) -> Q {
        qr(self.xu, self.d)
    }

    pub fn y(&self) -> Q {
        q(self.yu * self.d)
    }

    /// Strictly shallower plane slope than `other` (shallower wins where
    /// candidacy strips overlap).
    pub fn shallower_than(&self, other: &Winner) -> bool {
        // slopes y/x compare by cross product; scaling cancels.
        self.yu * other.xu < other.yu * self.xu
    }

    /// Scaled strip value s(a, b) = a x + b y; the candidacy strip is
    /// 0 < s <= 1.
    pub fn strip_value(&self, a: Q, b: Q) -> Q {
        a * self.x() + b * self.y()
    }

    /// Upper endpoint of the winning interval on the edge a = 1:
    /// the solution of x + b y = 1.
    pub fn upper_endpoint(&self) -> Q {
        (q(1) - self.x()) / self.y()
    }
}

/// One Poincaré-section component: the cusp it belongs to, the scaled
/// shortest-holonomy data, and the parametrizing triangle.
pub struct SectionComponent {
    pub cusp: CuspDatum,
    pub d: i64,
    pub x0_u: i64,
    pub y0_u: i64,
    /// scaled shortest data: y0 = d * y0_u, x0 = x0_u / d
    pub x0: Q,
    pub y0: Q,
    pub alpha_eff: Q,
    pub b_top: Q,
    pub b_bot: Q,
    pub triangle: Polygon,
    oracle: Arc<HolonomyOracle>,
    graph: Arc<OrbitGraph>,
}

/// Half-open winning interval [b_lo, b_hi) on the edge a = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interval {
    pub b_lo: Q,
    pub b_hi: Q,
    pub winner: Winner,
}

/// A winner with its convex region inside the component triangle.
#[derive(Clone, Debug)]
pub struct WinnerRegion {
    pub winner: Winner,
    pub polygon: Polygon,
}

/// Candidate confirmation region at an edge point, in the plane of
/// possible holonomy vectors.
pub enum CandidateRegion {
    /// Bounded: the finitely many unscaled lattice points that could beat
    /// the candidate (before the holonomy membership test).
    Bounded { lattice_points: Vec<(i64, i64)> },
    /// Unbounded parallel strip: both boundary lines have slope qy/px.
    UnboundedStrip { px: i64, qy: i64 },
}

/// Finite emptiness certificate for an unbounded candidate strip.
#[derive(Clone, Debug, Serialize)]
pub struct StripCertificate {
    pub direction: (i64, i64),
    /// width of the cusp in that direction: strip content is invariant
    /// under translation by period * psi * direction on each lattice line
    pub period: usize,
    pub tested: Vec<(i64, i64)>,
    pub hits: Vec<(i64, i64)>,
}

impl StripCertificate {
    pub fn is_empty(&self) -> bool {
        self.hits.is_empty()
    }
}

impl SectionComponent {
    pub fn new(graph: &Arc<OrbitGraph>, cusp: CuspDatum) -> SectionComponent {
        let oracle = Arc::new(HolonomyOracle::new(cusp.cusp_relative.clone()));
        let d = cusp.scaling_d;
        let (y0_u, x0_u) = oracle.shortest_vertical_data();
        let x0 = qr(x0_u, d);
        let y0 = q(y0_u * d);
        let alpha_eff = qr(cusp.width as i64, d * d);
        let b_top = (q(1) - x0) / y0;
        let b_bot = b_top - alpha_eff;
        let triangle = Polygon::new(vec![
            (q(0), q(1) / y0),
            (q(1), b_top),
            (q(1), b_bot),
        ]);
        SectionComponent {
            cusp,
            d,
            x0_u,
            y0_u,
            x0,
            y0,
            alpha_eff,
            b_top,
            b_bot,
            triangle,
            oracle: oracle.clone(),
            graph: graph.clone(),
        }
    }

    pub fn oracle(&self) -> &HolonomyOracle {
        &self.oracle
    }

    fn is_holonomy(&self, xu: i64, yu: i64) -> bool {
        self.oracle.is_holonomy(xu, yu)
    }

    /// Candidate region at edge point (1, b) for an unscaled candidate
    /// (cx, cy): vectors in the open strip 0 < s < 1 with strictly
    /// shallower slope.
    pub fn candidate_region(&self, b: Q, cx: i64, cy: i64) -> CandidateRegion {
        let d2 = q(self.d * self.d);
        // Unbounded exactly when the candidate slope matches the strip
        // zero line at b: cy/cx (scaled: d^2 cy/cx) == -1/b.
        let matches_zero_line = !b.is_zero() && q(cx) + b * d2 * q(cy) == Q::zero();
        if matches_zero_line {
            let g = num_integer::gcd(cx, cy);
            return CandidateRegion::UnboundedStrip {
                px: cx / g,
                qy: cy / g,
            };
        }
        CandidateRegion::Bounded {
            lattice_points: self.bounded_region_points(b, cx, cy),
        }
    }

    /// Integer points of the bounded confirmation region (possibly many;
    /// callers run the membership oracle over them).
    fn bounded_region_points(&self, b: Q, cx: i64, cy: i64) -> Vec<(i64, i64)> {
        let d2 = q(self.d * self.d);
        let d_q = q(self.d);
        let mut pts = Vec::new();
        // y-range: need yu*(cx/cy + b d^2) < d and slope constraint
        // xu > yu cx/cy with xu < -b d^2 yu + d.
        let slope_gap = qr(cx, cy) + b * d2;
        debug_assert!(slope_gap > Q::zero(), "bounded region requires slope gap");
        let y_max = {
            let v = d_q / slope_gap;
            let f = q_floor(v);
            if q(f) == v {
                f - 1
            } else {
                f
            }
        };
        for yu in 1..=y_max.max(0) {
            let lo_strip = -b * d2 * q(yu);
            let lo_slope = qr(cx * yu, cy);
            let lo = if lo_strip > lo_slope { lo_strip } else { lo_slope };
            let hi = -b * d2 * q(yu) + d_q;
            let mut xu = q_floor(lo) + 1;
            if q(xu) <= lo {
                xu += 1;
            }
            while q(xu) < hi {
                pts.push((xu, yu));
                xu += 1;
            }
        }
        pts
    }

    /// Finite certificate that the unbounded strip of primitive direction
    /// (px, qy) contains no holonomy vector — or the hits it contains.
    /// The strip is 0 < qy*x - px*y < qy*d in unscaled coordinates.
    pub fn certify_strip(&self, px: i64, qy: i64) -> Result<StripCertificate, TransversalError> {
        assert!(px > 0 && qy > 0 && num_integer::gcd(px, qy) == 1);
        let g = direction_to_horizontal(px, qy);
        let conj = self
            .cusp
            .cusp_relative
            .act_word(&g.to_word_psl());
        let vertex = self
            .graph
            .find(&conj)
            .ok_or(TransversalError::NotCertifiable(px, qy))?;
        // width of the (px,qy)-direction cusp = T-cycle length of the
        // conjugated surface
        let period = self
            .graph
            .t_cycles()
            .into_iter()
            .find(|c| c.contains(&vertex))
            .map(|c| c.len())
            .ok_or(TransversalError::NotCertifiable(px, qy))?;
        let psi_max = qy * self.d; // strip: 0 < psi < psi_max
        let mut tested = Vec::new();
        let mut hits = Vec::new();
        for psi in 1..psi_max {
            // solve qy*x - px*y = psi; base solution via extended gcd
            let (_, u, v) = crate::words::ext_gcd(qy, -px);
            let (x0, y0) = (u * psi, v * psi);
            debug_assert_eq!(qy * x0 - px * y0, psi);
            // one full period of the line: j in 0..period*psi
            let window = (period as i64) * psi;
            for j in 0..window {
                let (x, y) = (x0 + j * px, y0 + j * qy);
                tested.push((x, y));
                if self.is_holonomy(x, y) {
                    hits.push((x, y));
                }
            }
        }
        Ok(StripCertificate {
            direction: (px, qy),
            period,
            tested,
            hits,
        })
    }

    /// Any holonomy vector whose candidacy strip contains points just
    /// above the edge point (1, b): either on the strip zero line at b or
    /// with 0 < s(1,b) < 1.
    fn initial_candidate(&self, b: Q) -> Result<Winner, TransversalError> {
        let d2 = q(self.d * self.d);
        let n = self.oracle.surface().tile_count() as i64;
        // On the zero line: direction with x/y = -b d^2 > 0.
        let ratio = -b * d2;
        if ratio > Q::zero() {
            let (px, qy) = (*ratio.numer(), *ratio.denom());
            for m in 1..=n {
                if self.is_holonomy(m * px, m * qy) {
                    return Ok(Winner {
                        xu: m * px,
                        yu: m * qy,
                        d: self.d,
                    });
                }
            }
        }
        // In-strip search: for each height the open x-interval of length d.
        let cap = 64 * n.max(4) * self.d * self.d * (self.cusp.width as i64 + 1);
        for yu in 1..=cap {
            let lo = -b * d2 * q(yu);
            let hi = lo + q(self.d);
            let mut xu = q_floor(lo) + 1;
            if q(xu) <= lo {
                xu += 1;
            }
            while q(xu) < hi {
                if xu > 0 && self.is_holonomy(xu, yu) {
                    return Ok(Winner {
                        xu,
                        yu,
                        d: self.d,
                    });
                }
                xu += 1;
            }
        }
        Err(TransversalError::CandidateSearchExhausted(fmt_q(b)))
    }

    /// The winner on the interval just above the edge point (1, b):
    /// iterate candidate replacement until no strictly shallower holonomy
    /// vector remains in the confirmation region.
    fn winner_above(&self, b: Q) -> Result<Winner, TransversalError> {
        let mut cand = self.initial_candidate(b)?;
        for _ in 0..10_000 {
            let beater = match self.candidate_region(b, cand.xu, cand.yu) {
                CandidateRegion::Bounded { lattice_points } => lattice_points
                    .into_iter()
                    .filter(|&(x, y)| self.is_holonomy(x, y))
                    .map(|(xu, yu)| Winner {
                        xu,
                        yu,
                        d: self.d,
                    })
                    .filter(|w| w.shallower_than(&cand))
                    .min_by(|a, b| {
                        // shallowest slope, then smallest vector
                        (a.yu * b.xu)
                            .cmp(&(b.yu * a.xu))
                            .then(a.yu.cmp(&b.yu))
                    }),
                CandidateRegion::UnboundedStrip { px, qy } => {
                    let cert = self.certify_strip(px, qy)?;
                    let period = cert.period as i64;
                    cert.hits
                        .first()
                        .map(|&(mut x, mut y)| {
                            // normalize the hit to positive components by
                            // sliding along the certified period
                            let psi = qy * x - px * y;
                            let shift = period * psi;
                            while y <= 0 || x <= 0 {
                                x += shift * px;
                                y += shift * qy;
                            }
                            Winner {
                                xu: x,
                                yu: y,
                                d: self.d,
                            }
                        })
                }
            };
            match beater {
                None => return Ok(cand),
                Some(w) => {
                    debug_assert!(w.shallower_than(&cand));
                    cand = w;
                }
            }
        }
        Err(TransversalError::CandidateSearchExhausted(fmt_q(b)))
    }

    /// Partition of the right edge a = 1 into half-open winning intervals,
    /// ascending in b and covering [b_bot, b_top) exactly.
    pub fn partition_edge(&self) -> Result<Vec<Interval>, TransversalError> {
        let mut intervals = Vec::new();
        let mut b = self.b_bot;
        while b < self.b_top {
            let winner = self.winner_above(b)?;
            let b_hi = winner.upper_endpoint();
            if b_hi <= b || b_hi > self.b_top {
                return Err(TransversalError::CandidateSearchExhausted(fmt_q(b)));
            }
            intervals.push(Interval {
                b_lo: b,
                b_hi,
                winner,
            });
            b = b_hi;
            if intervals.len() > 100_000 {
                return Err(TransversalError::CandidateSearchExhausted(fmt_q(b)));
            }
        }
        Ok(intervals)
    }

    /// Winner regions reconstructed from the partition: each winner's
    /// region is the triangle, intersected with its candidacy strip,
    /// minus every strictly shallower winner's strip.
    pub fn winner_regions(
        &self,
        partition: &[Interval],
    ) -> Result<Vec<WinnerRegion>, TransversalError> {
        let mut regions = Vec::new();
        for iv in partition {
            let w = iv.winner;
            let mut poly = self.triangle.clone();
            // s_w <= 1
            poly = poly.clip(&HalfPlane::new(w.x(), w.y(), q(1)));
            // s_w >= 0 (the region closure touches the zero line)
            poly = poly.clip(&HalfPlane::new(-w.x(), -w.y(), q(0)));
            for other in partition {
                let o = other.winner;
                if o != w && o.shallower_than(&w) {
                    // exclude the shallower strip: keep s_o >= 1
                    poly = poly.clip(&HalfPlane::new(-o.x(), -o.y(), q(-1)));
                }
            }
            if poly.is_degenerate() {
                return Err(TransversalError::TilingGap);
            }
            regions.push(WinnerRegion { winner: w, polygon: poly });
        }
        // exact tiling check: region areas sum to the triangle area
        let total: Q = regions.iter().map(|r| r.polygon.area()).sum();
        if total != self.alpha_eff / q(2) {
            return Err(TransversalError::TilingGap);
        }
        Ok(regions)
    }

    /// JSON export of the component data with rationals as "p/q" strings.
    pub fn export(&self, partition: &[Interval], regions: &[WinnerRegion]) -> ComponentExport {
        ComponentExport {
            x0: fmt_q(self.x0),
            y0: fmt_q(self.y0),
            alpha_eff: fmt_q(self.alpha_eff),
            scaling_d: self.d.to_string(),
            intervals: partition
                .iter()
                .map(|iv| IntervalExport {
                    b_lo: fmt_q(iv.b_lo),
                    b_hi: fmt_q(iv.b_hi),
                    winner: [fmt_q(iv.winner.x()), fmt_q(iv.winner.y())],
                })
                .collect(),
            regions: regions
                .iter()
                .map(|r| RegionExport {
                    winner: [fmt_q(r.winner.x()), fmt_q(r.winner.y())],
                    vertices: r
                        .polygon
                        .vertices()
                        .iter()
                        .map(|&(x, y)| [fmt_q(x), fmt_q(y)])
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct ComponentExport {
    pub x0: String,
    pub y0: String,
    pub alpha_eff: String,
    pub scaling_d: String,
    pub intervals: Vec<IntervalExport>,
    pub regions: Vec<RegionExport>,
}

#[derive(Serialize)]
pub struct IntervalExport {
    pub b_lo: String,
    pub b_hi: String,
    pub winner: [String; 2],
}

#[derive(Serialize)]
pub struct RegionExport {
    pub winner: [String; 2],
    pub vertices: Vec<[String; 2]>,
}

/// A fully analyzed component: triangle, edge partition, winner regions.
pub struct AnalyzedComponent {
    pub component: SectionComponent,
    pub partition: Vec<Interval>,
    pub regions: Vec<WinnerRegion>,
}

/// Build all section components of a surface's orbit graph.
///
/// Within each T-cycle the cusp representative is normalized so that the
/// partition's bottom-up interval-length sequence is lexicographically
/// maximal (ties broken by cycle order). This makes the winner tables a
/// well-defined invariant of the cusp rather than of the BFS path.
pub fn cusp_components(
    graph: &Arc<OrbitGraph>,
) -> Result<Vec<AnalyzedComponent>, TransversalError> {
    if !contains_minus_identity(graph.vertex(graph.base())) {
        return Err(OrbitError::UnsupportedSurface.into());
    }
    let mut out = Vec::new();
    for cycle in graph.t_cycles() {
        let width = cycle.len();
        let mut best: Option<(Vec<Q>, AnalyzedComponent)> = None;
        let mut last_err: Option<TransversalError> = None;
        for &rep in &cycle {
            let cusp = cusp_datum_for_vertex(graph, rep, width);
            let component = SectionComponent::new(graph, cusp);
            let partition = match component.partition_edge() {
                Ok(p) => p,
                Err(e) => {
                    last_err = Some(e);
                    continue;
                }
            };
            let lengths: Vec<Q> = partition.iter().map(|iv| iv.b_hi - iv.b_lo).collect();
            let better = match &best {
                None => true,
                Some((best_len, _)) => lengths > *best_len,
            };
            if better {
                let regions = component.winner_regions(&partition)?;
                best = Some((
                    lengths,
                    AnalyzedComponent {
                        component,
                        partition,
                        regions,
                    },
                ));
            }
        }
        match best {
            Some((_, analyzed)) => out.push(analyzed),
            None => {
                return Err(last_err
                    .unwrap_or(TransversalError::CandidateSearchExhausted("?".into())))
            }
        }
    }
    Ok(out)
}

/// Convenience: total section area (the pdf normalizer) of a component set.
pub fn total_area(components: &[AnalyzedComponent]) -> Q {
    components
        .iter()
        .map(|c| c.component.alpha_eff / q(2))
        .sum()
}

/// Signed check that a point is on the open edge segment a = 1 of the
/// component (used by oracles to sample edge points).
pub fn edge_contains(comp: &SectionComponent, b: Q) -> bool {
    comp.b_bot <= b && b < comp.b_top
}

/// Find the partition interval containing b.
pub fn interval_at(partition: &[Interval], b: Q) -> Option<&Interval> {
    partition.iter().find(|iv| iv.b_lo <= b && b < iv.b_hi)
}

pub fn point(a: Q, b: Q) -> Point {
    (a, b)
}
