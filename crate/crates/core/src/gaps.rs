//! From winner regions to the exact slope gap distribution: rational
//! breakpoints, per-piece analytic pdf evaluation, the closed-form CDF,
//! and the covolume integral.
//!
//! For a winner (x, y) the return time at (a, b) is t = y/(a(ax+by)), so
//! the time-t sublevel set of a region is the part above the hyperbola
//! b = 1/(at) - (x/y)a. Differentiating the swept area in t gives
//! dA/dt = (1/t^2) * sum over the maximal a-intervals where the hyperbola
//! runs inside the polygon of ln(a_exit/a_entry).

use num_traits::Zero;
use serde::Serialize;

use crate::geometry::Polygon;
use crate::quadrature::tanh_sinh;
use crate::rational::{fmt_q, q, q_to_f64, Q};
use crate::transversal::AnalyzedComponent;

/// Probe position inside an open interval: an irrational fraction, so a
/// probe can never coincide with the rational tangency abscissas that sit
/// at dyadic positions of rational intervals.
const PROBE: f64 = 0.618_033_988_749_894_9;

/// One winner region prepared for analytic evaluation.
pub struct RegionEval {
    /// owning component index
    pub component: usize,
    /// scaled winner components
    pub x: Q,
    pub y: Q,
    pub polygon: Polygon,
    edges: Vec<Edge>,
    xy: f64, // x/y
}

#[derive(Clone, Copy, Debug)]
struct Edge {
    a1: Q,
    a2: Q,
    // non-vertical: b = m a + c on [a1, a2]; vertical: a1 == a2
    m: Q,
    c: Q,
    vertical: bool,
    b1: Q,
    b2: Q,
}

/// Crossing interval descriptor used for piece metadata: the indices of
/// the polygon edges through which the hyperbola enters and exits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Crossing {
    pub entry_edge: usize,
    pub exit_edge: usize,
}

impl RegionEval {
    pub fn new(component: usize, x: Q, y: Q, polygon: Polygon) -> RegionEval {
        let verts = polygon.vertices().to_vec();
        let n = verts.len();
        let mut edges = Vec::with_capacity(n);
        for i in 0..n {
            let (a1, b1) = verts[i];
            let (a2, b2) = verts[(i + 1) % n];
            if a1 == a2 {
                edges.push(Edge {
                    a1,
                    a2,
                    m: Q::zero(),
                    c: Q::zero(),
                    vertical: true,
                    b1,
                    b2,
                });
            } else {
                let m = (b2 - b1) / (a2 - a1);
                let c = b1 - m * a1;
                let (lo, hi) = if a1 < a2 { (a1, a2) } else { (a2, a1) };
                edges.push(Edge {
                    a1: lo,
                    a2: hi,
                    m,
                    c,
                    vertical: false,
                    b1,
                    b2,
                });
            }
        }
        let xy = q_to_f64(x) / q_to_f64(y);
        RegionEval {
            component,
            x,
            y,
            polygon,
            edges,
            xy,
        }
    }

    /// Exact breakpoint candidates of this region's swept-area function:
    /// vertex passage times and interior edge tangency times.
    pub fn breakpoints(&self) -> Vec<Q> {
        let mut out = Vec::new();
        for &(a, b) in self.polygon.vertices() {
            if a > Q::zero() {
                let s = a * self.x + b * self.y;
                if s > Q::zero() {
                    out.push(self.y / (a * s));
                }
            }
        }
        let xy = self.x / self.y;
        for e in &self.edges {
            if e.vertical {
                continue;
            }
            let k = e.m + xy;
            if k < Q::zero() && !e.c.is_zero() {
                let t = q(-4) * k / (e.c * e.c);
                let a_star = -e.c / (q(2) * k);
                if t > Q::zero() && e.a1 < a_star && a_star < e.a2 {
                    out.push(t);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn hyp(&self, a: f64, t: f64) -> f64 {
        1.0 / (a * t) - self.xy * a
    }

    /// All a-values where the hyperbola meets the polygon boundary at
    /// time t, plus vertex abscissas; sorted, tagged by the edge index.
    fn critical_points(&self, t: f64) -> Vec<(f64, usize)> {
        const VERTEX: usize = usize::MAX;
        let mut crit: Vec<(f64, usize)> = Vec::new();
        for &(a, _) in self.polygon.vertices() {
            crit.push((q_to_f64(a), VERTEX));
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.vertical {
                let a = q_to_f64(e.a1);
                let h = self.hyp(a, t);
                let (lo, hi) = {
                    let b1 = q_to_f64(e.b1);
                    let b2 = q_to_f64(e.b2);
                    (b1.min(b2), b1.max(b2))
                };
                if h >= lo && h <= hi {
                    crit.push((a, i));
                }
                continue;
            }
            // k a^2 + c a - 1/t = 0 with k = m + x/y
            let k = q_to_f64(e.m) + self.xy;
            let c = q_to_f64(e.c);
            let (a1, a2) = (q_to_f64(e.a1), q_to_f64(e.a2));
            let inv_t = 1.0 / t;
            if k == 0.0 {
                if c != 0.0 {
                    let r = inv_t / c;
                    if r >= a1 && r <= a2 {
                        crit.push((r, i));
                    }
                }
                continue;
            }
            let disc = c * c + 4.0 * k * inv_t;
            if disc < 0.0 {
                continue;
            }
            let sq = disc.sqrt();
            // stable roots of k a^2 + c a - 1/t = 0
            let (r1, r2) = if c != 0.0 {
                let qq = -0.5 * (c + c.signum() * sq);
                (qq / k, -inv_t / qq)
            } else {
                let r = (inv_t / k).abs().sqrt();
                (r, -r)
            };
            for r in [r1, r2] {
                if r >= a1 && r <= a2 {
                    crit.push((r, i));
                }
            }
        }
        crit.sort_by(|p, r| p.0.partial_cmp(&r.0).unwrap());
        crit
    }

    /// Polygon top and bottom boundary values at abscissa a (a strictly
    /// inside the polygon's a-extent).
    fn bounds_at(&self, a: f64) -> (f64, f64) {
        let mut top = f64::NEG_INFINITY;
        let mut bot = f64::INFINITY;
        for e in &self.edges {
            if e.vertical {
                continue;
            }
            let (a1, a2) = (q_to_f64(e.a1), q_to_f64(e.a2));
            if a >= a1 && a <= a2 {
                let v = q_to_f64(e.m) * a + q_to_f64(e.c);
                top = top.max(v);
                bot = bot.min(v);
            }
        }
        (bot, top)
    }

    /// Maximal a-intervals where the hyperbola runs strictly inside the
    /// polygon, with the edge tags crossed at both ends.
    fn inside_intervals(&self, t: f64) -> Vec<(f64, f64, usize, usize)> {
        let crit = self.critical_points(t);
        let mut out: Vec<(f64, f64, usize, usize)> = Vec::new();
        for w in crit.windows(2) {
            let (u, tag_u) = w[0];
            let (v, tag_v) = w[1];
            if v <= u {
                continue;
            }
            let mid = u + PROBE * (v - u);
            let (bot, top) = self.bounds_at(mid);
            let h = self.hyp(mid, t);
            if h > bot && h < top {
                // merge with the previous interval when contiguous
                if let Some(last) = out.last_mut() {
                    if last.1 == u {
                        last.1 = v;
                        last.3 = tag_v;
                        continue;
                    }
                }
                out.push((u, v, tag_u, tag_v));
            }
        }
        out
    }

    /// dA/dt at time t (the right-continuous limit at breakpoints).
    pub fn pdf_eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let sum: f64 = self
            .inside_intervals(t)
            .iter()
            .map(|&(u, v, _, _)| (v / u).ln())
            .sum();
        sum / (t * t)
    }

    /// Swept area A(t): the part of the polygon on or above the time-t
    /// hyperbola, in closed form per sub-interval.
    pub fn swept_area(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let crit = self.critical_points(t);
        let mut total = 0.0;
        for w in crit.windows(2) {
            let (u, _) = w[0];
            let (v, _) = w[1];
            // slivers from near-tangent double roots carry no area
            if v <= u || v - u < 1e-12 {
                continue;
            }
            let mid = u + PROBE * (v - u);
            let (bot, top) = self.bounds_at(mid);
            if !(bot.is_finite() && top.is_finite()) {
                continue;
            }
            let h = self.hyp(mid, t);
            if h >= top {
                continue;
            }
            let width = v - u;
            // top and bottom are linear across the open sub-interval, so
            // the trapezoid evaluation just inside the ends is exact
            let (bot_u, top_u) = self.bounds_at(u + 1e-14 * width);
            let (bot_v, top_v) = self.bounds_at(v - 1e-14 * width);
            let top_int = 0.5 * (top_u + top_v) * width;
            if h <= bot {
                total += top_int - 0.5 * (bot_u + bot_v) * width;
            } else {
                // integral of the hyperbola 1/(at) - (x/y) a
                let hyp_int = (v / u).ln() / t - 0.5 * self.xy * (v * v - u * u);
                total += top_int - hyp_int;
            }
        }
        total
    }

    /// Crossing combinatorics at time t, for piece metadata.
    pub fn crossings(&self, t: f64) -> Vec<Crossing> {
        self.inside_intervals(t)
            .iter()
            .map(|&(_, _, e_in, e_out)| Crossing {
                entry_edge: e_in,
                exit_edge: e_out,
            })
            .collect()
    }
}

/// Piece metadata: the frozen crossing combinatorics of every region on
/// one open interval between consecutive breakpoints.
#[derive(Serialize)]
pub struct PieceMeta {
    pub t_lo: String,
    pub t_hi: Option<String>,
    pub crossings: Vec<RegionCrossings>,
}

#[derive(Serialize, PartialEq, Eq)]
pub struct RegionCrossings {
    pub region: usize,
    pub intervals: Vec<Crossing>,
}

/// The exact slope gap distribution: rational breakpoints plus per-region
/// analytic evaluators and the total-area normalizer.
pub struct PiecewisePdf {
    pub breakpoints: Vec<Q>,
    pub regions: Vec<RegionEval>,
    pub total_area: Q,
}

impl PiecewisePdf {
    /// Normalized pdf value (right-continuous at breakpoints).
    pub fn eval(&self, t: f64) -> f64 {
        let raw: f64 = self.regions.iter().map(|r| r.pdf_eval(t)).sum();
        raw / q_to_f64(self.total_area)
    }

    /// Normalized CDF value.
    pub fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let raw: f64 = self.regions.iter().map(|r| r.swept_area(t)).sum();
        raw / q_to_f64(self.total_area)
    }

    /// First positive support point.
    pub fn support_start(&self) -> Q {
        self.breakpoints[0]
    }

    fn signature(&self, t: f64) -> Vec<RegionCrossings> {
        self.regions
            .iter()
            .enumerate()
            .map(|(i, r)| RegionCrossings {
                region: i,
                intervals: r.crossings(t),
            })
            .collect()
    }

    /// Per-piece metadata with the crossing combinatorics sampled at each
    /// piece's midpoint.
    pub fn pieces(&self) -> Vec<PieceMeta> {
        let mut out = Vec::new();
        let n = self.breakpoints.len();
        for i in 0..n {
            let t_lo = self.breakpoints[i];
            let t_hi = self.breakpoints.get(i + 1).copied();
            let probe = match t_hi {
                Some(hi) => 0.5 * (q_to_f64(t_lo) + q_to_f64(hi)),
                None => q_to_f64(t_lo) * 1.5,
            };
            out.push(PieceMeta {
                t_lo: fmt_q(t_lo),
                t_hi: t_hi.map(fmt_q),
                crossings: self.signature(probe),
            });
        }
        out
    }
}

/// Assemble the total distribution from analyzed components. Breakpoint
/// candidates (vertex and tangency times) are kept only where the
/// crossing combinatorics of some region actually changes.
pub fn total_pdf(components: &[AnalyzedComponent]) -> PiecewisePdf {
    let mut regions = Vec::new();
    let mut total_area = Q::zero();
    for (ci, comp) in components.iter().enumerate() {
        total_area += comp.component.alpha_eff / q(2);
        for r in &comp.regions {
            regions.push(RegionEval::new(
                ci,
                r.winner.x(),
                r.winner.y(),
                r.polygon.clone(),
            ));
        }
    }
    let mut candidates: Vec<Q> = regions.iter().flat_map(|r| r.breakpoints()).collect();
    candidates.sort();
    candidates.dedup();
    let pdf = PiecewisePdf {
        breakpoints: candidates,
        regions,
        total_area,
    };
    prune_breakpoints(pdf)
}

fn prune_breakpoints(pdf: PiecewisePdf) -> PiecewisePdf {
    let bps = pdf.breakpoints.clone();
    if bps.is_empty() {
        return pdf;
    }
    let mut probes: Vec<f64> = Vec::with_capacity(bps.len() + 1);
    probes.push(0.5 * q_to_f64(bps[0]));
    for w in bps.windows(2) {
        probes.push(0.5 * (q_to_f64(w[0]) + q_to_f64(w[1])));
    }
    probes.push(q_to_f64(*bps.last().unwrap()) + 1.0);
    let sigs: Vec<Vec<RegionCrossings>> = probes.iter().map(|&p| pdf.signature(p)).collect();
    let kept: Vec<Q> = bps
        .iter()
        .enumerate()
        .filter(|&(i, _)| sigs[i] != sigs[i + 1])
        .map(|(_, &b)| b)
        .collect();
    PiecewisePdf {
        breakpoints: kept,
        ..pdf
    }
}

/// Covolume: the integral of the return time over the whole section,
/// computed per region in (a, s = ax + by) coordinates where the
/// integrand is 1/(a s). Returns (value, error_estimate).
pub fn covolume(components: &[AnalyzedComponent]) -> (f64, f64) {
    let mut total = 0.0;
    let mut err_total = 0.0;
    for comp in components {
        for r in &comp.regions {
            let x = r.winner.x();
            let y = r.winner.y();
            // shear (a, b) -> (a, s); convexity and orientation preserved
            let mapped: Vec<(Q, Q)> = r
                .polygon
                .vertices()
                .iter()
                .map(|&(a, b)| (a, a * x + b * y))
                .collect();
            let poly = Polygon::new(mapped);
            let (v, e) = integrate_inv_as(&poly);
            total += v;
            err_total += e;
        }
    }
    (total, err_total)
}

/// Integral of 1/(a s) over a convex polygon in the (a, s) plane with
/// a >= 0 and 0 <= s <= 1 (isolated boundary touches allowed; the
/// logarithmic edge singularity at s = 0 is integrable).
fn integrate_inv_as(poly: &Polygon) -> (f64, f64) {
    // strips between consecutive vertex abscissas: on each strip the top
    // and bottom boundaries are single line segments
    let verts = poly.vertices();
    let mut cuts: Vec<Q> = verts.iter().map(|&(a, _)| a).collect();
    cuts.sort();
    cuts.dedup();
    let n = verts.len();
    let mut lines: Vec<(Q, Q, Q, Q)> = Vec::new(); // a_lo, a_hi, m, c
    for i in 0..n {
        let (a1, s1) = verts[i];
        let (a2, s2) = verts[(i + 1) % n];
        if a1 == a2 {
            continue;
        }
        let m = (s2 - s1) / (a2 - a1);
        let c = s1 - m * a1;
        let (lo, hi) = if a1 < a2 { (a1, a2) } else { (a2, a1) };
        lines.push((lo, hi, m, c));
    }
    let mut total = 0.0;
    let mut err_total = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mid = (lo + hi) / q(2);
        let covering: Vec<&(Q, Q, Q, Q)> = lines
            .iter()
            .filter(|(a1, a2, _, _)| *a1 <= mid && mid <= *a2)
            .collect();
        if covering.len() < 2 {
            continue;
        }
        let eval_at = |l: &(Q, Q, Q, Q), a: Q| l.2 * a + l.3;
        let top = covering
            .iter()
            .max_by(|p, r| eval_at(p, mid).cmp(&eval_at(r, mid)))
            .unwrap();
        let bot = covering
            .iter()
            .min_by(|p, r| eval_at(p, mid).cmp(&eval_at(r, mid)))
            .unwrap();
        let (bm, bc) = (q_to_f64(bot.2), q_to_f64(bot.3));
        let (dm, dc) = (q_to_f64(top.2) - bm, q_to_f64(top.3) - bc);
        // g(a) = ln(s_top/s_bot)/a = ln1p((dm a + dc)/s_bot)/a, which
        // stays accurate when the strip is thin near a = 0
        let g = move |a: f64| {
            let sb = bm * a + bc;
            let diff = dm * a + dc;
            if sb <= 0.0 || diff < 0.0 {
                return 0.0;
            }
            (diff / sb).ln_1p() / a
        };
        let (v, e) = tanh_sinh(g, q_to_f64(lo), q_to_f64(hi), 1e-13);
        total += v;
        err_total += e;
    }
    (total, err_total)
}
