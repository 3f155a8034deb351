//! Independent oracles: brute-force winners, empirical gap samples with
//! the 10-tile congruence fast path, the Kolmogorov-Smirnov distance, the
//! closed-form Hall reference, and the sum-of-scaled-Halls signature.

use std::collections::HashSet;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::origami::{HolonomyOracle, Origami};
use crate::rational::{fmt_q, q, q_to_f64, qr, Q};
use crate::transversal::{SectionComponent, Winner};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("no candidate holonomy vector within the search bound")]
    NoCandidate,
}

/// Renormalized slope gaps R^2 (s_{i+1} - s_i) of the R-slope sequence.
#[derive(Clone, Debug)]
pub struct GapSample {
    pub bound: i64,
    /// sorted renormalized gaps, with multiplicity
    pub gaps: Vec<f64>,
    pub slope_count: usize,
}

fn gaps_from_slopes(mut slopes: Vec<Q>, bound: i64) -> GapSample {
    slopes.sort();
    slopes.dedup();
    let r2 = (bound * bound) as f64;
    let mut gaps: Vec<f64> = slopes
        .windows(2)
        .map(|w| q_to_f64(w[1] - w[0]) * r2)
        .collect();
    gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    GapSample {
        bound,
        gaps,
        slope_count: slopes.len(),
    }
}

/// Slopes between 0 and 1 of holonomy vectors with max component <= R, endpoints
/// 0 and 1 included, direct enumeration.
pub fn empirical_gaps(o: &Origami, bound: i64) -> GapSample {
    let oracle = HolonomyOracle::new(o.clone());
    let vecs = oracle.enumerate(bound, bound, q(0), Some(q(1)));
    let mut slopes: HashSet<Q> = vecs.iter().map(|&(x, y)| qr(y, x)).collect();
    slopes.insert(q(0));
    slopes.insert(q(1));
    gaps_from_slopes(slopes.into_iter().collect(), bound)
}

/// Fast path for the balanced 10-tile origami: slopes k/x for every
/// x <= R congruent to 0, 2, or 3 mod 5 (all such directions carry
/// holonomy vectors).
pub fn congruence_gaps_10tile(bound: i64) -> GapSample {
    let mut slopes: HashSet<Q> = HashSet::new();
    slopes.insert(q(0));
    slopes.insert(q(1));
    for x in 2..=bound {
        if !matches!(x % 5, 0 | 2 | 3) {
            continue;
        }
        for k in 1..x {
            slopes.insert(qr(k, x));
        }
    }
    gaps_from_slopes(slopes.into_iter().collect(), bound)
}

/// Exact slope set (reduced fractions) used by the tests that compare the
/// two paths.
pub fn slope_set(sample_source: &GapSample) -> &[f64] {
    &sample_source.gaps
}

/// One-sample Kolmogorov-Smirnov statistic of a sorted sample against a
/// CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(sample: &GapSample, cdf: F) -> f64 {
    let n = sample.gaps.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sample.gaps.iter().enumerate() {
        let fx = cdf(x);
        d = d.max((((i + 1) as f64) / n - fx).abs());
        d = d.max((fx - (i as f64) / n).abs());
    }
    d
}

/// Closed-form Hall pdf and CDF (the torus slope gap law).
pub fn hall_reference(t: f64) -> (f64, f64) {
    if t <= 0.0 {
        return (0.0, 0.0);
    }
    if t < 1.0 {
        return (0.0, 0.0);
    }
    let base_pdf = 2.0 * t.ln() / (t * t);
    let base_cdf = 2.0 * (1.0 - (1.0 + t.ln()) / t);
    if t < 4.0 {
        (base_pdf, base_cdf)
    } else {
        let s = (1.0 - 4.0 / t).sqrt();
        let at = s.atanh();
        (
            base_pdf - 4.0 / (t * t) * at,
            base_cdf - s + (4.0 / t) * at,
        )
    }
}

/// Brute-force winner oracle for a section component: enumerate all
/// holonomy vectors with scaled components <= B once, then answer
/// minimal-transformed-slope queries exactly.
pub struct BruteWinnerOracle<'a> {
    comp: &'a SectionComponent,
    candidates: Vec<Winner>,
}

impl<'a> BruteWinnerOracle<'a> {
    pub fn new(comp: &'a SectionComponent, bound: Q) -> BruteWinnerOracle<'a> {
        let d = comp.d;
        // scaled x <= B means unscaled x <= B d; scaled y <= B means
        // unscaled y <= B / d
        let bx = crate::rational::q_floor(bound * q(d));
        let by = crate::rational::q_floor(bound / q(d)).max(1);
        let vecs = comp.oracle().enumerate(bx, by, q(0), None);
        let candidates = vecs
            .into_iter()
            .filter(|&(_, y)| y > 0)
            .map(|(xu, yu)| Winner { xu, yu, d })
            .collect();
        BruteWinnerOracle { comp, candidates }
    }

    /// The holonomy vector of minimal positive transformed slope whose
    /// candidacy strip contains (a, b). Collinear in-strip multiples tie
    /// in transformed slope; the primitive one is returned.
    pub fn winner_at(&self, a: Q, b: Q) -> Result<Winner, VerifyError> {
        let mut best: Option<(Winner, Q, Q)> = None; // w, y, s
        for w in &self.candidates {
            let s = w.strip_value(a, b);
            if s <= Q::zero() || s > q(1) {
                continue;
            }
            let y = w.y();
            let better = match &best {
                None => true,
                Some((_, by, bs)) => {
                    // slope y/(a s) < by/(a bs) <=> y*bs < by*s
                    let lhs = y * *bs;
                    let rhs = *by * s;
                    lhs < rhs || (lhs == rhs && y < *by)
                }
            };
            if better {
                best = Some((*w, y, s));
            }
        }
        best.map(|(w, _, _)| w).ok_or(VerifyError::NoCandidate)
        // the component reference is kept for lifetime clarity only
    }

    pub fn component(&self) -> &SectionComponent {
        self.comp
    }
}

/// Classification of a pdf's breakpoints by one-sided derivatives.
#[derive(Clone, Debug, Serialize)]
pub struct HallSignature {
    /// breakpoints with unequal or infinite one-sided derivatives
    pub nonsmooth: Vec<String>,
    /// every nonsmooth tau has tau/4 or 4 tau nonsmooth as well; a false
    /// value certifies the pdf is not a finite sum of scaled Halls
    pub closure_ok: bool,
    /// nonsmooth points violating the dichotomy (empty iff closure_ok)
    pub witnesses: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OneSided {
    Finite(f64),
    Divergent,
}

/// One-sided derivative with Richardson extrapolation; divergence is
/// declared when three successive step halvings each grow the quotient
/// by more than 1.4x (the square-root cusp of arctanh terms gives
/// sqrt(2) per halving).
pub fn one_sided_derivative<F: Fn(f64) -> f64>(
    f: &F,
    t0: f64,
    side: f64,
    h0: f64,
) -> OneSided {
    let f0 = f(t0);
    let quot = |h: f64| side * (f(t0 + side * h) - f0) / h;
    let hs = [h0, h0 / 2.0, h0 / 4.0, h0 / 8.0];
    let ds: Vec<f64> = hs.iter().map(|&h| quot(h)).collect();
    let growing = (0..3).all(|i| ds[i + 1].abs() > 1.4 * ds[i].abs());
    if growing && ds[3].abs() > 1.0 {
        return OneSided::Divergent;
    }
    // Richardson: error O(h) -> 2 D(h/2) - D(h) has error O(h^2)
    OneSided::Finite(2.0 * ds[3] - ds[2])
}

/// Classify the breakpoints of a pdf given its evaluator; `eval` must be
/// right-continuous at breakpoints and continuous across them.
pub fn hall_signature<F: Fn(f64) -> f64>(breakpoints: &[Q], eval: F) -> HallSignature {
    let mut nonsmooth: Vec<Q> = Vec::new();
    for (i, &bp) in breakpoints.iter().enumerate() {
        let t0 = q_to_f64(bp);
        let mut h0 = (0.25 * t0).min(1e-4 * t0.max(1.0));
        for (j, &other) in breakpoints.iter().enumerate() {
            if i != j {
                h0 = h0.min(0.25 * (q_to_f64(other) - t0).abs());
            }
        }
        let left = one_sided_derivative(&eval, t0, -1.0, h0);
        let right = one_sided_derivative(&eval, t0, 1.0, h0);
        let is_nonsmooth = match (left, right) {
            (OneSided::Divergent, _) | (_, OneSided::Divergent) => true,
            (OneSided::Finite(l), OneSided::Finite(r)) => {
                (l - r).abs() > 1e-4 * l.abs().max(r.abs()).max(1e-2)
            }
        };
        if is_nonsmooth {
            nonsmooth.push(bp);
        }
    }
    let mut witnesses = Vec::new();
    for &tau in &nonsmooth {
        let quarter = tau / q(4);
        let four = tau * q(4);
        if !nonsmooth.contains(&quarter) && !nonsmooth.contains(&four) {
            witnesses.push(tau);
        }
    }
    HallSignature {
        closure_ok: witnesses.is_empty(),
        nonsmooth: nonsmooth.into_iter().map(fmt_q).collect(),
        witnesses: witnesses.into_iter().map(fmt_q).collect(),
    }
}

/// Independent swept-area oracle: the area of a winner region above the
/// time-t hyperbola, by adaptive quadrature of the column-length function
/// (no shared code with the closed-form evaluator).
pub fn swept_area_quadrature(region: &crate::gaps::RegionEval, t: f64, tol: f64) -> f64 {
    let verts = region.polygon.vertices();
    let xy = q_to_f64(region.x) / q_to_f64(region.y);
    let mut cuts: Vec<f64> = verts.iter().map(|&(a, _)| q_to_f64(a)).collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let n = verts.len();
    let column = |a: f64| -> f64 {
        // top and bottom of the polygon column at abscissa a
        let mut top = f64::NEG_INFINITY;
        let mut bot = f64::INFINITY;
        for i in 0..n {
            let (a1, b1) = verts[i];
            let (a2, b2) = verts[(i + 1) % n];
            let (a1, b1, a2, b2) = (q_to_f64(a1), q_to_f64(b1), q_to_f64(a2), q_to_f64(b2));
            if a1 == a2 {
                continue;
            }
            let (lo, hi) = if a1 < a2 { (a1, a2) } else { (a2, a1) };
            if a >= lo && a <= hi {
                let v = b1 + (b2 - b1) * (a - a1) / (a2 - a1);
                top = top.max(v);
                bot = bot.min(v);
            }
        }
        if !top.is_finite() || !bot.is_finite() {
            return 0.0;
        }
        let h = 1.0 / (a * t) - xy * a;
        (top - bot.max(h)).max(0.0)
    };
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += crate::quadrature::adaptive_simpson(&column, w[0], w[1], tol);
    }
    total
}

/// Synthetic sum of scaled Hall pdfs, for signature soundness tests:
/// sum of alpha_i * h(t / tau_i).
pub fn synthetic_hall_sum(terms: &[(f64, Q)]) -> (Vec<Q>, impl Fn(f64) -> f64 + '_) {
    let mut bps: Vec<Q> = terms
        .iter()
        .flat_map(|&(_, tau)| [tau, q(4) * tau])
        .collect();
    bps.sort();
    bps.dedup();
    let eval = move |t: f64| -> f64 {
        terms
            .iter()
            .map(|&(alpha, tau)| alpha * hall_reference(t / q_to_f64(tau)).0)
            .sum()
    };
    (bps, eval)
}
