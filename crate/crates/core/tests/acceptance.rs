//! Acceptance suite: one test per criterion, each printing a pass line
//! with its measured metric. Run with `--nocapture` to see the report.

use std::sync::Arc;
use std::time::Instant;

use origami_gaps::gaps::{covolume, total_pdf, PiecewisePdf};
use origami_gaps::orbit::OrbitGraph;
use origami_gaps::origami::Origami;
use origami_gaps::rational::{q, q_to_f64, qr, Q};
use origami_gaps::transversal::{cusp_components, AnalyzedComponent};
use origami_gaps::verify::{
    congruence_gaps_10tile, empirical_gaps, hall_reference, hall_signature, ks_distance,
    swept_area_quadrature, synthetic_hall_sum, BruteWinnerOracle,
};
use origami_gaps::words::{Letter, Word};

const TORUS: &str = "(1)|(1)";
const THREE: &str = "(1,2)|(1,3)";
const FOUR: &str = "(1,2)(3,4)|(2,3)";
const TEN: &str = "(1,2,3,4,5)(6,7,8,9,10)|(1,9)(2,10)";

fn components(text: &str) -> (Arc<OrbitGraph>, Vec<AnalyzedComponent>) {
    let o = Origami::parse(text).unwrap();
    let graph = Arc::new(OrbitGraph::build(&o, 100_000).unwrap());
    let comps = cusp_components(&graph).unwrap();
    (graph, comps)
}

fn pdf_of(text: &str) -> PiecewisePdf {
    total_pdf(&components(text).1)
}

/// Closed-form reference for the total pdf of the balanced 10-tile
/// origami: (33 t^2 / 8) f(t) piecewise in ln and arctanh terms.
fn reference_pdf(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let th = |u: f64| (1.0 - 1.0 / u).sqrt().atanh();
    let l2 = 2.0f64.ln();
    let l3 = 3.0f64.ln();
    let lt = t.ln();
    let n = if t < 1.0 {
        0.0
    } else if t < 2.0 {
        4.0 * lt
    } else if t < 3.0 {
        12.0 * lt - 8.0 * l2
    } else if t < 4.0 {
        15.0 * lt - 8.0 * l2 - 3.0 * l3
    } else if t < 16.0 / 3.0 {
        16.0 * lt - 10.0 * l2 - 3.0 * l3 - 8.0 * th(t / 4.0)
    } else if t < 6.0 {
        16.0 * lt - 10.0 * l2 - 3.0 * l3 - 8.0 * th(t / 4.0) - 4.0 * th(3.0 * t / 16.0)
    } else if t < 8.0 {
        12.0 * lt - 8.0 * l2 + l3 - 8.0 * th(t / 4.0) - 4.0 * th(t / 6.0)
    } else if t < 9.0 {
        10.0 * lt - 2.0 * l2 - l3 - 8.0 * th(t / 4.0) - 12.0 * th(t / 8.0)
    } else if t < 32.0 / 3.0 {
        10.0 * lt - 4.0 * l2 - l3 - 8.0 * th(t / 4.0) - 8.0 * th(t / 8.0)
    } else if t < 12.0 {
        10.0 * lt - 4.0 * l2 - l3 - 8.0 * th(t / 4.0) - 8.0 * th(t / 8.0)
            - 4.0 * th(3.0 * t / 32.0)
    } else if t < 16.0 {
        9.0 * lt - 4.0 * l2 - 8.0 * th(t / 4.0) - 8.0 * th(t / 8.0) - 4.0 * th(t / 12.0)
    } else {
        9.0 * lt - 4.0 * l2 - l3 - 8.0 * th(t / 4.0) - 8.0 * th(t / 8.0) - 2.0 * th(t / 12.0)
    };
    n * 8.0 / (33.0 * t * t)
}

#[test]
fn criterion_01_cusp_structure() {
    let start = Instant::now();
    let (graph, comps) = components(TEN);
    assert_eq!(graph.len(), 12, "orbit size");
    assert_eq!(comps.len(), 4, "cusp count");
    let mut widths: Vec<usize> = comps.iter().map(|c| c.component.cusp.width).collect();
    widths.sort_unstable();
    assert_eq!(widths, vec![1, 1, 5, 5]);
    // cusp-relatives match the golden conjugators up to isomorphism:
    // 1, S, T^3 S T^2 S, T^3 S T^2 applied inversely to the base surface
    use Letter::{S, T};
    let base = Origami::parse(TEN).unwrap();
    let golden = [
        Word::identity(),
        Word(vec![S]),
        Word(vec![T, T, T, S, T, T, S]),
        Word(vec![T, T, T, S, T, T]),
    ];
    for w in &golden {
        let expected = base.act_word(&w.inverse());
        let hit = comps
            .iter()
            .any(|c| c.component.cusp.cusp_relative.is_isomorphic(&expected));
        assert!(hit, "no cusp-relative isomorphic to {w}^-1 (base)");
    }
    // the parabolic generators fix the surface
    for c in &comps {
        let p = c.component.cusp.parabolic_word();
        assert!(base.act_word(&p).is_isomorphic(&base));
        assert_eq!(c.component.cusp.parabolic_matrix().trace().abs(), 2);
    }
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 1.0, "criterion 1 took {dt:?}");
    println!("[criterion 01] PASS: 4 cusps, widths {{5,1,1,5}}, orbit 12, word list matched ({dt:?})");
}

#[test]
fn criterion_02_winner_tables() {
    let start = Instant::now();
    let (_, comps) = components(TEN);
    let find = |width: usize, d: i64| {
        comps
            .iter()
            .find(|c| c.component.cusp.width == width && c.component.d == d)
            .unwrap()
    };
    let tuples = |c: &AnalyzedComponent| -> Vec<(Q, Q, Q)> {
        c.partition
            .iter()
            .map(|iv| (iv.b_lo, iv.winner.x(), iv.winner.y()))
            .collect()
    };
    // Omega1: scaled component of the base cusp
    let omega1 = find(5, 2);
    assert_eq!(
        tuples(omega1),
        vec![
            (qr(-5, 4), qr(5, 2), q(2)),
            (qr(-3, 4), qr(7, 2), q(4)),
            (qr(-5, 8), qr(3, 2), q(2)),
            (qr(-1, 4), q(1), q(2)),
        ]
    );
    // Omega2 and Omega3: the two width-1 cusps, told apart by y0
    let omega2 = comps
        .iter()
        .find(|c| c.component.cusp.width == 1 && c.component.y0 == q(2))
        .unwrap();
    assert_eq!(
        tuples(omega2),
        vec![
            (q(-1), q(2), q(2)),
            (qr(-1, 2), q(2), q(3)),
            (qr(-1, 3), q(1), q(2)),
        ]
    );
    let omega3 = comps
        .iter()
        .find(|c| c.component.cusp.width == 1 && c.component.y0 == q(1))
        .unwrap();
    assert_eq!(tuples(omega3), vec![(q(-1), q(1), q(1))]);
    // Omega4
    let omega4 = find(5, 1);
    let expected: Vec<(Q, i64, i64)> = vec![
        (q(-5), 5, 1),
        (q(-4), 4, 1),
        (q(-3), 6, 2),
        (qr(-5, 2), 5, 2),
        (q(-2), 4, 2),
        (qr(-3, 2), 5, 3),
        (qr(-4, 3), 6, 4),
        (qr(-5, 4), 4, 3),
        (q(-1), 1, 1),
    ];
    assert_eq!(
        tuples(omega4),
        expected
            .into_iter()
            .map(|(b, x, y)| (b, q(x), q(y)))
            .collect::<Vec<_>>()
    );
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 1.0, "criterion 2 took {dt:?}");
    println!("[criterion 02] PASS: winner tables for all four components exact ({dt:?})");
}

#[test]
fn criterion_03_distribution() {
    let start = Instant::now();
    let pdf = pdf_of(TEN);
    let expected = vec![
        q(1),
        q(2),
        q(3),
        q(4),
        qr(16, 3),
        q(6),
        q(8),
        q(9),
        qr(32, 3),
        q(12),
        q(16),
    ];
    assert_eq!(pdf.breakpoints, expected, "breakpoints");
    // 1000 log-spaced t in (0, 100]
    let mut max_err = 0.0f64;
    for k in 0..1000 {
        let t = 10f64.powf(-2.0 + 4.0 * k as f64 / 999.0);
        let err = (pdf.eval(t) - reference_pdf(t)).abs();
        max_err = max_err.max(err);
    }
    assert!(max_err <= 1e-10, "max |pdf - reference| = {max_err:e}");
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 5.0, "criterion 3 took {dt:?}");
    println!("[criterion 03] PASS: breakpoints exact, max pdf deviation {max_err:.2e} <= 1e-10 ({dt:?})");
}

#[test]
fn criterion_04_normalizer() {
    let pdf10 = pdf_of(TEN);
    assert_eq!(pdf10.total_area, qr(33, 8));
    let pdf1 = pdf_of(TORUS);
    assert_eq!(pdf1.total_area, qr(1, 2));
    println!("[criterion 04] PASS: section areas 33/8 (10-tile) and 1/2 (torus), exact");
}

#[test]
fn criterion_05_covolume() {
    let start = Instant::now();
    let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
    let mut worst = 0.0f64;
    for (text, index) in [(TORUS, 1.0), (THREE, 3.0), (FOUR, 6.0), (TEN, 12.0)] {
        let (_, comps) = components(text);
        let (v, _) = covolume(&comps);
        let expected = index * pi2_6;
        let rel = (v - expected).abs() / expected;
        worst = worst.max(rel);
        assert!(rel <= 1e-8, "{text}: covolume {v} vs {expected}, rel {rel:e}");
    }
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 30.0, "criterion 5 took {dt:?}");
    println!("[criterion 05] PASS: covolume = index * pi^2/6, worst relative error {worst:.2e} ({dt:?})");
}

#[test]
fn criterion_06_hall_reproduction() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for text in [TORUS, THREE] {
        let pdf = pdf_of(text);
        assert_eq!(pdf.breakpoints, vec![q(1), q(4)], "{text} breakpoints");
        for k in 0..1000 {
            let t = 0.05 + 30.0 * k as f64 / 999.0;
            let err = (pdf.eval(t) - hall_reference(t).0).abs();
            worst = worst.max(err);
        }
    }
    assert!(worst <= 1e-12, "worst |pdf - hall| = {worst:e}");
    let dt = start.elapsed();
    println!("[criterion 06] PASS: torus and three-tile reproduce Hall, worst deviation {worst:.2e} <= 1e-12 ({dt:?})");
}

#[test]
fn criterion_07_hall_signature() {
    let start = Instant::now();
    // Hall itself
    let sig = hall_signature(&[q(1), q(4)], |t| hall_reference(t).0);
    assert!(sig.closure_ok, "Hall closure");
    assert_eq!(sig.nonsmooth, vec!["1", "4"]);
    // synthetic sums h(t) + alpha h(t/tau), tau in {2, 4}
    for (alpha, tau) in [(0.75, 2i64), (1.25, 4)] {
        let terms = [(1.0, q(1)), (alpha, q(tau))];
        let (bps, eval) = synthetic_hall_sum(&terms);
        let sig = hall_signature(&bps, eval);
        assert!(sig.closure_ok, "synthetic tau={tau}");
    }
    // the 10-tile distribution fails the dichotomy with witness 16/3
    let pdf = pdf_of(TEN);
    let sig = hall_signature(&pdf.breakpoints, |t| pdf.eval(t));
    assert!(!sig.closure_ok);
    assert!(sig.nonsmooth.contains(&"16/3".to_string()));
    assert!(sig.witnesses.contains(&"16/3".to_string()));
    let dt = start.elapsed();
    println!("[criterion 07] PASS: Hall/synthetic closure holds; 10-tile fails with witness 16/3 ({dt:?})");
}

fn sample_points(
    comp: &origami_gaps::transversal::SectionComponent,
    regions: &[origami_gaps::transversal::WinnerRegion],
    count: usize,
    rng: &mut impl rand::Rng,
) -> Vec<((Q, Q), usize)> {
    let mut out = Vec::with_capacity(count);
    let den = 10_000i64;
    while out.len() < count {
        let a = qr(rng.gen_range(1..den), den);
        let b_top = (q(1) - comp.x0 * a) / comp.y0;
        let b_bot = b_top - comp.alpha_eff * a;
        let j = rng.gen_range(1..den);
        let b = b_bot + (b_top - b_bot) * qr(j, den);
        let inside: Vec<usize> = regions
            .iter()
            .enumerate()
            .filter(|(_, r)| r.polygon.contains_interior((a, b)))
            .map(|(i, _)| i)
            .collect();
        if inside.len() == 1 {
            out.push(((a, b), inside[0]));
        }
    }
    out
}

#[test]
fn criterion_08_oracle_agreement() {
    use rand::SeedableRng;
    let start = Instant::now();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20260809);
    let mut total = 0usize;
    for text in [TORUS, THREE, FOUR, TEN] {
        let (_, comps) = components(text);
        for c in &comps {
            let bound = q(20) * c.component.alpha_eff * c.component.x0.max(c.component.y0);
            let bound = bound.max(q(8));
            let oracle = BruteWinnerOracle::new(&c.component, bound);
            let pts = sample_points(&c.component, &c.regions, 1000, &mut rng);
            for ((a, b), region_idx) in pts {
                let label = c.regions[region_idx].winner;
                let brute = oracle.winner_at(a, b).expect("brute winner");
                assert_eq!(
                    (brute.xu, brute.yu),
                    (label.xu, label.yu),
                    "{text}: mismatch at ({a},{b})"
                );
                total += 1;
            }
        }
    }
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 60.0, "criterion 8 took {dt:?}");
    println!("[criterion 08] PASS: brute winner agrees at {total} random points, zero mismatches ({dt:?})");
}

#[test]
fn criterion_09_empirical_distribution() {
    let start = Instant::now();
    let pdf = pdf_of(TEN);
    let sample = congruence_gaps_10tile(2000);
    let d10 = ks_distance(&sample, |t| pdf.cdf(t));
    assert!(d10 <= 0.02, "10-tile KS {d10}");
    let torus_sample = empirical_gaps(&Origami::parse(TORUS).unwrap(), 500);
    let dh = ks_distance(&torus_sample, |t| hall_reference(t).1);
    assert!(dh <= 0.02, "torus KS {dh}");
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 120.0, "criterion 9 took {dt:?}");
    println!("[criterion 09] PASS: KS(10-tile congruence R=2000) = {d10:.4} <= 0.02, KS(torus R=500 vs Hall) = {dh:.4} <= 0.02 ({dt:?})");
}

#[test]
fn criterion_10_invariant_suites() {
    use rand::SeedableRng;
    let start = Instant::now();
    // group relations
    for text in [TORUS, THREE, FOUR, TEN] {
        let o = Origami::parse(text).unwrap();
        assert_eq!(o.act_s().act_s().act_s().act_s(), o, "{text}: S^4");
        let mut st6 = o.clone();
        for _ in 0..6 {
            st6 = st6.act_s().act_t();
        }
        // (TS)^6 = (ST)^6 = 1 in PSL; act order: rightmost first
        let mut ts6 = o.clone();
        for _ in 0..6 {
            ts6 = ts6.act_t().act_s();
        }
        assert!(st6.is_isomorphic(&o) && ts6.is_isomorphic(&o), "{text}: (ST)^6");
    }
    // cone angles: positive integers summing to the tile count
    for text in [TORUS, THREE, FOUR, TEN] {
        let o = Origami::parse(text).unwrap();
        let classes = o.vertex_classes();
        let total: usize = classes.iter().map(|c| c.len()).sum();
        assert_eq!(total, o.tile_count(), "{text}: total angle");
        assert!(classes.iter().all(|c| !c.is_empty()));
    }
    // exact region tiling
    for text in [TORUS, THREE, FOUR, TEN] {
        let (_, comps) = components(text);
        for c in &comps {
            let total: Q = c.regions.iter().map(|r| r.polygon.area()).sum();
            assert_eq!(total, c.component.alpha_eff / q(2), "{text}: tiling");
        }
    }
    // pdf nonnegativity and unit mass
    let pdf = pdf_of(TEN);
    for k in 0..2000 {
        let t = 0.01 + 30.0 * k as f64 / 1999.0;
        assert!(pdf.eval(t) >= 0.0, "pdf({t}) < 0");
    }
    let t0 = 200.0;
    let cuts: Vec<f64> = pdf.breakpoints.iter().map(|&b| q_to_f64(b)).collect();
    let f = |t: f64| pdf.eval(t);
    let (integral, _) =
        origami_gaps::quadrature::integrate_piecewise(&f, cuts, 1.0, t0, 1e-12);
    let tail = 1.0 - pdf.cdf(t0);
    let mass = integral + tail;
    assert!((mass - 1.0).abs() <= 1e-8, "pdf mass {mass}");
    assert!((pdf.cdf(1e9) - 1.0).abs() < 1e-6, "cdf limit");
    // pdf evaluator vs central finite difference of the independent
    // swept-area quadrature
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    use rand::Rng;
    let mut checked = 0usize;
    for region in &pdf.regions {
        let bps: Vec<f64> = region.breakpoints().iter().map(|&b| q_to_f64(b)).collect();
        let lo = bps.first().copied().unwrap_or(1.0);
        for _ in 0..100 {
            let t = rng.gen_range(lo * 1.02..30.0);
            if bps.iter().any(|&b| (t - b).abs() < 5e-3 * b.max(1.0)) {
                continue;
            }
            let h = 1e-5 * t;
            let a_plus = swept_area_quadrature(region, t + h, 1e-12);
            let a_minus = swept_area_quadrature(region, t - h, 1e-12);
            let fd = (a_plus - a_minus) / (2.0 * h);
            let analytic = region.pdf_eval(t);
            let denom = analytic.abs().max(1e-4);
            assert!(
                ((fd - analytic) / denom).abs() < 1e-5,
                "region pdf {analytic} vs finite difference {fd} at t={t}"
            );
            checked += 1;
        }
    }
    assert!(checked > 1000, "enough finite-difference checks ran");
    let dt = start.elapsed();
    println!("[criterion 10] PASS: relations, cone angles, exact tiling, pdf mass {mass:.10}, {checked} finite-difference checks ({dt:?})");
}
