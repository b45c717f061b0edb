//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails. Residual curves are written under
//! `target/acceptance/`.

use std::path::PathBuf;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use renorm_core::cases::{
    exact_values, logistic_system, solve_case, BoundaryLayerParams, CaseStudy, DomainWallParams,
    HtrCubicParams, IllustrationParams, VanDerPolParams,
};
use renorm_core::newton::{
    difference_table, envelope_tolerance, newton_reconstruct, partial_delta_m, DEFAULT_ORDER,
};
use renorm_core::renorm::{residual_scan, solve_renorm, Identification};
use renorm_core::seqalg::scalar::{gaussian, ratio};
use renorm_core::seqalg::{Exact, ExpBinomSeq, Scalar};
use renorm_core::verify::{
    envelope, report_csv, report_json, verify_case, verify_ladder, ladder_csv,
};

const SEED: u64 = 0x5eed_2026;
const POLY_COUNT: usize = 200;
const ALGEBRA_COUNT: usize = 500;
const PUBLISHED_TOL: f64 = 1e-9;
const ORDER_BAND: (f64, f64) = (1.7, 2.3);
const BOUNDARY_TOL: f64 = 1e-9;
const ENVELOPE_REL_TOL: f64 = 0.10;
const LOGISTIC_TOL: f64 = 1e-3;
const MANIFOLD_FACTOR: f64 = 5.0;
const SLOW_FACTOR: f64 = 5.0;
const MANIFOLD_ORDER_MIN: f64 = 1.7;
const HTR_REL_TOL: f64 = 0.05;
const WALL_DECAY_TOL: f64 = 1e-6;
const WALL_RESIDUAL_FACTOR: f64 = 1.5;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn in_band(v: f64) -> bool {
    v >= ORDER_BAND.0 && v <= ORDER_BAND.1
}

fn random_poly(rng: &mut ChaCha8Rng) -> (Vec<i64>, i64) {
    let degree = rng.gen_range(0..=DEFAULT_ORDER);
    let coeffs = (0..=degree).map(|_| rng.gen_range(-20..=20)).collect();
    (coeffs, rng.gen_range(-50..=50))
}

fn poly_at<S: Scalar>(coeffs: &[i64], n: i64) -> S {
    coeffs
        .iter()
        .rev()
        .fold(S::zero(), |acc, &c| acc * S::from_i64(n) + S::from_i64(c))
}

fn newton_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = 0;
    for _ in 0..POLY_COUNT {
        let (coeffs, m) = random_poly(&mut rng);
        let y = |n: i64| poly_at::<Exact>(&coeffs, n);
        let table = difference_table(&y, m, DEFAULT_ORDER);
        if (m - 25..=m + 25).any(|n| newton_reconstruct(&table, n) != y(n)) {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!("{POLY_COUNT} polynomials, degree <= {DEFAULT_ORDER}, {failures} inexact"),
    )
}

fn envelope_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut exact_bad, mut worst) = (0, 0.0_f64);
    for _ in 0..POLY_COUNT {
        let (coeffs, m) = random_poly(&mut rng);
        let ye = |n: i64| poly_at::<Exact>(&coeffs, n);
        let yf = |n: i64| poly_at::<Complex64>(&coeffs, n);
        for n in m - 10..=m + 10 {
            if !partial_delta_m(&ye, m, n, DEFAULT_ORDER).vanishes() {
                exact_bad += 1;
            }
            // magnitude: largest |y| among the samples the check touches
            let lo = n.min(m);
            let hi = n.max(m + 1 + DEFAULT_ORDER as i64);
            let scale = (lo..=hi).map(|j| yf(j).norm()).fold(0.0, f64::max);
            let r = partial_delta_m(&yf, m, n, DEFAULT_ORDER).norm();
            worst = worst.max(r / envelope_tolerance(scale));
        }
    }
    outcome(
        exact_bad == 0 && worst <= 1.0,
        format!("exact nonzero: {exact_bad}; float residual / (1e-9 (1 + max|y|)) max {worst:.3e}"),
    )
}

fn random_seq(rng: &mut ChaCha8Rng, m: i64) -> ExpBinomSeq<Exact> {
    let bases = [ratio(1, 1), ratio(2, 1), ratio(-1, 2), gaussian(0, 1), gaussian(1, 1)];
    let mut s = ExpBinomSeq::zero(m);
    for _ in 0..rng.gen_range(1..=3) {
        let c = gaussian(rng.gen_range(-5..=5), rng.gen_range(-5..=5));
        let r = bases[rng.gen_range(0..bases.len())].clone();
        let t = ExpBinomSeq::make_term(c, r, m, rng.gen_range(0..=3)).expect("nonzero base");
        s = s.add(&t).expect("shared anchor");
    }
    s
}

fn algebra_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let mut bad = [0usize; 4];
    for _ in 0..ALGEBRA_COUNT {
        let m = rng.gen_range(-5..=5);
        let (u, v) = (random_seq(&mut rng, m), random_seq(&mut rng, m));
        // D(uv) = Du v + u Dv + Du Dv
        let lhs = u.product(&v).unwrap().delta();
        let (du, dv) = (u.delta(), v.delta());
        let rhs = du
            .product(&v)
            .unwrap()
            .add(&u.product(&dv).unwrap())
            .unwrap()
            .add(&du.product(&dv).unwrap())
            .unwrap();
        if !lhs.sub(&rhs).unwrap().is_zero() {
            bad[0] += 1;
        }
        let k = rng.gen_range(1..=6);
        let unit = ExpBinomSeq::make_term(Exact::one(), Exact::one(), m, k).unwrap();
        let lower = ExpBinomSeq::make_term(Exact::one(), Exact::one(), m, k - 1).unwrap();
        if unit.delta() != lower {
            bad[1] += 1;
        }
        let (a, b) = (rng.gen_range(-10..0), rng.gen_range(1..10));
        let sum = (a..b).fold(Exact::zero(), |acc, n| acc + du.eval(n));
        if sum != u.eval(b) - u.eval(a) {
            bad[2] += 1;
        }
        let j = rng.gen_range(-3..=3);
        let m2 = rng.gen_range(-5..=5);
        let sum_uv = u.add(&v).unwrap();
        let prod = u.product(&v).unwrap();
        let (shifted, moved) = (u.shift(j), u.reanchor(m2));
        let pointwise_ok = (-8..8).all(|n| {
            sum_uv.eval(n) == u.eval(n) + v.eval(n)
                && prod.eval(n) == u.eval(n) * v.eval(n)
                && shifted.eval(n) == u.eval(n + j)
                && du.eval(n) == u.eval(n + 1) - u.eval(n)
                && moved.eval(n) == u.eval(n)
        });
        if !pointwise_ok {
            bad[3] += 1;
        }
    }
    outcome(
        bad.iter().all(|&b| b == 0),
        format!(
            "{ALGEBRA_COUNT} instances; failures product {}, binomial {}, telescoping {}, pointwise {}",
            bad[0], bad[1], bad[2], bad[3]
        ),
    )
}

fn illustration() -> Outcome {
    let p = IllustrationParams::default();
    let case = CaseStudy::Illustration(p.clone());
    let g = solve_case(&case, 1).unwrap().global.with_form(Identification::Exponential);
    // C0 cos(n w) + D0 sin(n w) with w = (eps + pi)/2 through y(0), y(1)
    let w = 0.5 * (p.epsilon + std::f64::consts::PI);
    let c0 = p.y0;
    let d0 = (p.y1 - c0 * w.cos()) / w.sin();
    let gap = (0..=case.window() as i64)
        .map(|n| {
            let x = n as f64 * w;
            (g.evaluate(n) - Complex64::new(c0 * x.cos() + d0 * x.sin(), 0.0)).norm()
        })
        .fold(0.0, f64::max);
    let ladder = verify_ladder(&case, &[0.1, 0.05, 0.025], 1, None).unwrap();
    let order = ladder.empirical_order.unwrap();
    outcome(
        gap <= PUBLISHED_TOL && in_band(order),
        format!("max |engine - published| {gap:.2e}; ladder order {order:.3}"),
    )
}

fn boundary_layer() -> Outcome {
    let case = CaseStudy::BoundaryLayer(BoundaryLayerParams::default());
    let mut worst_bc = 0.0_f64;
    for eps in [0.04, 0.02, 0.01] {
        let c = case.clone().with_primary(eps);
        let CaseStudy::BoundaryLayer(p) = &c else { unreachable!() };
        let g = solve_case(&c, 1).unwrap().global;
        worst_bc = worst_bc
            .max((g.evaluate(0).re - p.alpha).abs())
            .max((g.evaluate(p.n as i64).re - p.beta).abs());
    }
    let ladder = verify_ladder(&case, &[0.04, 0.02, 0.01], 1, None).unwrap();
    let order = ladder.empirical_order.unwrap();
    let sups: Vec<String> = ladder.reports.iter().map(|r| format!("{:.3e}", r.sup_error)).collect();
    outcome(
        worst_bc <= BOUNDARY_TOL && in_band(order),
        format!(
            "boundary mismatch {worst_bc:.2e}; sup errors [{}]; ladder order {order:.3}",
            sups.join(", ")
        ),
    )
}

fn van_der_pol() -> Outcome {
    let p = VanDerPolParams::default();
    let case = CaseStudy::VanDerPol(p.clone());
    let (y, _) = exact_values(&case, 100).unwrap();
    let period = (2.0 * std::f64::consts::PI / p.theta).ceil() as usize;
    let env = envelope(&y, period);
    let a0 = Complex64::new(p.amplitude_re, p.amplitude_im).norm();
    let dev = env
        .iter()
        .enumerate()
        .map(|(n, e)| {
            let want = 2.0 * a0 * (n as f64 * p.epsilon).exp();
            (e - want).abs() / want
        })
        .fold(0.0, f64::max);
    let engine = verify_case(&case, 1, None).unwrap().sup_rel_error;

    let sys = logistic_system(1.0);
    let e = Complex64::new(0.01, 0.0);
    let end = |b0: f64| {
        let path = &solve_renorm(&sys, &e, &[Complex64::new(b0, 0.0)], 2000).unwrap()[0];
        path.at(2000).re
    };
    let (from_small, from_large, from_zero) = (end(0.1), end(2.0), end(0.0));
    let logistic_ok = (from_small - 1.0).abs() <= LOGISTIC_TOL
        && (from_large - 1.0).abs() <= LOGISTIC_TOL
        && from_zero == 0.0;
    outcome(
        dev <= ENVELOPE_REL_TOL && engine <= ENVELOPE_REL_TOL && logistic_ok,
        format!(
            "envelope vs 2|A0|e^(n eps) {dev:.3e}, vs engine {engine:.3e}; logistic B(2000) from 0.1, 2, 0: {from_small:.6}, {from_large:.6}, {from_zero}"
        ),
    )
}

fn reduction() -> Outcome {
    let case = CaseStudy::from_name("reduction").unwrap();
    let eps = case.primary_value();
    let r = verify_case(&case, 1, Some(50)).unwrap();
    let dist = r.manifold_distance.unwrap();
    let slow = r.sup_error;
    let ladder = verify_ladder(&case, &[0.04, 0.02, 0.01], 1, None).unwrap();
    let order = ladder.manifold_order.unwrap();
    outcome(
        dist <= MANIFOLD_FACTOR * eps * eps && slow <= SLOW_FACTOR * eps && order >= MANIFOLD_ORDER_MIN,
        format!(
            "manifold distance {dist:.3e} (bound {:.1e}); |x - c| {slow:.3e} (bound {:.1e}); distance order {order:.3}",
            MANIFOLD_FACTOR * eps * eps,
            SLOW_FACTOR * eps
        ),
    )
}

fn htr_cubic() -> Outcome {
    let case = CaseStudy::HtrCubic(HtrCubicParams::default());
    let r = verify_case(&case, 1, Some(100)).unwrap();
    outcome(
        r.sup_rel_error <= HTR_REL_TOL,
        format!("max relative deviation {:.3e} for n <= 100", r.sup_rel_error),
    )
}

fn out_dir() -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    std::fs::create_dir_all(&dir).expect("create output directory");
    dir
}

fn domain_wall() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for lambda in [0.1, 0.2, 0.4] {
        let case = CaseStudy::HtrDomainWall(DomainWallParams {
            lambda,
            ..Default::default()
        });
        let g = solve_case(&case, 1).unwrap().global;
        let horizon = case.window() as i64;
        let start_ok = g.evaluate(0) == Complex64::new(1.0, 0.0);
        let tail = (horizon..=horizon + 200)
            .map(|n| g.evaluate(n).norm())
            .fold(0.0, f64::max);
        let scan = residual_scan(&g, &|y, n| case.residual(y, n), 0..=horizon);
        let bound = WALL_RESIDUAL_FACTOR * lambda * lambda;
        let path = out_dir().join(format!("domain_wall_residual_lambda_{lambda}.csv"));
        let mut csv = String::from("n,residual\n");
        for (n, v) in scan.n.iter().zip(&scan.values) {
            csv.push_str(&format!("{n},{:?}\n", v.re));
        }
        std::fs::write(&path, csv).expect("write residual curve");
        pass &= start_ok && tail < WALL_DECAY_TOL && scan.sup <= bound;
        parts.push(format!(
            "lambda {lambda}: y(0)=1 {start_ok}, tail {tail:.1e}, sup residual {:.3e} (bound {bound:.2e})",
            scan.sup
        ));
    }
    parts.push(format!("curves in {}", out_dir().display()));
    outcome(pass, parts.join("; "))
}

fn write_reports(dir: &std::path::Path) {
    for name in renorm_core::cases::CASE_NAMES {
        let case = CaseStudy::from_name(name).unwrap();
        let r = verify_case(&case, 1, None).unwrap();
        std::fs::write(dir.join(format!("{name}.csv")), report_csv(&r)).unwrap();
        std::fs::write(dir.join(format!("{name}.json")), report_json(&r)).unwrap();
        let ladder = verify_ladder(&case, &case.default_ladder(), 1, None).unwrap();
        std::fs::write(dir.join(format!("{name}-ladder.csv")), ladder_csv(&ladder)).unwrap();
    }
}

fn determinism() -> Outcome {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    write_reports(a.path());
    write_reports(b.path());
    let mut names: Vec<_> = std::fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    let differing: Vec<String> = names
        .iter()
        .filter(|f| std::fs::read(a.path().join(f)).unwrap() != std::fs::read(b.path().join(f)).unwrap_or_default())
        .map(|f| f.to_string_lossy().into_owned())
        .collect();
    outcome(
        differing.is_empty() && !names.is_empty(),
        format!("{} files compared, differing: {:?}", names.len(), differing),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("C1 newton exactness", newton_exactness),
        ("C2 envelope identity", envelope_identity),
        ("C3 sequence algebra", algebra_suite),
        ("C4 illustration", illustration),
        ("C5 boundary layer", boundary_layer),
        ("C6 van der pol", van_der_pol),
        ("C7 reduction", reduction),
        ("C8 htr cubic", htr_cubic),
        ("C9 htr domain wall", domain_wall),
        ("C10 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = std::time::Instant::now();
        let o = run();
        let secs = start.elapsed().as_secs_f64();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {name}: {} [{secs:.2}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
