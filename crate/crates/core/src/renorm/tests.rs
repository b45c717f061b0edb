use num_complex::Complex64;

use super::*;
use crate::lindiff::LinearRecurrence;
use crate::seqalg::scalar::{gaussian, ratio};
use crate::seqalg::{Exact, ExpBinomSeq};

fn q(v: i64) -> Exact {
    ratio(v, 1)
}

/// `y(n+2) + y(n) = -eps y(n+1)`.
fn illustration() -> PerturbationProblem<Exact> {
    let op = LinearRecurrence::new(vec![q(1), q(0), q(1)]).unwrap();
    let forcing: ForcingFn<Exact> = Box::new(|y: &Series<Exact>| Ok(y.shift(1).neg()));
    PerturbationProblem::new(op, vec![("A", gaussian(0, 1)), ("B", gaussian(0, -1))], forcing)
        .unwrap()
        .with_conjugates(0, 1)
}

/// `y(n+2) - 2 cos(theta) y(n+1) + y(n) = eps (1 - y(n+1)^2)(y(n+2) - y(n))`.
fn van_der_pol(theta: f64) -> PerturbationProblem<Complex64> {
    let c = |v: f64| Complex64::new(v, 0.0);
    let op = LinearRecurrence::new(vec![c(1.0), c(-2.0 * theta.cos()), c(1.0)]).unwrap();
    let forcing: ForcingFn<Complex64> = Box::new(|y: &Series<Complex64>| {
        let y1 = y.shift(1);
        let one = y.constant_like(Complex64::new(1.0, 0.0));
        one.sub(&y1.mul(&y1)?)?.mul(&y.shift(2).sub(y)?)
    });
    let r = Complex64::from_polar(1.0, theta);
    PerturbationProblem::new(op, vec![("A", r), ("B", r.conj())], forcing)
        .unwrap()
        .with_conjugates(0, 1)
}

#[test]
fn illustration_first_order_secular_terms() {
    let m = 3;
    let sol = perturb_expand(&illustration(), 1, m).unwrap();
    let i = gaussian(0, 1);
    assert_eq!(
        sol.orders[0].coeff(&[1, 0]),
        ExpBinomSeq::make_term(q(1), i.clone(), m, 0).unwrap()
    );
    let y1a = sol.orders[1].coeff(&[1, 0]);
    assert_eq!(
        y1a,
        ExpBinomSeq::make_term(i.clone() * ratio(1, 2), i.clone(), m, 1).unwrap()
    );
    let y1b = sol.orders[1].coeff(&[0, 1]);
    assert_eq!(
        y1b,
        ExpBinomSeq::make_term(-i.clone() * ratio(1, 2), -i.clone(), m, 1).unwrap()
    );
    let sys = form_renorm_system(&sol, Closure::Linear).unwrap();
    assert_eq!(sys.kind, SystemKind::LinearDiagonal);
    let eps = ratio(1, 10);
    assert_eq!(sys.diagonal_rate(0, &eps), Some(i.clone() * ratio(1, 20)));
    assert_eq!(sys.diagonal_rate(1, &eps), Some(-i * ratio(1, 20)));
}

#[test]
fn order_zero_is_secular_free_and_y1_matches_delta_y0_at_zero_eps() {
    let sol = perturb_expand(&illustration(), 2, 0).unwrap();
    for (_, s) in sol.orders[0].terms() {
        assert_eq!(s.max_degree(), Some(0));
    }
    let c = collect_y(&sol, &q(0)).unwrap();
    assert_eq!(c.y1, c.y0.delta());
}

#[test]
fn illustration_second_order_rate() {
    // exact root: i (sqrt(1 - eps^2/4) + i eps/2) = i (1 + i eps/2 - eps^2/8 + ...)
    let sol = perturb_expand(&illustration(), 2, 0).unwrap();
    let sys = form_renorm_system(&sol, Closure::Linear).unwrap();
    let second: Vec<_> = sys.updates[0].iter().filter(|t| t.eps_power == 2).collect();
    assert_eq!(second.len(), 1);
    assert_eq!(second[0].coeff, ratio(-1, 8));
}

#[test]
fn illustration_renormalization_is_exactly_consistent() {
    let sol = perturb_expand(&illustration(), 1, 0).unwrap();
    let sys = form_renorm_system(&sol, Closure::Linear).unwrap();
    let eps = ratio(1, 16);
    let paths = solve_renorm(&sys, &eps, &[gaussian(1, 2), gaussian(1, -2)], 0).unwrap();
    match &paths[0] {
        AmplitudePath::Geometric { factor, .. } => {
            assert_eq!(*factor, q(1) + gaussian(0, 1) * ratio(1, 32))
        }
        other => panic!("{other:?}"),
    }
    let res = consistency_residuals(&sol, &paths, &eps, 0..32).unwrap();
    assert!(res.iter().all(|r| r.norm() < 1e-12), "{res:?}");
}

#[test]
fn van_der_pol_closures() {
    let theta = std::f64::consts::PI / 5.0;
    let sol = perturb_expand(&van_der_pol(theta), 1, 0).unwrap();
    let lin = form_renorm_system(&sol, Closure::Linear).unwrap();
    assert_eq!(lin.kind, SystemKind::LinearDiagonal);
    let eps = Complex64::new(0.01, 0.0);
    for j in 0..2 {
        let rate = lin.diagonal_rate(j, &eps).unwrap();
        assert!((rate - eps).norm() < 1e-12, "{rate}");
    }
    let full = form_renorm_system(&sol, Closure::Full).unwrap();
    assert_eq!(full.kind, SystemKind::Nonlinear);
    let amps = [Complex64::new(0.3, 0.2), Complex64::new(-0.1, 0.4)];
    let inc = full.increment(5, &amps, &eps);
    let ab = amps[0] * amps[1];
    assert!((inc[0] - eps * amps[0] * (1.0 - ab)).norm() < 1e-12);
    assert!((inc[1] - eps * amps[1] * (1.0 - ab)).norm() < 1e-12);
}

#[test]
fn van_der_pol_global_solution_is_real() {
    let theta = std::f64::consts::PI / 5.0;
    let sol = perturb_expand(&van_der_pol(theta), 1, 0).unwrap();
    let sys = form_renorm_system(&sol, Closure::Linear).unwrap();
    let eps = Complex64::new(0.01, 0.0);
    let a0 = Complex64::new(0.005, 0.002);
    let paths = solve_renorm(&sys, &eps, &[a0, a0.conj()], 0).unwrap();
    let g = assemble_global(&sys, &paths, &eps, false);
    for form in [Identification::Power, Identification::Exponential] {
        for n in 0..200 {
            let v = g.evaluate_as(form, n);
            assert!(v.im.abs() <= 1e-12 * (1.0 + v.norm()), "n={n} {v}");
        }
    }
}

/// `eps y(n+2) + a y(n+1) + b y(n) = 0` as `a y(n+1) + b y(n) = -eps y(n+2)`.
fn boundary_layer(a: i64, b: i64) -> PerturbationProblem<Exact> {
    let op = LinearRecurrence::new(vec![q(a), q(b)]).unwrap();
    let forcing: ForcingFn<Exact> = Box::new(|y: &Series<Exact>| Ok(y.shift(2).neg()));
    PerturbationProblem::new(op, vec![("A", ratio(-b, a))], forcing).unwrap()
}

#[test]
fn boundary_layer_rate_and_boundary_fit() {
    let (a, b) = (2, 1);
    let sol = perturb_expand(&boundary_layer(a, b), 1, 4).unwrap();
    let st = secular_terms(&sol).unwrap();
    assert_eq!(st.len(), 1);
    assert_eq!(st[0].coeff, ratio(b, a * a));
    let sys = form_renorm_system(&sol, Closure::Linear).unwrap();
    let eps = ratio(1, 100);
    let paths = solve_renorm(&sys, &eps, &[q(1)], 0).unwrap();
    let g = assemble_global(&sys, &paths, &eps, true);
    let (alpha, beta, n) = (1.0, 0.5, 20);
    let fitted = apply_boundary(
        &g,
        &[
            BoundaryCondition::At {
                n: 0,
                value: Complex64::new(alpha, 0.0),
            },
            BoundaryCondition::At {
                n,
                value: Complex64::new(beta, 0.0),
            },
        ],
    )
    .unwrap();
    let e = 0.01;
    let g_n = (1.0 + e * 0.25_f64).powi(n as i32);
    let ratio_n = (-2.0_f64).powi(n as i32);
    let a0 = (beta * ratio_n - alpha) / (g_n - 1.0);
    let b0 = (alpha * g_n - beta * ratio_n) / (g_n - 1.0) / e;
    let got_a = fitted.component("A").unwrap().value;
    let got_b = fitted.component("A1").unwrap().value;
    assert!((got_a.re - a0).abs() < 1e-9 * a0.abs().max(1.0), "{got_a} vs {a0}");
    assert!((got_b.re - b0).abs() < 1e-9 * b0.abs().max(1.0), "{got_b} vs {b0}");
    assert!((fitted.evaluate(0).re - alpha).abs() < 1e-9);
    assert!((fitted.evaluate(n).re - beta).abs() < 1e-9);
    // eps B0 -> alpha - A0 holds identically from the n = 0 condition
    assert!((e * got_b.re - (alpha - got_a.re)).abs() < 1e-9);
}

#[test]
fn boundary_count_and_singularity_are_reported() {
    let sol = perturb_expand(&boundary_layer(2, 1), 1, 0).unwrap();
    let sys = form_renorm_system(&sol, Closure::Linear).unwrap();
    let eps = ratio(1, 100);
    let paths = solve_renorm(&sys, &eps, &[q(1)], 0).unwrap();
    let g = assemble_global(&sys, &paths, &eps, true);
    let one = |n| BoundaryCondition::At {
        n,
        value: Complex64::new(1.0, 0.0),
    };
    assert!(matches!(
        apply_boundary(&g, &[one(0)]),
        Err(crate::Error::BoundaryCount { expected: 2, got: 1 })
    ));
    assert!(matches!(
        apply_boundary(&g, &[one(0), one(0)]),
        Err(crate::Error::SingularBoundary)
    ));
}

fn htr_cubic(eta: Exact) -> PerturbationProblem<Exact> {
    // N(y) = y(n+1) - y(n) - eta (y + y^3), L(y) = y(n+1) - y(n)/2
    let l = LinearRecurrence::new(vec![q(1), ratio(-1, 2)]).unwrap();
    let target: TargetFn<Exact> = Box::new(move |y: &Series<Exact>| {
        let cube = y.mul(y)?.mul(y)?;
        y.shift(1).sub(y)?.sub(&y.add(&cube)?.scale(&eta))
    });
    htr_problem(HtrBase::ConstantCoefficient(l), vec![("K0", ratio(1, 2))], target).unwrap()
}

#[test]
fn htr_cubic_secular_coefficients() {
    let eta = ratio(1, 100);
    let sol = htr_expand(&htr_cubic(eta.clone()), 1, 0).unwrap();
    let lin = form_renorm_system(&sol, Closure::Linear).unwrap();
    let one = q(1);
    assert_eq!(
        lin.diagonal_rate(0, &ratio(1, 3)),
        Some(one.clone() + q(2) * eta.clone())
    );
    let full = form_renorm_system(&sol, Closure::Full).unwrap();
    let frozen: Vec<_> = full.updates[0].iter().filter(|t| t.monomial == [3]).collect();
    assert_eq!(frozen.len(), 1);
    assert_eq!(frozen[0].coeff, q(2) * eta.clone());
    assert_eq!(frozen[0].rate, ratio(1, 4));

    let paths = solve_renorm(&lin, &ratio(1, 3), &[ratio(1, 10)], 0).unwrap();
    match &paths[0] {
        AmplitudePath::Geometric { factor, .. } => {
            assert_eq!(*factor, q(2) * (one + eta))
        }
        other => panic!("{other:?}"),
    }
    let g = assemble_global(&lin, &paths, &ratio(1, 3), false);
    for n in 0..50 {
        let want = 0.1 * 1.01_f64.powi(n as i32);
        assert!((g.evaluate(n).re - want).abs() < 1e-12 * want.max(1.0));
    }
}

#[test]
fn htr_reproduces_tr_for_the_illustration() {
    let eps = ratio(1, 20);
    let op = LinearRecurrence::new(vec![q(1), q(0), q(1)]).unwrap();
    let e = eps.clone();
    let target: TargetFn<Exact> = Box::new(move |y: &Series<Exact>| {
        y.shift(2).add(&y.shift(1).scale(&e))?.add(y)
    });
    let htr = htr_problem(
        HtrBase::ConstantCoefficient(op),
        vec![("A", gaussian(0, 1)), ("B", gaussian(0, -1))],
        target,
    )
    .unwrap();
    let hs = form_renorm_system(&htr_expand(&htr, 1, 0).unwrap(), Closure::Linear).unwrap();
    let ts = form_renorm_system(&perturb_expand(&illustration(), 1, 0).unwrap(), Closure::Linear)
        .unwrap();
    for j in 0..2 {
        let h = hs.diagonal_rate(j, &ratio(7, 3)).unwrap();
        let t = ts.diagonal_rate(j, &eps).unwrap();
        assert_eq!(h, t);
    }
}

#[test]
fn nonlinear_system_iterates_to_stable_equilibrium() {
    let sys = RenormSystem::new(
        vec![Amplitude {
            name: "B".into(),
            mode: Complex64::new(1.0, 0.0),
            conjugate: None,
        }],
        vec![vec![
            UpdateTerm {
                coeff: Complex64::new(1.0, 0.0),
                eps_power: 1,
                monomial: vec![1],
                rate: Complex64::new(1.0, 0.0),
            },
            UpdateTerm {
                coeff: Complex64::new(-1.0, 0.0),
                eps_power: 1,
                monomial: vec![3],
                rate: Complex64::new(1.0, 0.0),
            },
        ]],
        false,
    );
    let eps = Complex64::new(0.01, 0.0);
    let paths = solve_renorm(&sys, &eps, &[Complex64::new(0.1, 0.0)], 2000).unwrap();
    assert!((paths[0].at(2000).re - 1.0).abs() < 1e-3);
}

#[test]
fn domain_wall_fit_and_decay() {
    let dw = DomainWall {
        d: 1.0,
        lambda: 0.2,
        gain: 1.0,
    };
    let sys = dw.closed_system();
    assert_eq!(sys.diagonal_rate(0, &Complex64::new(1.0, 0.0)), Some(Complex64::new(0.0, 0.0)));
    let fitted = apply_boundary(
        &dw.global(1.0),
        &[
            BoundaryCondition::At {
                n: 0,
                value: Complex64::new(1.0, 0.0),
            },
            BoundaryCondition::Decay,
        ],
    )
    .unwrap();
    assert!((fitted.component("A").unwrap().value.re - 2.0).abs() < 1e-14);
    for n in 0..50 {
        let want = 2.0 / (1.0 + (0.2 * n as f64).exp());
        assert!((fitted.evaluate(n).re - want).abs() < 1e-14);
    }
    let growing = DomainWall { d: -1.0, ..dw };
    assert!(matches!(
        apply_boundary(
            &growing.global(1.0),
            &[
                BoundaryCondition::At {
                    n: 0,
                    value: Complex64::new(1.0, 0.0)
                },
                BoundaryCondition::Decay
            ]
        ),
        Err(crate::Error::BoundaryUnsatisfiable(_))
    ));
}

#[test]
fn domain_wall_first_order_solves_its_equation() {
    let dw = DomainWall {
        d: 1.0,
        lambda: 0.3,
        gain: 1.0,
    };
    let (a, m) = (1.7, 2);
    for n in m..m + 10 {
        let lhs = dw.first_order(a, m, n + 1) - dw.kernel_ratio(n) * dw.first_order(a, m, n);
        assert!((lhs - dw.forcing(a, n)).abs() < 1e-12);
    }
    let step = dw.first_order(a, m, m + 1) / dw.kernel(m + 1);
    assert!((step - dw.frozen_secular(a, m)).abs() < 1e-12);
}

#[test]
fn unmatched_secular_mode_is_an_error() {
    // forcing resonant with a root that carries no amplitude cannot arise
    // from a well-formed problem; simulate by dropping an amplitude
    let op = LinearRecurrence::new(vec![q(1), q(0), q(1)]).unwrap();
    let forcing: ForcingFn<Exact> = Box::new(|y: &Series<Exact>| Ok(y.shift(1).neg()));
    assert!(PerturbationProblem::new(op, vec![("A", gaussian(0, 1))], forcing).is_err());
    let mut sol = perturb_expand(&illustration(), 1, 0).unwrap();
    sol.amplitudes[1].mode = q(3);
    assert!(matches!(
        secular_terms(&sol),
        Err(crate::Error::UnmatchedSecularMode { .. })
    ));
}

#[test]
fn residual_scan_of_an_exact_linear_solution_vanishes() {
    // y = 2^n solves y(n+1) - 2y(n) = 0
    let g = GlobalSolution {
        components: vec![Component {
            name: "A".into(),
            basis: Basis::Power(Complex64::new(2.0, 0.0)),
            growth: Growth::Constant,
            weight: Complex64::new(1.0, 0.0),
            value: Complex64::new(1.0, 0.0),
            free: true,
        }],
        form: Identification::Power,
        validity_scale: f64::INFINITY,
    };
    let scan = residual_scan(&g, &|y, n| y(n + 1) - 2.0 * y(n), 0..=20);
    assert_eq!(scan.sup, 0.0);
    assert_eq!(scan.values.len(), 21);
}
