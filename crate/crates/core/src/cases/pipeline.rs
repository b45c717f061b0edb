//! Engine runs for each registered case.

use num_complex::Complex64;

use super::reduction_pipeline;
use super::CaseStudy;
use crate::error::Result;
use crate::lindiff::LinearRecurrence;
use crate::renorm::{
    apply_boundary, assemble_global, form_renorm_system, htr_expand, htr_problem,
    perturb_expand, solve_renorm, Basis, BoundaryCondition, Closure, Component, DomainWall,
    ForcingFn, GlobalSolution, Growth, HtrBase, Identification, PerturbationProblem,
    RenormSystem, Series, TargetFn,
};
use crate::seqalg::Scalar;

/// `y(n+2) + y(n) = eps (-y(n+1))`.
pub fn illustration_problem<S: Scalar>() -> Result<PerturbationProblem<S>> {
    let op = LinearRecurrence::new(vec![S::one(), S::zero(), S::one()])?;
    let forcing: ForcingFn<S> = Box::new(|y: &Series<S>| Ok(y.shift(1).neg()));
    let i = S::imag_unit();
    Ok(PerturbationProblem::new(op, vec![("A", i.clone()), ("B", -i)], forcing)?.with_conjugates(0, 1))
}

/// `y(n+2) - 2cos(theta) y(n+1) + y(n) = eps (1 - y(n+1)^2)(y(n+2) - y(n))`.
pub fn van_der_pol_problem(theta: f64) -> Result<PerturbationProblem<Complex64>> {
    let c = |v: f64| Complex64::new(v, 0.0);
    let op = LinearRecurrence::new(vec![c(1.0), c(-2.0 * theta.cos()), c(1.0)])?;
    let forcing: ForcingFn<Complex64> = Box::new(|y: &Series<Complex64>| {
        let y1 = y.shift(1);
        let one = y.constant_like(Complex64::new(1.0, 0.0));
        one.sub(&y1.mul(&y1)?)?.mul(&y.shift(2).sub(y)?)
    });
    let r = Complex64::from_polar(1.0, theta);
    Ok(PerturbationProblem::new(op, vec![("A", r), ("B", r.conj())], forcing)?.with_conjugates(0, 1))
}

/// `a y(n+1) + b y(n) = eps (-y(n+2))`.
pub fn boundary_layer_problem<S: Scalar>(a: S, b: S) -> Result<PerturbationProblem<S>> {
    let mode = -(b.clone()) / a.clone();
    let op = LinearRecurrence::new(vec![a, b])?;
    let forcing: ForcingFn<S> = Box::new(|y: &Series<S>| Ok(y.shift(2).neg()));
    PerturbationProblem::new(op, vec![("A", mode)], forcing)
}

/// Target `Dy - eta (y + y^3)` over base `Dy + y/2`.
pub fn htr_cubic_problem<S: Scalar>(eta: S) -> Result<PerturbationProblem<S>> {
    let half = S::one() / S::from_i64(2);
    let base = LinearRecurrence::new(vec![S::one(), -half.clone()])?;
    let target: TargetFn<S> = Box::new(move |y: &Series<S>| {
        let cube = y.mul(y)?.mul(y)?;
        y.shift(1).sub(y)?.sub(&y.add(&cube)?.scale(&eta))
    });
    htr_problem(HtrBase::ConstantCoefficient(base), vec![("K0", half)], target)
}

/// How the asymptotic solution is compared with the exact trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Pointwise,
    /// Envelopes from block maxima of `|y|` over one nominal period.
    Envelope { period: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseSolution {
    pub case: CaseStudy,
    pub global: GlobalSolution,
    pub comparison: Comparison,
    /// The closed renormalization system in double precision, when the case
    /// runs through the generic engine.
    pub system: Option<RenormSystem<Complex64>>,
}

fn point(n: i64, v: f64) -> BoundaryCondition {
    BoundaryCondition::At {
        n,
        value: Complex64::new(v, 0.0),
    }
}

fn engine_run(
    problem: &PerturbationProblem<Complex64>,
    order: usize,
    closure: Closure,
    eps: f64,
    initial: &[Complex64],
    n_max: usize,
    first_order_constants: bool,
) -> Result<(RenormSystem<Complex64>, GlobalSolution)> {
    let e = Complex64::new(eps, 0.0);
    let sol = if problem.is_homotopy() {
        htr_expand(problem, order, 0)?
    } else {
        perturb_expand(problem, order, 0)?
    };
    let sys = form_renorm_system(&sol, closure)?;
    let paths = solve_renorm(&sys, &e, initial, n_max)?;
    let global = assemble_global(&sys, &paths, &e, first_order_constants);
    Ok((sys, global))
}

/// Expands, renormalizes and assembles the global solution of a case, then
/// fits its constants to the case's initial or boundary data. Tabulated
/// amplitudes cover the validity window plus the two steps residuals need.
pub fn solve_case(case: &CaseStudy, order: usize) -> Result<CaseSolution> {
    case.validate()?;
    solve_case_over(case, order, case.window() + 2)
}

/// As [`solve_case`], with tabulated amplitudes on `0..=n_max`.
pub fn solve_case_over(case: &CaseStudy, order: usize, n_max: usize) -> Result<CaseSolution> {
    case.validate()?;
    let c = |v: f64| Complex64::new(v, 0.0);
    let window = n_max;
    let (global, comparison, system) = match case {
        CaseStudy::Illustration(p) => {
            let (sys, g) = engine_run(
                &illustration_problem()?,
                order,
                Closure::Linear,
                p.epsilon,
                &[c(1.0), c(1.0)],
                window,
                false,
            )?;
            let g = apply_boundary(
                &g.with_form(Identification::Exponential),
                &[point(0, p.y0), point(1, p.y1)],
            )?;
            (g, Comparison::Pointwise, Some(sys))
        }
        CaseStudy::VanDerPol(p) => {
            let a0 = Complex64::new(p.amplitude_re, p.amplitude_im);
            let (sys, g) = engine_run(
                &van_der_pol_problem(p.theta)?,
                order,
                p.closure,
                p.epsilon,
                &[a0, a0.conj()],
                window,
                false,
            )?;
            let period = (2.0 * std::f64::consts::PI / p.theta).ceil() as usize;
            (g, Comparison::Envelope { period }, Some(sys))
        }
        CaseStudy::BoundaryLayer(p) => {
            let (sys, g) = engine_run(
                &boundary_layer_problem(c(p.a), c(p.b))?,
                order,
                Closure::Linear,
                p.epsilon,
                &[c(1.0)],
                window,
                true,
            )?;
            let g = apply_boundary(&g, &[point(0, p.alpha), point(p.n as i64, p.beta)])?;
            (g, Comparison::Pointwise, Some(sys))
        }
        CaseStudy::Reduction(p) => {
            let r = reduction_pipeline(p, window)?;
            let slow: Vec<Complex64> = r.slow.iter().map(|&v| c(v)).collect();
            let g = GlobalSolution {
                components: vec![Component {
                    name: "c".into(),
                    basis: Basis::Power(c(1.0)),
                    growth: Growth::Tabulated(slow.clone()),
                    weight: c(1.0),
                    value: slow[0],
                    free: false,
                }],
                form: Identification::Power,
                validity_scale: 1.0 / p.epsilon,
            };
            (g, Comparison::Pointwise, None)
        }
        CaseStudy::HtrCubic(p) => {
            let (sys, g) = engine_run(
                &htr_cubic_problem(c(p.eta))?,
                order,
                Closure::Linear,
                1.0,
                &[c(p.b0)],
                window,
                false,
            )?;
            let g = GlobalSolution {
                validity_scale: 1.0 / p.eta,
                ..g
            };
            (g, Comparison::Pointwise, Some(sys))
        }
        CaseStudy::HtrDomainWall(p) => {
            let dw = DomainWall {
                d: p.d,
                lambda: p.lambda,
                gain: p.k,
            };
            let g = apply_boundary(&dw.global(1.0), &[point(0, 1.0), BoundaryCondition::Decay])?;
            (g, Comparison::Pointwise, Some(dw.closed_system()))
        }
    };
    Ok(CaseSolution {
        case: case.clone(),
        global,
        comparison,
        system,
    })
}

impl CaseStudy {
    /// Residual of the original, unexpanded equation at `n`.
    pub fn residual(&self, y: &dyn Fn(i64) -> Complex64, n: i64) -> Complex64 {
        match self {
            CaseStudy::Illustration(p) => y(n + 2) + p.epsilon * y(n + 1) + y(n),
            CaseStudy::VanDerPol(p) => {
                let y1 = y(n + 1);
                y(n + 2) - 2.0 * p.theta.cos() * y1 + y(n)
                    - p.epsilon * (1.0 - y1 * y1) * (y(n + 2) - y(n))
            }
            CaseStudy::BoundaryLayer(p) => p.epsilon * y(n + 2) + p.a * y(n + 1) + p.b * y(n),
            // full system along x = c(n), y = manifold(c(n)); the
            // x-residual is the real part and the y-residual the imaginary
            CaseStudy::Reduction(p) => {
                let (x0, x1) = (y(n).re, y(n + 1).re);
                let dg = p.g.derivative();
                let manifold = |x: f64| {
                    let g = p.g.eval(x);
                    g - p.epsilon * dg.eval(x) * p.f.eval(x, g)
                };
                let rx = x1 - x0 - p.epsilon * p.f.eval(x0, manifold(x0));
                let ry = manifold(x1) - p.g.eval(x0);
                Complex64::new(rx, ry)
            }
            CaseStudy::HtrCubic(p) => {
                let v = y(n);
                y(n + 1) - v - p.eta * (v + v * v * v)
            }
            CaseStudy::HtrDomainWall(p) => {
                let v = y(n);
                y(n + 2) - 2.0 * y(n + 1) + v - p.d * (v - v * v * v)
            }
        }
    }
}
