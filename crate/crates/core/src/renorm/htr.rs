//! Homotopy renormalization: `L(y) = eps (L(y) - N(y))` with a solvable
//! base operator `L`, expanded in `eps` and evaluated at `eps = 1`.

use num_complex::Complex64;

use super::ampseq::Series;
use super::engine::{
    apply_operator, perturb_expand, Amplitude, PerturbationProblem, PerturbationSolution,
    RenormSystem, UpdateTerm,
};
use super::global::{Basis, Component, GlobalSolution, Growth, Identification};
use crate::error::{Error, Result};
use crate::lindiff::LinearRecurrence;
use crate::seqalg::Scalar;

/// Base operators with a closed-form homogeneous solve.
#[derive(Debug, Clone, PartialEq)]
pub enum HtrBase<S> {
    /// Any constant-coefficient operator with simple roots.
    ConstantCoefficient(LinearRecurrence<S>),
    /// `y(n+1) - v(n+1)/v(n) y(n)` with kernel `v(n) = 1/(1 + exp(lambda n))`.
    LogisticKernel { lambda: f64 },
}

/// `N` as a series map.
pub type TargetFn<S> = Box<dyn Fn(&Series<S>) -> Result<Series<S>> + Send + Sync>;

/// Builds the homotopy problem for a constant-coefficient base operator:
/// the forcing at each order is `L(y) - N(y)`.
pub fn htr_problem<S: Scalar>(
    base: HtrBase<S>,
    amplitudes: Vec<(&str, S)>,
    target: TargetFn<S>,
) -> Result<PerturbationProblem<S>> {
    let op = match base {
        HtrBase::ConstantCoefficient(op) => op,
        HtrBase::LogisticKernel { .. } => {
            return Err(Error::Unsupported(
                "the logistic-kernel base operator is expanded by DomainWall".into(),
            ))
        }
    };
    let l = op.clone();
    let forcing = Box::new(move |y: &Series<S>| apply_operator(&l, y)?.sub(&target(y)?));
    Ok(PerturbationProblem::new(op, amplitudes, forcing)?.homotopic())
}

pub fn htr_expand<S: Scalar>(
    problem: &PerturbationProblem<S>,
    order: usize,
    anchor: i64,
) -> Result<PerturbationSolution<S>> {
    if !problem.is_homotopy() {
        return Err(Error::Unsupported("problem is not a homotopy embedding".into()));
    }
    perturb_expand(problem, order, anchor)
}

/// `y(n+2) - 2y(n+1) + y(n) = D (y(n) - y(n)^3)` embedded with the
/// logistic-kernel base operator and gain `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainWall {
    pub d: f64,
    pub lambda: f64,
    pub gain: f64,
}

impl DomainWall {
    /// `v(n) = 1 / (1 + exp(lambda n))`.
    pub fn kernel(&self, n: i64) -> f64 {
        1.0 / (1.0 + (self.lambda * n as f64).exp())
    }

    /// Base-operator ratio `v(n+1) / v(n)`.
    pub fn kernel_ratio(&self, n: i64) -> f64 {
        self.kernel(n + 1) / self.kernel(n)
    }

    pub fn y0(&self, amplitude: f64, n: i64) -> f64 {
        amplitude * self.kernel(n)
    }

    /// Residual of the target equation, `y(n+2) - 2y(n+1) + y(n) - D(y - y^3)`.
    pub fn target_residual(&self, y: &dyn Fn(i64) -> f64, n: i64) -> f64 {
        let v = y(n);
        y(n + 2) - 2.0 * y(n + 1) + v - self.d * (v - v * v * v)
    }

    /// Order-one forcing `f(n) = k N(y_0)(n)`.
    pub fn forcing(&self, amplitude: f64, n: i64) -> f64 {
        self.gain * self.target_residual(&|j| self.y0(amplitude, j), n)
    }

    /// `y_1(n) = v(n) sum_{j=m}^{n-1} f(j) / v(j+1)`, the order-one solution
    /// vanishing at the anchor; defined for `n >= m`.
    pub fn first_order(&self, amplitude: f64, m: i64, n: i64) -> f64 {
        let sum: f64 = (m..n)
            .map(|j| self.forcing(amplitude, j) / self.kernel(j + 1))
            .sum();
        self.kernel(n) * sum
    }

    /// Per-step secular growth of the amplitude near `m`, `f(m) / v(m+1)`.
    pub fn frozen_secular(&self, amplitude: f64, m: i64) -> f64 {
        self.forcing(amplitude, m) / self.kernel(m + 1)
    }

    /// The registered closure `DA = k (1 - D) A`.
    pub fn closed_system(&self) -> RenormSystem<Complex64> {
        RenormSystem::new(
            vec![Amplitude {
                name: "A".into(),
                mode: Complex64::new(1.0, 0.0),
                conjugate: None,
            }],
            vec![vec![UpdateTerm {
                coeff: Complex64::new(self.gain * (1.0 - self.d), 0.0),
                eps_power: 1,
                monomial: vec![1],
                rate: Complex64::new(1.0, 0.0),
            }]],
            true,
        )
    }

    /// `A_0 (k(1 - D) + 1)^n v(n)` with `A_0` free.
    pub fn global(&self, a0: f64) -> GlobalSolution {
        let c = self.gain * (1.0 - self.d);
        GlobalSolution {
            components: vec![Component {
                name: "A".into(),
                basis: Basis::Logistic {
                    lambda: self.lambda,
                },
                growth: Growth::Geometric {
                    factor: Complex64::new(1.0 + c, 0.0),
                    rate: Complex64::new(c, 0.0),
                },
                weight: Complex64::new(1.0, 0.0),
                value: Complex64::new(a0, 0.0),
                free: true,
            }],
            form: Identification::Power,
            validity_scale: f64::INFINITY,
        }
    }
}
