//! Global asymptotic solutions: amplitude paths substituted into the
//! leading-order expression, boundary fitting and residual scans.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::engine::{AmplitudePath, RenormSystem};
use crate::error::{Error, Result};
use crate::linsolve;
use crate::seqalg::Scalar;

/// Which side of `(1 + c)^n ~ exp(c n)` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Identification {
    #[default]
    Power,
    Exponential,
}

/// The `n`-dependence an amplitude multiplies.
#[derive(Debug, Clone, PartialEq)]
pub enum Basis {
    /// `r^n`.
    Power(Complex64),
    /// `1 / (1 + exp(lambda n))`.
    Logistic { lambda: f64 },
}

impl Basis {
    pub fn at(&self, n: i64) -> Complex64 {
        match self {
            Basis::Power(r) => r.powi(n as i32),
            Basis::Logistic { lambda } => Complex64::new(1.0 / (1.0 + (lambda * n as f64).exp()), 0.0),
        }
    }

    /// `lim |b(n+1) / b(n)|`.
    fn asymptotic_ratio(&self) -> f64 {
        match self {
            Basis::Power(r) => r.norm(),
            Basis::Logistic { lambda } => (-lambda).exp(),
        }
    }
}

/// Amplitude evolution of one component.
#[derive(Debug, Clone, PartialEq)]
pub enum Growth {
    Constant,
    /// `factor^n`, identified with `exp(rate n)`.
    Geometric { factor: Complex64, rate: Complex64 },
    /// `A(n)` itself; the component value is `A(0)`.
    Tabulated(Vec<Complex64>),
}

impl Growth {
    fn at(&self, value: Complex64, n: i64, form: Identification) -> Complex64 {
        match self {
            Growth::Constant => value,
            Growth::Geometric { factor, rate } => match form {
                Identification::Power => value * factor.powi(n as i32),
                Identification::Exponential => value * (rate * n as f64).exp(),
            },
            Growth::Tabulated(t) => usize::try_from(n)
                .ok()
                .and_then(|i| t.get(i).copied())
                .unwrap_or(Complex64::new(f64::NAN, f64::NAN)),
        }
    }

    fn asymptotic_ratio(&self, form: Identification) -> f64 {
        match self {
            Growth::Constant | Growth::Tabulated(_) => 1.0,
            Growth::Geometric { factor, rate } => match form {
                Identification::Power => factor.norm(),
                Identification::Exponential => rate.re.exp(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub name: String,
    pub basis: Basis,
    pub growth: Growth,
    /// Fixed prefactor such as `eps` on first-order constants.
    pub weight: Complex64,
    pub value: Complex64,
    /// Whether boundary fitting may change `value`.
    pub free: bool,
}

impl Component {
    fn at(&self, n: i64, form: Identification) -> Complex64 {
        self.weight * self.growth.at(self.value, n, form) * self.basis.at(n)
    }

    /// Contribution per unit `value`; only meaningful for free components.
    fn unit_at(&self, n: i64, form: Identification) -> Complex64 {
        self.weight * self.growth.at(Complex64::new(1.0, 0.0), n, form) * self.basis.at(n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlobalSolution {
    pub components: Vec<Component>,
    pub form: Identification,
    /// Range of `n` over which the solution is claimed, `~ 1 / eps`.
    pub validity_scale: f64,
}

impl GlobalSolution {
    pub fn evaluate(&self, n: i64) -> Complex64 {
        self.evaluate_as(self.form, n)
    }

    pub fn evaluate_as(&self, form: Identification, n: i64) -> Complex64 {
        self.components
            .iter()
            .map(|c| c.at(n, form))
            .sum()
    }

    pub fn with_form(mut self, form: Identification) -> Self {
        self.form = form;
        self
    }

    pub fn component(&self, name: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.name == name)
    }

    pub fn samples(&self, n_max: usize) -> Vec<Complex64> {
        (0..=n_max as i64).map(|n| self.evaluate(n)).collect()
    }
}

/// Substitutes solved amplitude paths into `sum_j A_j(n) r_j^n`. With
/// `first_order_constants`, each mode also gets a free constant weighted by
/// `eps` (the order-one homogeneous part kept constant by the closure).
pub fn assemble_global<S: Scalar>(
    sys: &RenormSystem<S>,
    paths: &[AmplitudePath<S>],
    eps: &S,
    first_order_constants: bool,
) -> GlobalSolution {
    let mut components: Vec<Component> = sys
        .amplitudes
        .iter()
        .zip(paths)
        .map(|(amp, path)| {
            let (value, growth, free) = match path {
                AmplitudePath::Geometric {
                    initial,
                    factor,
                    rate,
                } => (
                    initial.to_c64(),
                    Growth::Geometric {
                        factor: factor.to_c64(),
                        rate: rate.to_c64(),
                    },
                    true,
                ),
                AmplitudePath::Tabulated(t) => (t[0], Growth::Tabulated(t.clone()), false),
            };
            Component {
                name: amp.name.clone(),
                basis: Basis::Power(amp.mode.to_c64()),
                growth,
                weight: Complex64::new(1.0, 0.0),
                value,
                free,
            }
        })
        .collect();
    if first_order_constants {
        let w = eps.to_c64();
        let extra: Vec<Component> = sys
            .amplitudes
            .iter()
            .map(|amp| Component {
                name: format!("{}1", amp.name),
                basis: Basis::Power(amp.mode.to_c64()),
                growth: Growth::Constant,
                weight: w,
                value: Complex64::new(0.0, 0.0),
                free: true,
            })
            .collect();
        components.extend(extra);
    }
    let e = eps.to_c64().norm();
    GlobalSolution {
        components,
        form: Identification::Power,
        validity_scale: if sys.homotopy || e == 0.0 { f64::INFINITY } else { 1.0 / e },
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryCondition {
    /// `y(n) = value`.
    At { n: i64, value: Complex64 },
    /// `y(n) -> 0` as `n -> infinity`.
    Decay,
}

/// Fits the free constants to the point conditions (one per free
/// constant), then checks every decay condition.
pub fn apply_boundary(
    global: &GlobalSolution,
    conditions: &[BoundaryCondition],
) -> Result<GlobalSolution> {
    let free: Vec<usize> = (0..global.components.len())
        .filter(|&i| global.components[i].free)
        .collect();
    let points: Vec<(i64, Complex64)> = conditions
        .iter()
        .filter_map(|c| match c {
            BoundaryCondition::At { n, value } => Some((*n, *value)),
            BoundaryCondition::Decay => None,
        })
        .collect();
    if points.len() != free.len() {
        return Err(Error::BoundaryCount {
            expected: free.len(),
            got: points.len(),
        });
    }
    let form = global.form;
    let matrix: Vec<Vec<Complex64>> = points
        .iter()
        .map(|(n, _)| free.iter().map(|&i| global.components[i].unit_at(*n, form)).collect())
        .collect();
    let rhs: Vec<Complex64> = points
        .iter()
        .map(|(n, v)| {
            let fixed: Complex64 = global
                .components
                .iter()
                .filter(|c| !c.free)
                .map(|c| c.at(*n, form))
                .sum();
            v - fixed
        })
        .collect();
    let values = linsolve::solve(matrix, rhs).ok_or(Error::SingularBoundary)?;
    let mut out = global.clone();
    for (&i, v) in free.iter().zip(values) {
        out.components[i].value = v;
    }
    if conditions.contains(&BoundaryCondition::Decay) {
        for c in &out.components {
            let ratio = c.growth.asymptotic_ratio(form) * c.basis.asymptotic_ratio();
            if c.value.norm() > 0.0 && ratio >= 1.0 {
                return Err(Error::BoundaryUnsatisfiable(format!(
                    "component {} does not decay (ratio {ratio})",
                    c.name
                )));
            }
        }
    }
    Ok(out)
}

/// Residual of the original equation along a candidate solution.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualScan {
    pub n: Vec<i64>,
    pub values: Vec<Complex64>,
    pub sup: f64,
}

/// Evaluates `residual(y, n)` for `n` in `range`, where `y` is the global
/// solution.
pub fn residual_scan(
    global: &GlobalSolution,
    residual: &dyn Fn(&dyn Fn(i64) -> Complex64, i64) -> Complex64,
    range: std::ops::RangeInclusive<i64>,
) -> ResidualScan {
    let y = |n: i64| global.evaluate(n);
    let n: Vec<i64> = range.collect();
    let values: Vec<Complex64> = n.iter().map(|&k| residual(&y, k)).collect();
    let sup = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    ResidualScan { n, values, sup }
}
