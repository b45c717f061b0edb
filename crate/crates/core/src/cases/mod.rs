//! The registered problem families, their parameter sets, exact oracles and
//! published closed-form answers.

mod oracles;
mod pipeline;
mod published;
pub mod reduction;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::renorm::Closure;

pub use oracles::{domain_wall_shooting, exact_values, logistic_system};
pub use pipeline::{
    boundary_layer_problem, htr_cubic_problem, illustration_problem, solve_case, solve_case_over,
    van_der_pol_problem, CaseSolution, Comparison,
};
pub use published::published_answer;
pub use reduction::{reduction_pipeline, ManifoldResult, Poly1, Poly2, PolyTerm};

/// Guard on iterated trajectories.
pub const DIVERGENCE_GUARD: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IllustrationParams {
    pub epsilon: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Default for IllustrationParams {
    fn default() -> Self {
        IllustrationParams {
            epsilon: 0.05,
            y0: 1.0,
            y1: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VanDerPolParams {
    pub theta: f64,
    pub epsilon: f64,
    /// `A_0`; the conjugate amplitude is `conj(A_0)`.
    pub amplitude_re: f64,
    pub amplitude_im: f64,
    pub closure: Closure,
}

impl Default for VanDerPolParams {
    fn default() -> Self {
        VanDerPolParams {
            theta: std::f64::consts::PI / 5.0,
            epsilon: 0.01,
            amplitude_re: 0.005,
            amplitude_im: 0.0,
            closure: Closure::Linear,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundaryLayerParams {
    pub epsilon: f64,
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl Default for BoundaryLayerParams {
    fn default() -> Self {
        BoundaryLayerParams {
            epsilon: 0.01,
            a: 2.0,
            b: 1.0,
            n: 20,
            alpha: 1.0,
            beta: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReductionParams {
    pub epsilon: f64,
    pub f: Poly2,
    pub g: Poly1,
    pub x0: f64,
    /// Starting fast variable; `None` starts on the manifold.
    pub y0: Option<f64>,
}

impl Default for ReductionParams {
    fn default() -> Self {
        ReductionParams {
            epsilon: 0.02,
            f: Poly2 {
                terms: vec![PolyTerm {
                    coeff: -1.0,
                    x: 1,
                    y: 1,
                }],
            },
            g: Poly1 {
                coeffs: vec![0.0, 0.0, 1.0],
            },
            x0: 0.5,
            y0: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HtrCubicParams {
    pub eta: f64,
    pub b0: f64,
}

impl Default for HtrCubicParams {
    fn default() -> Self {
        HtrCubicParams { eta: 0.01, b0: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DomainWallParams {
    pub d: f64,
    pub lambda: f64,
    /// Gain `k` of the homotopy embedding.
    pub k: f64,
    /// Scan horizon; `None` means `ceil(20 / lambda)`.
    pub n_max: Option<usize>,
}

impl Default for DomainWallParams {
    fn default() -> Self {
        DomainWallParams {
            d: 1.0,
            lambda: 0.2,
            k: 1.0,
            n_max: None,
        }
    }
}

/// A problem instance. Serializes as `{"case": name, "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", content = "params", rename_all = "kebab-case")]
pub enum CaseStudy {
    Illustration(IllustrationParams),
    VanDerPol(VanDerPolParams),
    BoundaryLayer(BoundaryLayerParams),
    Reduction(ReductionParams),
    HtrCubic(HtrCubicParams),
    HtrDomainWall(DomainWallParams),
}

pub const CASE_NAMES: [&str; 6] = [
    "illustration",
    "van-der-pol",
    "boundary-layer",
    "reduction",
    "htr-cubic",
    "htr-domain-wall",
];

impl CaseStudy {
    /// The default instance of a named case.
    pub fn from_name(name: &str) -> Result<Self> {
        Ok(match name {
            "illustration" => CaseStudy::Illustration(Default::default()),
            "van-der-pol" => CaseStudy::VanDerPol(Default::default()),
            "boundary-layer" => CaseStudy::BoundaryLayer(Default::default()),
            "reduction" => CaseStudy::Reduction(Default::default()),
            "htr-cubic" => CaseStudy::HtrCubic(Default::default()),
            "htr-domain-wall" => CaseStudy::HtrDomainWall(Default::default()),
            other => return Err(Error::UnknownCase(other.to_string())),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        // reject unknown names with the dedicated error before serde does
        let raw: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
        if let Some(name) = raw.get("case").and_then(|v| v.as_str()) {
            if !CASE_NAMES.contains(&name) {
                return Err(Error::UnknownCase(name.to_string()));
            }
        }
        let mut raw = raw;
        if raw.get("params").is_none() {
            if let Some(obj) = raw.as_object_mut() {
                obj.insert("params".into(), serde_json::json!({}));
            }
        }
        serde_json::from_value(raw).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("case serializes")
    }

    pub fn name(&self) -> &'static str {
        match self {
            CaseStudy::Illustration(_) => "illustration",
            CaseStudy::VanDerPol(_) => "van-der-pol",
            CaseStudy::BoundaryLayer(_) => "boundary-layer",
            CaseStudy::Reduction(_) => "reduction",
            CaseStudy::HtrCubic(_) => "htr-cubic",
            CaseStudy::HtrDomainWall(_) => "htr-domain-wall",
        }
    }

    /// Name of the small parameter swept by ladders.
    pub fn primary_parameter(&self) -> &'static str {
        match self {
            CaseStudy::HtrCubic(_) => "eta",
            CaseStudy::HtrDomainWall(_) => "lambda",
            _ => "epsilon",
        }
    }

    pub fn primary_value(&self) -> f64 {
        match self {
            CaseStudy::Illustration(p) => p.epsilon,
            CaseStudy::VanDerPol(p) => p.epsilon,
            CaseStudy::BoundaryLayer(p) => p.epsilon,
            CaseStudy::Reduction(p) => p.epsilon,
            CaseStudy::HtrCubic(p) => p.eta,
            CaseStudy::HtrDomainWall(p) => p.lambda,
        }
    }

    /// Sets a named parameter; names that do not belong to the case are
    /// rejected.
    pub fn with_parameter(mut self, name: &str, value: f64) -> Result<Self> {
        let slot = match (&mut self, name) {
            (CaseStudy::Illustration(p), "epsilon") => &mut p.epsilon,
            (CaseStudy::VanDerPol(p), "epsilon") => &mut p.epsilon,
            (CaseStudy::VanDerPol(p), "theta") => &mut p.theta,
            (CaseStudy::BoundaryLayer(p), "epsilon") => &mut p.epsilon,
            (CaseStudy::Reduction(p), "epsilon") => &mut p.epsilon,
            (CaseStudy::HtrCubic(p), "eta") => &mut p.eta,
            (CaseStudy::HtrDomainWall(p), "lambda") => &mut p.lambda,
            _ => {
                return Err(Error::Unsupported(format!(
                    "parameter {name} does not apply to case {}",
                    self.name()
                )))
            }
        };
        *slot = value;
        Ok(self)
    }

    pub fn with_primary(self, value: f64) -> Self {
        let name = self.primary_parameter();
        self.with_parameter(name, value).expect("primary parameter applies")
    }

    pub fn with_closure(mut self, closure: Closure) -> Self {
        if let CaseStudy::VanDerPol(p) = &mut self {
            p.closure = closure;
        }
        self
    }

    /// The ladder used by acceptance runs.
    pub fn default_ladder(&self) -> Vec<f64> {
        match self {
            CaseStudy::Illustration(_) => vec![0.1, 0.05, 0.025],
            CaseStudy::BoundaryLayer(_) | CaseStudy::Reduction(_) => vec![0.04, 0.02, 0.01],
            CaseStudy::HtrDomainWall(_) => vec![0.1, 0.2, 0.4],
            CaseStudy::VanDerPol(_) => vec![0.04, 0.02, 0.01],
            CaseStudy::HtrCubic(_) => vec![0.04, 0.02, 0.01],
        }
    }

    /// Validity window `0..=window`: `ceil(1/eps)`, `N` for the boundary
    /// value problem, `ceil(20/lambda)` for the domain wall.
    pub fn window(&self) -> usize {
        let inv = |e: f64| (1.0 / e).ceil() as usize;
        match self {
            CaseStudy::Illustration(p) => inv(p.epsilon),
            CaseStudy::VanDerPol(p) => inv(p.epsilon),
            CaseStudy::BoundaryLayer(p) => p.n,
            CaseStudy::Reduction(p) => inv(p.epsilon),
            CaseStudy::HtrCubic(p) => inv(p.eta),
            CaseStudy::HtrDomainWall(p) => p
                .n_max
                .unwrap_or_else(|| (20.0 / p.lambda).ceil() as usize),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let small = |name: &'static str, v: f64| {
            if v > 0.0 && v <= 0.5 {
                Ok(())
            } else {
                Err(Error::ParameterOutOfRange {
                    name,
                    value: v,
                    reason: "must lie in (0, 0.5]",
                })
            }
        };
        match self {
            CaseStudy::Illustration(p) => small("epsilon", p.epsilon),
            CaseStudy::VanDerPol(p) => {
                small("epsilon", p.epsilon)?;
                if !(p.theta > 0.0 && p.theta < std::f64::consts::PI) {
                    return Err(Error::ParameterOutOfRange {
                        name: "theta",
                        value: p.theta,
                        reason: "must lie in (0, pi)",
                    });
                }
                let e2 = num_complex::Complex64::from_polar(1.0, 2.0 * p.theta);
                if (e2 - 1.0).norm() < 0.1 {
                    return Err(Error::ParameterOutOfRange {
                        name: "theta",
                        value: p.theta,
                        reason: "|exp(2 i theta) - 1| must be at least 0.1",
                    });
                }
                Ok(())
            }
            CaseStudy::BoundaryLayer(p) => {
                small("epsilon", p.epsilon)?;
                for (name, v) in [("a", p.a), ("b", p.b)] {
                    if v == 0.0 || !v.is_finite() {
                        return Err(Error::ParameterOutOfRange {
                            name,
                            value: v,
                            reason: "must be finite and nonzero",
                        });
                    }
                }
                if p.n < 2 {
                    return Err(Error::ParameterOutOfRange {
                        name: "n",
                        value: p.n as f64,
                        reason: "must be at least 2",
                    });
                }
                Ok(())
            }
            CaseStudy::Reduction(p) => {
                small("epsilon", p.epsilon)?;
                reduction::check_derivative(&p.g)
            }
            CaseStudy::HtrCubic(p) => small("eta", p.eta),
            CaseStudy::HtrDomainWall(p) => {
                if p.lambda > 0.0 && p.lambda.is_finite() {
                    Ok(())
                } else {
                    Err(Error::ParameterOutOfRange {
                        name: "lambda",
                        value: p.lambda,
                        reason: "must be positive",
                    })
                }
            }
        }
    }
}
