//! Closed-form answers as printed for each case, built without the engine.

use num_complex::Complex64;

use super::CaseStudy;
use crate::error::Result;
use crate::renorm::{
    apply_boundary, Basis, BoundaryCondition, Component, GlobalSolution, Growth, Identification,
};

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn geometric(name: &str, basis: Basis, rate: Complex64, value: Complex64) -> Component {
    Component {
        name: name.into(),
        basis,
        growth: Growth::Geometric {
            factor: 1.0 + rate,
            rate,
        },
        weight: c(1.0),
        value,
        free: true,
    }
}

/// The printed global solution of `case`, with its constants determined
/// from the case's initial or boundary data.
pub fn published_answer(case: &CaseStudy) -> Result<GlobalSolution> {
    case.validate()?;
    let i = Complex64::i();
    Ok(match case {
        // A_0 (1 + i eps/2)^n i^n + B_0 (1 - i eps/2)^n (-i)^n
        CaseStudy::Illustration(p) => {
            let half = 0.5 * p.epsilon;
            let g = GlobalSolution {
                components: vec![
                    geometric("A", Basis::Power(i), i * half, c(0.0)),
                    geometric("B", Basis::Power(-i), -i * half, c(0.0)),
                ],
                form: Identification::Exponential,
                validity_scale: 1.0 / p.epsilon,
            };
            let at = |n, v| BoundaryCondition::At { n, value: c(v) };
            apply_boundary(&g, &[at(0, p.y0), at(1, p.y1)])?
        }
        // A_0 (1 + eps)^n e^{i n theta} + conj
        CaseStudy::VanDerPol(p) => {
            let a0 = Complex64::new(p.amplitude_re, p.amplitude_im);
            let r = Complex64::from_polar(1.0, p.theta);
            GlobalSolution {
                components: vec![
                    geometric("A", Basis::Power(r), c(p.epsilon), a0),
                    geometric("B", Basis::Power(r.conj()), c(p.epsilon), a0.conj()),
                ],
                form: Identification::Power,
                validity_scale: 1.0 / p.epsilon,
            }
        }
        // A_0 (1 + eps b/a^2)^n (-b/a)^n + eps B_0 (-b/a)^n
        CaseStudy::BoundaryLayer(p) => {
            let mode = -p.b / p.a;
            let rate = p.epsilon * p.b / (p.a * p.a);
            let n = p.n as i32;
            let grown = (1.0 + rate).powi(n);
            let back = (-p.a / p.b).powi(n);
            let a0 = (p.beta * back - p.alpha) / (grown - 1.0);
            let b0 = (p.alpha * grown - p.beta * back) / (grown - 1.0) / p.epsilon;
            GlobalSolution {
                components: vec![
                    geometric("A", Basis::Power(c(mode)), c(rate), c(a0)),
                    Component {
                        name: "A1".into(),
                        basis: Basis::Power(c(mode)),
                        growth: Growth::Constant,
                        weight: c(p.epsilon),
                        value: c(b0),
                        free: true,
                    },
                ],
                form: Identification::Power,
                validity_scale: 1.0 / p.epsilon,
            }
        }
        // slow trajectory of Dc = eps f(c, g(c))
        CaseStudy::Reduction(p) => {
            let mut slow = vec![c(p.x0)];
            let mut x = p.x0;
            for _ in 0..case.window() + 2 {
                x += p.epsilon * p.f.eval(x, p.g.eval(x));
                slow.push(c(x));
            }
            GlobalSolution {
                components: vec![Component {
                    name: "c".into(),
                    basis: Basis::Power(c(1.0)),
                    growth: Growth::Tabulated(slow),
                    weight: c(1.0),
                    value: c(p.x0),
                    free: false,
                }],
                form: Identification::Power,
                validity_scale: 1.0 / p.epsilon,
            }
        }
        // (1 + eta)^n B_0
        CaseStudy::HtrCubic(p) => GlobalSolution {
            components: vec![geometric("K0", Basis::Power(c(1.0)), c(p.eta), c(p.b0))],
            form: Identification::Power,
            validity_scale: 1.0 / p.eta,
        },
        // A_0 (k(1 - D) + 1)^n / (1 + e^{lambda n}) with y(0) = 1
        CaseStudy::HtrDomainWall(p) => GlobalSolution {
            components: vec![geometric(
                "A",
                Basis::Logistic { lambda: p.lambda },
                c(p.k * (1.0 - p.d)),
                c(2.0),
            )],
            form: Identification::Power,
            validity_scale: f64::INFINITY,
        },
    })
}
