//! Slow-manifold reduction of the fast-slow system
//! `Dx = eps f(x, y)`, `Dy = -y + g(x)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ReductionParams, DIVERGENCE_GUARD};
use crate::error::{Error, Result};
use crate::seqalg::ExpBinomSeq;

/// `sum_i coeffs[i] x^i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly1 {
    pub coeffs: Vec<f64>,
}

impl Poly1 {
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly1 {
        Poly1 {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * i as f64)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyTerm {
    pub coeff: f64,
    pub x: u32,
    pub y: u32,
}

/// `sum coeff x^i y^j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly2 {
    pub terms: Vec<PolyTerm>,
}

impl Poly2 {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff * x.powi(t.x as i32) * y.powi(t.y as i32))
            .sum()
    }
}

const DERIVATIVE_PROBES: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];

/// Spot-checks `g'` against central differences.
pub(super) fn check_derivative(g: &Poly1) -> Result<()> {
    let dg = g.derivative();
    let h = 1e-5;
    for x in DERIVATIVE_PROBES {
        let fd = (g.eval(x + h) - g.eval(x - h)) / (2.0 * h);
        if (fd - dg.eval(x)).abs() > 1e-6 * (1.0 + fd.abs()) {
            return Err(Error::ParameterOutOfRange {
                name: "g",
                value: x,
                reason: "derivative disagrees with central differences",
            });
        }
    }
    Ok(())
}

/// First-order solution about anchor `n0` for slow constant `c` and
/// correction constant `b`: `x_1 = F C(n - n0, 1) + b` and `y_1` with
/// `y_1(n+1) = g'(c) x_1(n)`, where `F = f(c, g(c))`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrder {
    pub x1: ExpBinomSeq<Complex64>,
    pub y1: ExpBinomSeq<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldResult {
    pub epsilon: f64,
    pub f: Poly2,
    pub g: Poly1,
    pub dg: Poly1,
    /// `c(n)` under `Dc = eps f(c, g(c))`.
    pub slow: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl ManifoldResult {
    fn forcing(&self, c: f64) -> f64 {
        self.f.eval(c, self.g.eval(c))
    }

    pub fn first_order(&self, c: f64, b: f64, n0: i64) -> FirstOrder {
        let cf = |v: f64| Complex64::new(v, 0.0);
        let one = cf(1.0);
        let x1 = ExpBinomSeq::make_term(cf(self.forcing(c)), one, n0, 1)
            .expect("unit base")
            .add(&ExpBinomSeq::constant(cf(b), n0))
            .expect("shared anchor");
        let y1 = x1.shift(-1).scale(&cf(self.dg.eval(c)));
        FirstOrder { x1, y1 }
    }

    /// Reduced update `Dc`, read off the secular coefficient of `x_1`.
    pub fn reduced_increment(&self, c: f64) -> f64 {
        let fo = self.first_order(c, 0.0, 0);
        self.epsilon * fo.x1.coeff_of(&Complex64::new(1.0, 0.0), 1).re
    }

    /// `y = g(x) + eps y_1(n0)` with `b = 0`, i.e.
    /// `g(x) - eps g'(x) f(x, g(x))`.
    pub fn manifold(&self, x: f64) -> f64 {
        let fo = self.first_order(x, 0.0, 0);
        self.g.eval(x) + self.epsilon * fo.y1.eval(0).re
    }

    /// `g(x) - g'(x) f(x, g(x))`, the correction without its `eps` factor.
    pub fn manifold_unscaled(&self, x: f64) -> f64 {
        self.g.eval(x) - self.dg.eval(x) * self.forcing(x)
    }

    /// `|y(n) - manifold(x(n))|` along the full trajectory.
    pub fn distances(&self) -> Vec<f64> {
        self.x
            .iter()
            .zip(&self.y)
            .map(|(&x, &y)| (y - self.manifold(x)).abs())
            .collect()
    }
}

/// Iterates the reduced map and the full system for `n = 0..=n_max`. The
/// full system starts at `(x0, y0)`, with `y0` on the manifold by default.
pub fn reduction_pipeline(p: &ReductionParams, n_max: usize) -> Result<ManifoldResult> {
    let mut out = ManifoldResult {
        epsilon: p.epsilon,
        f: p.f.clone(),
        g: p.g.clone(),
        dg: p.g.derivative(),
        slow: Vec::with_capacity(n_max + 1),
        x: Vec::with_capacity(n_max + 1),
        y: Vec::with_capacity(n_max + 1),
    };
    let mut c = p.x0;
    let (mut x, mut y) = (p.x0, p.y0.unwrap_or_else(|| out.manifold(p.x0)));
    for n in 0..=n_max {
        for v in [c, x, y] {
            if !(v.abs() <= DIVERGENCE_GUARD) {
                return Err(Error::Divergence { n, value: v.abs() });
            }
        }
        out.slow.push(c);
        out.x.push(x);
        out.y.push(y);
        c += out.reduced_increment(c);
        let xn = x + p.epsilon * p.f.eval(x, y);
        y = p.g.eval(x);
        x = xn;
    }
    Ok(out)
}
