//! Ground-truth trajectories obtained from the unexpanded equations.

use num_complex::Complex64;

use super::{
    reduction_pipeline, BoundaryLayerParams, CaseStudy, DomainWallParams, DIVERGENCE_GUARD,
};
use crate::error::{Error, Result};
use crate::lindiff::{self, LinearRecurrence};
use crate::renorm::{Amplitude, RenormSystem, UpdateTerm};
use crate::seqalg::ExpBinomSeq;

/// Relative agreement required between iteration and a closed-form
/// linear solution.
pub const CLOSED_FORM_TOL: f64 = 1e-9;

/// `y(0..=n_max)` of the original equation. The reduction case returns the
/// slow variable `x(n)` with the fast variable `y(n)` as companion.
pub fn exact_values(
    case: &CaseStudy,
    n_max: usize,
) -> Result<(Vec<Complex64>, Option<Vec<Complex64>>)> {
    let real = |v: Vec<f64>| v.into_iter().map(|x| Complex64::new(x, 0.0)).collect::<Vec<_>>();
    let values = match case {
        CaseStudy::Illustration(p) => {
            let e = p.epsilon;
            let mut y = vec![p.y0, p.y1];
            while y.len() <= n_max {
                let k = y.len();
                y.push(-e * y[k - 1] - y[k - 2]);
            }
            y.truncate(n_max + 1);
            let y = real(y);
            cross_check_linear(&[1.0, e, 1.0], &[p.y0, p.y1], &y)?;
            y
        }
        CaseStudy::VanDerPol(p) => {
            let (c, e) = (p.theta.cos(), p.epsilon);
            let a0 = Complex64::new(p.amplitude_re, p.amplitude_im);
            // start on the assembled solution: y(n) = 2 Re(A0 (1+eps)^n e^{i n theta})
            let start = |n: i32| 2.0 * (a0 * (1.0 + e).powi(n) * Complex64::from_polar(1.0, p.theta * n as f64)).re;
            let mut y = vec![start(0), start(1)];
            while y.len() <= n_max {
                let k = y.len();
                let (y0, y1) = (y[k - 2], y[k - 1]);
                let s = e * (1.0 - y1 * y1);
                y.push((2.0 * c * y1 - y0 - s * y0) / (1.0 - s));
            }
            y.truncate(n_max + 1);
            real(guard(y)?)
        }
        CaseStudy::BoundaryLayer(p) => real(boundary_layer_exact(p, n_max)?),
        CaseStudy::Reduction(p) => {
            let r = reduction_pipeline(p, n_max)?;
            return Ok((real(r.x), Some(real(r.y))));
        }
        CaseStudy::HtrCubic(p) => {
            let mut y = vec![p.b0];
            while y.len() <= n_max {
                let v = *y.last().expect("nonempty");
                y.push(v + p.eta * (v + v * v * v));
            }
            real(guard(y)?)
        }
        CaseStudy::HtrDomainWall(p) => real(domain_wall_shooting(p, n_max)),
    };
    Ok((values, None))
}

fn guard(y: Vec<f64>) -> Result<Vec<f64>> {
    match y.iter().position(|v| !(v.abs() <= DIVERGENCE_GUARD)) {
        Some(n) => Err(Error::Divergence {
            n,
            value: y[n].abs(),
        }),
        None => Ok(y),
    }
}

/// Compares an iterated trajectory with the characteristic-root solution.
fn cross_check_linear(coeffs: &[f64], initial: &[f64], y: &[Complex64]) -> Result<()> {
    let c = |v: f64| Complex64::new(v, 0.0);
    let rec = LinearRecurrence::new(coeffs.iter().map(|&v| c(v)).collect())?;
    let init: Vec<Complex64> = initial.iter().map(|&v| c(v)).collect();
    let closed = lindiff::solve(&rec, &ExpBinomSeq::zero(0), &init)?;
    for (n, v) in y.iter().enumerate() {
        let w = closed.eval(n as i64);
        if (w - v).norm() > CLOSED_FORM_TOL * (1.0 + v.norm()) {
            return Err(Error::Verify(format!(
                "iteration and closed form disagree at n = {n}: {v} vs {w}"
            )));
        }
    }
    Ok(())
}

/// Roots of `eps l^2 + a l + b = 0` as (slow, fast).
pub(super) fn boundary_layer_roots(p: &BoundaryLayerParams) -> (f64, f64) {
    let disc = p.a * p.a - 4.0 * p.epsilon * p.b;
    let q = -(p.a + p.a.signum() * disc.sqrt()) / 2.0;
    (p.b / q, q / p.epsilon)
}

/// `c l_slow^n + d l_fast^(n - N)` through `y(0) = alpha`, `y(N) = beta`,
/// checked against backward iteration from the terminal pair.
fn boundary_layer_exact(p: &BoundaryLayerParams, n_max: usize) -> Result<Vec<f64>> {
    let (ls, lf) = boundary_layer_roots(p);
    if !(p.a * p.a > 4.0 * p.epsilon * p.b) {
        return Err(Error::ParameterOutOfRange {
            name: "epsilon",
            value: p.epsilon,
            reason: "characteristic roots must be real and distinct",
        });
    }
    let big_n = p.n as i32;
    // [1, lf^-N; ls^N, 1] [c, d] = [alpha, beta]
    let m01 = lf.powi(-big_n);
    let m10 = ls.powi(big_n);
    let det = 1.0 - m01 * m10;
    let c = (p.alpha - m01 * p.beta) / det;
    let d = (p.beta - m10 * p.alpha) / det;
    let closed = |n: i32| c * ls.powi(n) + d * lf.powi(n - big_n);
    let y: Vec<f64> = (0..=n_max as i32).map(closed).collect();
    // backward iteration y(n) = -(eps y(n+2) + a y(n+1)) / b is stable here
    let mut back = vec![0.0; p.n + 1];
    back[p.n] = closed(big_n);
    back[p.n - 1] = closed(big_n - 1);
    for n in (0..p.n - 1).rev() {
        back[n] = -(p.epsilon * back[n + 2] + p.a * back[n + 1]) / p.b;
    }
    for (n, (u, v)) in back.iter().zip(&y).enumerate() {
        if (u - v).abs() > 1e-12 * (1.0 + v.abs()) {
            return Err(Error::Verify(format!(
                "boundary-layer iteration and closed form disagree at n = {n}"
            )));
        }
    }
    Ok(y)
}

/// Solution of `y(n+2) - 2y(n+1) + y(n) = D(y - y^3)` with `y(0) = 1` and
/// `y(n) -> 0`, found by bisection on `y(1)`. Once the wall has decayed
/// below the bracket resolution the remaining values are reported as 0.
pub fn domain_wall_shooting(p: &DomainWallParams, n_max: usize) -> Vec<f64> {
    enum Fate {
        Undershoot,
        Overshoot,
        Decays,
    }
    let run = |y1: f64| -> (Vec<f64>, Fate) {
        let mut y = vec![1.0, y1];
        while y.len() <= n_max {
            let k = y.len();
            let (a, b) = (y[k - 2], y[k - 1]);
            let c = 2.0 * b - a + p.d * (a - a * a * a);
            if c < 0.0 {
                return (y, Fate::Undershoot);
            }
            if c > b {
                return (y, Fate::Overshoot);
            }
            y.push(c);
        }
        (y, Fate::Decays)
    };
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut best = run(0.5).0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (y, fate) = run(mid);
        best = y;
        match fate {
            Fate::Undershoot => lo = mid,
            Fate::Overshoot => hi = mid,
            Fate::Decays => break,
        }
    }
    best.resize(n_max + 1, 0.0);
    best.truncate(n_max + 1);
    best
}

/// `DB = eps B (1 - k B^2)`, the full closure after setting `A = k B`.
pub fn logistic_system(k: f64) -> RenormSystem<Complex64> {
    let c = |v: f64| Complex64::new(v, 0.0);
    RenormSystem::new(
        vec![Amplitude {
            name: "B".into(),
            mode: c(1.0),
            conjugate: None,
        }],
        vec![vec![
            UpdateTerm {
                coeff: c(1.0),
                eps_power: 1,
                monomial: vec![1],
                rate: c(1.0),
            },
            UpdateTerm {
                coeff: c(-k),
                eps_power: 1,
                monomial: vec![3],
                rate: c(1.0),
            },
        ]],
        false,
    )
}
