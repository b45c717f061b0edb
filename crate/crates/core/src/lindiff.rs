//! Linear constant-coefficient difference equations
//! `c_p y(n+p) + ... + c_1 y(n+1) + c_0 y(n) = f(n)` with
//! exponential-binomial forcing.
//!
//! Particular solutions come from undetermined coefficients in the anchored
//! binomial basis. When a forcing base `r` is a characteristic root of
//! multiplicity `mu`, the ansatz starts at degree `mu`, so the secular
//! factors `C(n - m, j)` with `j >= 1` appear exactly at resonance.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linsolve;
use crate::seqalg::{ExpBinomSeq, Scalar, Term};

/// Distance below which a float forcing base counts as resonant.
pub const RESONANCE_TOL: f64 = 1e-9;
/// Upper end of the band in which near-resonance is reported.
pub const NEAR_RESONANCE_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearRecurrence<S> {
    /// `[c_p, ..., c_1, c_0]`, leading coefficient first.
    coeffs: Vec<S>,
}

impl<S: Scalar> LinearRecurrence<S> {
    /// Takes coefficients leading first. Requires `c_p != 0` and `c_0 != 0`.
    pub fn new(coeffs: Vec<S>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::DegenerateRecurrence("order must be at least 1".into()));
        }
        if coeffs[0].vanishes() {
            return Err(Error::DegenerateRecurrence("leading coefficient is zero".into()));
        }
        if coeffs[coeffs.len() - 1].vanishes() {
            return Err(Error::DegenerateRecurrence("trailing coefficient is zero".into()));
        }
        Ok(LinearRecurrence { coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Leading coefficient first.
    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Coefficient multiplying `y(n + j)`.
    pub fn coeff_at_shift(&self, j: usize) -> &S {
        &self.coeffs[self.order() - j]
    }

    /// `sum_j c_j lambda^j`.
    pub fn char_poly(&self, lambda: &S) -> S {
        self.coeffs
            .iter()
            .fold(S::zero(), |acc, c| acc * lambda.clone() + c.clone())
    }

    /// Applies the operator to a sequence.
    pub fn apply(&self, s: &ExpBinomSeq<S>) -> ExpBinomSeq<S> {
        let mut out = ExpBinomSeq::zero(s.anchor());
        for j in 0..=self.order() {
            let term = s.shift(j as i64).scale(self.coeff_at_shift(j));
            out = out.add(&term).expect("shared anchor");
        }
        out
    }

    /// `sum_j c_j y(n+j)` from a window `y(n), ..., y(n+p)`.
    pub fn apply_window(&self, window: &[S]) -> S {
        window
            .iter()
            .enumerate()
            .fold(S::zero(), |acc, (j, v)| acc + self.coeff_at_shift(j).clone() * v.clone())
    }

    /// `T_s(r) = sum_j c_j r^j C(j, s)`: `L[r^n C(x, k)]` has coefficient
    /// `T_s(r) r^n` on `C(x, k - s)`.
    fn taylor_coeff(&self, r: &S, s: u32) -> S {
        (0..=self.order()).fold(S::zero(), |acc, j| {
            acc + self.coeff_at_shift(j).clone() * r.ipow(j as i64) * S::binomial(j as i64, s)
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSet<S> {
    pub roots: Vec<(S, usize)>,
}

impl<S: Scalar> RootSet<S> {
    pub fn multiplicity_of(&self, base: &S) -> usize {
        self.roots
            .iter()
            .find(|(r, _)| r.same_base(base))
            .map_or(0, |(_, mu)| *mu)
    }

    /// Distance from `base` to the nearest root.
    pub fn distance_to(&self, base: &S) -> f64 {
        self.roots
            .iter()
            .map(|(r, _)| (r.to_c64() - base.to_c64()).norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn degree(&self) -> usize {
        self.roots.iter().map(|(_, m)| m).sum()
    }
}

/// Roots of the characteristic polynomial with multiplicities. Orders 1 and
/// 2 use closed forms; higher orders use companion-matrix eigenvalues and
/// are float-only.
pub fn char_roots<S: Scalar>(rec: &LinearRecurrence<S>) -> Result<RootSet<S>> {
    let c = rec.coeffs();
    let roots = match rec.order() {
        1 => vec![(-(c[1].clone()) / c[0].clone(), 1)],
        2 => {
            let (a, b, cc) = (c[0].clone(), c[1].clone(), c[2].clone());
            let disc = b.clone() * b.clone() - S::from_i64(4) * a.clone() * cc.clone();
            let mut s = disc
                .sqrt()
                .ok_or_else(|| Error::InexactRoots(format!("discriminant {:?}", disc.to_c64())))?;
            if (b.clone() + s.clone()).magnitude() < (b.clone() - s.clone()).magnitude() {
                s = -s;
            }
            let q = -(b + s) / S::from_i64(2);
            let r1 = q.clone() / a;
            let r2 = cc / q;
            if r1.same_base(&r2) {
                vec![(r1, 2)]
            } else {
                let mut v = vec![(r1, 1), (r2, 1)];
                v.sort_by(|x, y| x.0.total_cmp(&y.0));
                v
            }
        }
        p => {
            if S::EXACT {
                return Err(Error::InexactRoots(format!(
                    "order {p} roots are computed in float mode only"
                )));
            }
            companion_roots(rec)?
                .into_iter()
                .map(|(r, m)| (S::from_c64(r), m))
                .collect()
        }
    };
    Ok(RootSet { roots })
}

fn companion_roots<S: Scalar>(rec: &LinearRecurrence<S>) -> Result<Vec<(Complex64, usize)>> {
    let p = rec.order();
    let lead = rec.coeffs()[0].to_c64();
    let monic: Vec<Complex64> = rec.coeffs().iter().map(|c| c.to_c64() / lead).collect();
    let mut m = DMatrix::<Complex64>::zeros(p, p);
    for i in 1..p {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    // last column: -a_0, -a_1, ..., -a_{p-1}
    for i in 0..p {
        m[(i, p - 1)] = -monic[p - i];
    }
    let eig = nalgebra::Schur::new(m)
        .eigenvalues()
        .ok_or_else(|| Error::DegenerateRecurrence("eigenvalue iteration failed".into()))?;
    let poly = |z: Complex64| monic.iter().fold(Complex64::new(0.0, 0.0), |a, c| a * z + c);
    let dpoly = |z: Complex64| {
        monic[..p]
            .iter()
            .enumerate()
            .fold(Complex64::new(0.0, 0.0), |a, (i, c)| a * z + c * (p - i) as f64)
    };
    let mut polished: Vec<Complex64> = eig
        .iter()
        .map(|&z0| {
            let mut z = z0;
            for _ in 0..8 {
                let d = dpoly(z);
                if d.norm() < 1e-14 {
                    break;
                }
                let step = poly(z) / d;
                z -= step;
                if step.norm() < 1e-16 * (1.0 + z.norm()) {
                    break;
                }
            }
            if poly(z).norm() <= poly(z0).norm() {
                z
            } else {
                z0
            }
        })
        .collect();
    polished.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    // eigenvalues of a repeated root scatter by ~ eps^(1/mu)
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for z in polished {
        match clusters
            .iter_mut()
            .find(|(c, mu)| (*c / *mu as f64 - z).norm() <= 1e-6)
        {
            Some((c, mu)) => {
                *c += z;
                *mu += 1;
            }
            None => clusters.push((z, 1)),
        }
    }
    Ok(clusters
        .into_iter()
        .map(|(sum, mu)| {
            let centre = sum / mu as f64;
            if mu == 1 {
                return (centre, mu);
            }
            // a root of multiplicity mu is a simple root of the (mu-1)-th derivative
            let d = derivative(&monic, mu - 1);
            let dd = derivative(&monic, mu);
            let mut z = centre;
            for _ in 0..8 {
                let den = horner(&dd, z);
                if den.norm() < 1e-14 {
                    break;
                }
                z -= horner(&d, z) / den;
            }
            (z, mu)
        })
        .collect())
}

/// Coefficients (leading first) of the `k`-th derivative.
fn derivative(coeffs: &[Complex64], k: usize) -> Vec<Complex64> {
    let deg = coeffs.len() - 1;
    (0..=deg.saturating_sub(k))
        .map(|i| {
            let power = deg - i;
            let falling: f64 = (0..k).map(|j| (power - j) as f64).product();
            coeffs[i] * falling
        })
        .collect()
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().fold(Complex64::new(0.0, 0.0), |a, c| a * z + c)
}

/// Basis `r^n C(n - m, j)`, `j < mu`, for each root.
pub fn homogeneous_basis<S: Scalar>(roots: &RootSet<S>, m: i64) -> Vec<ExpBinomSeq<S>> {
    roots
        .roots
        .iter()
        .flat_map(|(r, mu)| {
            (0..*mu as u32)
                .map(move |j| ExpBinomSeq::make_term(S::one(), r.clone(), m, j).expect("nonzero root"))
        })
        .collect()
}

/// A forcing base that sits close to, but not on, a characteristic root.
#[derive(Debug, Clone, PartialEq)]
pub struct NearResonance {
    pub base: Complex64,
    pub distance: f64,
}

/// Forcing bases whose distance to a root lies in
/// `(RESONANCE_TOL, NEAR_RESONANCE_TOL)`.
pub fn near_resonances<S: Scalar>(
    roots: &RootSet<S>,
    forcing: &ExpBinomSeq<S>,
) -> Vec<NearResonance> {
    if S::EXACT {
        return Vec::new();
    }
    forcing
        .bases()
        .iter()
        .filter_map(|b| {
            let d = roots.distance_to(b);
            (d > RESONANCE_TOL && d < NEAR_RESONANCE_TOL).then(|| NearResonance {
                base: b.to_c64(),
                distance: d,
            })
        })
        .collect()
}

/// Particular solution by undetermined coefficients, anchored at the
/// forcing's anchor. For forcing base `r` of characteristic multiplicity
/// `mu` and top degree `d`, posits `sum_j a_j r^n C(n - m, j)` for
/// `j = mu..=mu + d`.
pub fn particular_solution<S: Scalar>(
    rec: &LinearRecurrence<S>,
    forcing: &ExpBinomSeq<S>,
) -> Result<ExpBinomSeq<S>> {
    let roots = char_roots(rec)?;
    particular_with_roots(rec, &roots, forcing)
}

pub(crate) fn particular_with_roots<S: Scalar>(
    rec: &LinearRecurrence<S>,
    roots: &RootSet<S>,
    forcing: &ExpBinomSeq<S>,
) -> Result<ExpBinomSeq<S>> {
    let m = forcing.anchor();
    let mut raw = Vec::new();
    for base in forcing.bases() {
        let mu = roots.multiplicity_of(&base) as u32;
        let group: Vec<&Term<S>> = forcing
            .terms()
            .iter()
            .filter(|t| t.base.same_base(&base))
            .collect();
        let d = group.iter().map(|t| t.degree).max().unwrap_or(0);
        let size = d as usize + 1;
        let rhs: Vec<S> = (0..=d)
            .map(|i| {
                group
                    .iter()
                    .filter(|t| t.degree == i)
                    .fold(S::zero(), |a, t| a + t.coeff.clone())
            })
            .collect();
        let taylor: Vec<S> = (0..=mu + d).map(|s| rec.taylor_coeff(&base, s)).collect();
        let matrix: Vec<Vec<S>> = (0..=d)
            .map(|i| {
                (0..=d)
                    .map(|col| {
                        let j = mu + col;
                        if j >= i {
                            taylor[(j - i) as usize].clone()
                        } else {
                            S::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        debug_assert_eq!(matrix.len(), size);
        let sol = linsolve::solve(matrix, rhs).ok_or_else(|| Error::SingularAnsatz {
            base: format!("{:?}", base.to_c64()),
        })?;
        for (col, a) in sol.into_iter().enumerate() {
            raw.push(Term {
                coeff: a,
                base: base.clone(),
                degree: mu + col as u32,
            });
        }
    }
    Ok(ExpBinomSeq::from_terms(m, raw))
}

/// Solution matching `initial = [y(0), ..., y(p-1)]`.
pub fn solve<S: Scalar>(
    rec: &LinearRecurrence<S>,
    forcing: &ExpBinomSeq<S>,
    initial: &[S],
) -> Result<ExpBinomSeq<S>> {
    let p = rec.order();
    if initial.len() != p {
        return Err(Error::InitialLength {
            expected: p,
            got: initial.len(),
        });
    }
    let roots = char_roots(rec)?;
    let particular = particular_with_roots(rec, &roots, forcing)?;
    let basis = homogeneous_basis(&roots, forcing.anchor());
    let matrix: Vec<Vec<S>> = (0..p as i64)
        .map(|n| basis.iter().map(|b| b.eval(n)).collect())
        .collect();
    let rhs: Vec<S> = (0..p as i64)
        .map(|n| initial[n as usize].clone() - particular.eval(n))
        .collect();
    let weights = linsolve::solve(matrix, rhs).ok_or(Error::SingularCasorati)?;
    let mut out = particular;
    for (w, b) in weights.iter().zip(&basis) {
        out = out.add(&b.scale(w))?;
    }
    Ok(out)
}

/// Direct forward iteration `y(n+p) = (f(n) - sum_{j<p} c_j y(n+j)) / c_p`
/// for `n = 0..`, returning `y(0..=n_max)`.
pub fn iterate<S: Scalar>(
    rec: &LinearRecurrence<S>,
    forcing: &dyn Fn(i64) -> S,
    initial: &[S],
    n_max: usize,
) -> Vec<S> {
    let p = rec.order();
    let mut y: Vec<S> = initial.to_vec();
    while y.len() <= n_max {
        let n = y.len() - p;
        let partial = (0..p).fold(S::zero(), |a, j| {
            a + rec.coeff_at_shift(j).clone() * y[n + j].clone()
        });
        y.push((forcing(n as i64) - partial) / rec.coeffs()[0].clone());
    }
    y.truncate(n_max + 1);
    y
}

/// Variation of constants for a first-order equation
/// `c_1 y(n+1) + c_0 y(n) = f(n)`: with `r = -c_0/c_1` and `y = r^n u`,
/// `D u(n) = f(n) / (c_1 r^(n+1))`, summed from the anchor so that
/// `u(m) = 0`.
pub fn variation_of_constants<S: Scalar>(
    rec: &LinearRecurrence<S>,
    forcing: &ExpBinomSeq<S>,
) -> Result<ExpBinomSeq<S>> {
    if rec.order() != 1 {
        return Err(Error::DegenerateRecurrence(
            "variation of constants is implemented for first-order equations".into(),
        ));
    }
    let m = forcing.anchor();
    let c1 = rec.coeffs()[0].clone();
    let r = -(rec.coeffs()[1].clone()) / c1.clone();
    let du = ExpBinomSeq::from_terms(
        m,
        forcing
            .terms()
            .iter()
            .map(|t| Term {
                coeff: t.coeff.clone() / (c1.clone() * r.clone()),
                base: t.base.clone() / r.clone(),
                degree: t.degree,
            })
            .collect(),
    );
    let summation = LinearRecurrence::new(vec![S::one(), -S::one()])?;
    let u = particular_solution(&summation, &du)?;
    let u = u.sub(&ExpBinomSeq::constant(u.eval(m), m))?;
    let rn = ExpBinomSeq::make_term(S::one(), r, m, 0)?;
    rn.product(&u)
}
