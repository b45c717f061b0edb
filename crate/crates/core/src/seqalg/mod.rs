//! Exact algebra of exponential-binomial sequences
//! `n -> sum_j c_j r_j^n C(n - m, k_j)`.
//!
//! The algebra is closed under shift, forward difference, addition, scaling
//! and pointwise product. All terms of a sequence share one anchor `m`;
//! moving to another anchor is the explicit [`ExpBinomSeq::reanchor`].

pub mod scalar;
pub mod stirling;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use scalar::{Exact, Scalar};

/// One term `coeff * base^n * C(n - anchor, degree)`. The anchor lives on
/// the owning sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Term<S> {
    pub coeff: S,
    pub base: S,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpBinomSeq<S> {
    anchor: i64,
    terms: Vec<Term<S>>,
}

/// JSON row for one term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub coeff_re: f64,
    pub coeff_im: f64,
    pub base_re: f64,
    pub base_im: f64,
    pub anchor: i64,
    pub degree: u32,
}

impl<S: Scalar> ExpBinomSeq<S> {
    pub fn zero(anchor: i64) -> Self {
        ExpBinomSeq {
            anchor,
            terms: Vec::new(),
        }
    }

    /// `n -> c r^n C(n - m, k)`.
    pub fn make_term(c: S, r: S, m: i64, k: u32) -> Result<Self> {
        if r.vanishes() {
            return Err(Error::ZeroBase);
        }
        Ok(Self::from_terms(
            m,
            vec![Term {
                coeff: c,
                base: r,
                degree: k,
            }],
        ))
    }

    pub fn constant(c: S, m: i64) -> Self {
        Self::from_terms(
            m,
            vec![Term {
                coeff: c,
                base: S::one(),
                degree: 0,
            }],
        )
    }

    /// Builds the canonical form: equal modes merged, zero coefficients
    /// dropped, terms sorted by (base, degree).
    pub fn from_terms(anchor: i64, raw: Vec<Term<S>>) -> Self {
        let mut merged: Vec<Term<S>> = Vec::with_capacity(raw.len());
        for t in raw {
            assert!(!t.base.vanishes(), "zero base in sequence term");
            match merged
                .iter_mut()
                .find(|u| u.degree == t.degree && u.base.same_base(&t.base))
            {
                Some(u) => u.coeff = u.coeff.clone() + t.coeff,
                None => merged.push(t),
            }
        }
        merged.retain(|t| !t.coeff.vanishes());
        merged.sort_by(|a, b| {
            a.base
                .total_cmp(&b.base)
                .then_with(|| a.degree.cmp(&b.degree))
        });
        ExpBinomSeq {
            anchor,
            terms: merged,
        }
    }

    pub fn anchor(&self) -> i64 {
        self.anchor
    }

    /// Same coefficients over the basis anchored at `m`. This is a different
    /// sequence unless every term has degree 0; see [`Self::reanchor`] for
    /// the value-preserving change of anchor.
    pub fn with_anchor(&self, m: i64) -> Self {
        ExpBinomSeq {
            anchor: m,
            terms: self.terms.clone(),
        }
    }

    pub fn terms(&self) -> &[Term<S>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.degree).max()
    }

    /// Distinct bases in canonical order.
    pub fn bases(&self) -> Vec<S> {
        let mut out: Vec<S> = Vec::new();
        for t in &self.terms {
            if !out.iter().any(|b| b.same_base(&t.base)) {
                out.push(t.base.clone());
            }
        }
        out
    }

    /// Coefficient of `base^n C(n - m, degree)`, zero if absent.
    pub fn coeff_of(&self, base: &S, degree: u32) -> S {
        self.terms
            .iter()
            .find(|t| t.degree == degree && t.base.same_base(base))
            .map(|t| t.coeff.clone())
            .unwrap_or_else(S::zero)
    }

    fn check_anchor(&self, other: &Self) -> Result<()> {
        if self.anchor != other.anchor {
            return Err(Error::AnchorMismatch {
                left: self.anchor,
                right: other.anchor,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_anchor(other)?;
        let mut raw = self.terms.clone();
        raw.extend(other.terms.iter().cloned());
        Ok(Self::from_terms(self.anchor, raw))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn scale(&self, c: &S) -> Self {
        let raw = self
            .terms
            .iter()
            .map(|t| Term {
                coeff: t.coeff.clone() * c.clone(),
                base: t.base.clone(),
                degree: t.degree,
            })
            .collect();
        Self::from_terms(self.anchor, raw)
    }

    /// `n -> s(n + j)` in the same anchored basis, using
    /// `C(x + j, k) = sum_i C(j, i) C(x, k - i)`.
    pub fn shift(&self, j: i64) -> Self {
        if j == 0 {
            return self.clone();
        }
        let mut raw = Vec::new();
        for t in &self.terms {
            let scaled = t.coeff.clone() * t.base.ipow(j);
            for i in 0..=t.degree {
                let w = S::binomial(j, i);
                if w.vanishes() {
                    continue;
                }
                raw.push(Term {
                    coeff: scaled.clone() * w,
                    base: t.base.clone(),
                    degree: t.degree - i,
                });
            }
        }
        Self::from_terms(self.anchor, raw)
    }

    /// Forward difference. Per term:
    /// `D[r^n C(x,k)] = (r - 1) r^n C(x,k) + r r^n C(x,k-1)`.
    pub fn delta(&self) -> Self {
        let mut raw = Vec::new();
        for t in &self.terms {
            raw.push(Term {
                coeff: t.coeff.clone() * (t.base.clone() - S::one()),
                base: t.base.clone(),
                degree: t.degree,
            });
            if t.degree > 0 {
                raw.push(Term {
                    coeff: t.coeff.clone() * t.base.clone(),
                    base: t.base.clone(),
                    degree: t.degree - 1,
                });
            }
        }
        Self::from_terms(self.anchor, raw)
    }

    /// Pointwise product. Binomial factors go through the monomial basis
    /// with Stirling numbers of both kinds.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check_anchor(other)?;
        let mut raw = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                let (da, db) = (a.degree as usize, b.degree as usize);
                if da + db > stirling::MAX_DEGREE {
                    return Err(Error::DegreeOverflow(da + db));
                }
                let c = a.coeff.clone() * b.coeff.clone();
                let base = a.base.clone() * b.base.clone();
                for (k, w) in stirling::binomial_product(da, db).iter().enumerate() {
                    if num_traits::Zero::is_zero(w) {
                        continue;
                    }
                    raw.push(Term {
                        coeff: c.clone() * S::from_rational(w),
                        base: base.clone(),
                        degree: k as u32,
                    });
                }
            }
        }
        Ok(Self::from_terms(self.anchor, raw))
    }

    /// Same sequence expressed about `m_new`. For each base the polynomial
    /// factor is re-expanded from its difference table at `m_new`.
    pub fn reanchor(&self, m_new: i64) -> Self {
        if m_new == self.anchor {
            return self.clone();
        }
        let mut raw = Vec::new();
        for base in self.bases() {
            let group: Vec<&Term<S>> = self
                .terms
                .iter()
                .filter(|t| t.base.same_base(&base))
                .collect();
            let kmax = group.iter().map(|t| t.degree).max().unwrap_or(0);
            let poly = |n: i64| -> S {
                group.iter().fold(S::zero(), |acc, t| {
                    acc + t.coeff.clone() * S::binomial(n - self.anchor, t.degree)
                })
            };
            let samples: Vec<S> = (0..=kmax as i64).map(|j| poly(m_new + j)).collect();
            for k in 0..=kmax {
                let mut d = S::zero();
                for (j, v) in samples.iter().enumerate().take(k as usize + 1) {
                    let sign = if (k as usize - j) % 2 == 0 { 1 } else { -1 };
                    d = d + v.clone() * S::binomial(k as i64, j as u32) * S::from_i64(sign);
                }
                raw.push(Term {
                    coeff: d,
                    base: base.clone(),
                    degree: k,
                });
            }
        }
        Self::from_terms(m_new, raw)
    }

    pub fn eval(&self, n: i64) -> S {
        self.terms.iter().fold(S::zero(), |acc, t| {
            acc + t.coeff.clone() * t.base.ipow(n) * S::binomial(n - self.anchor, t.degree)
        })
    }

    /// Structural comparison with an absolute coefficient tolerance.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.anchor == other.anchor
            && self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(&other.terms)
                .all(|(a, b)| {
                    a.degree == b.degree && a.base.same_base(&b.base) && a.coeff.near(&b.coeff, tol)
                })
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|t| {
                let c = t.coeff.to_c64();
                let r = t.base.to_c64();
                TermRecord {
                    coeff_re: c.re,
                    coeff_im: c.im,
                    base_re: r.re,
                    base_im: r.im,
                    anchor: self.anchor,
                    degree: t.degree,
                }
            })
            .collect()
    }

    /// Rebuilds a sequence from JSON rows. An empty list is the zero
    /// sequence anchored at `default_anchor`.
    pub fn from_records(records: &[TermRecord], default_anchor: i64) -> Result<Self> {
        let anchor = records.first().map_or(default_anchor, |r| r.anchor);
        let mut raw = Vec::with_capacity(records.len());
        for r in records {
            if r.anchor != anchor {
                return Err(Error::AnchorMismatch {
                    left: anchor,
                    right: r.anchor,
                });
            }
            let base = S::from_c64(num_complex::Complex64::new(r.base_re, r.base_im));
            if base.vanishes() {
                return Err(Error::ZeroBase);
            }
            raw.push(Term {
                coeff: S::from_c64(num_complex::Complex64::new(r.coeff_re, r.coeff_im)),
                base,
                degree: r.degree,
            });
        }
        Ok(Self::from_terms(anchor, raw))
    }
}
