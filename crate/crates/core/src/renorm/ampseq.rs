//! Polynomials in the amplitude symbols whose coefficients are
//! exponential-binomial sequences, and truncated power series of them in the
//! perturbation parameter.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::seqalg::{ExpBinomSeq, Scalar};

/// Exponent vector over the amplitude symbols.
pub type Monomial = Vec<u32>;

/// `sum_mu A^mu s_mu(n)`, all sequences sharing one anchor.
#[derive(Debug, Clone, PartialEq)]
pub struct AmpSeq<S> {
    anchor: i64,
    arity: usize,
    terms: BTreeMap<Monomial, ExpBinomSeq<S>>,
}

impl<S: Scalar> AmpSeq<S> {
    pub fn zero(arity: usize, anchor: i64) -> Self {
        AmpSeq {
            anchor,
            arity,
            terms: BTreeMap::new(),
        }
    }

    /// `A_j mode^n`.
    pub fn amplitude(arity: usize, j: usize, mode: S, anchor: i64) -> Result<Self> {
        let mut mono = vec![0; arity];
        mono[j] = 1;
        Ok(Self::from_seq(
            arity,
            mono,
            ExpBinomSeq::make_term(S::one(), mode, anchor, 0)?,
        ))
    }

    pub fn from_seq(arity: usize, monomial: Monomial, seq: ExpBinomSeq<S>) -> Self {
        assert_eq!(monomial.len(), arity, "monomial arity");
        let anchor = seq.anchor();
        let mut terms = BTreeMap::new();
        if !seq.is_zero() {
            terms.insert(monomial, seq);
        }
        AmpSeq {
            anchor,
            arity,
            terms,
        }
    }

    pub fn constant(arity: usize, c: S, anchor: i64) -> Self {
        Self::from_seq(arity, vec![0; arity], ExpBinomSeq::constant(c, anchor))
    }

    pub fn anchor(&self) -> i64 {
        self.anchor
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExpBinomSeq<S>)> {
        self.terms.iter()
    }

    /// Sequence multiplying `A^monomial`, zero if absent.
    pub fn coeff(&self, monomial: &[u32]) -> ExpBinomSeq<S> {
        self.terms
            .get(monomial)
            .cloned()
            .unwrap_or_else(|| ExpBinomSeq::zero(self.anchor))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.anchor != other.anchor {
            return Err(Error::AnchorMismatch {
                left: self.anchor,
                right: other.anchor,
            });
        }
        assert_eq!(self.arity, other.arity, "amplitude arity");
        Ok(())
    }

    fn insert_add(&mut self, mono: Monomial, seq: ExpBinomSeq<S>) -> Result<()> {
        let sum = match self.terms.remove(&mono) {
            Some(prev) => prev.add(&seq)?,
            None => seq,
        };
        if !sum.is_zero() {
            self.terms.insert(mono, sum);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (mono, seq) in &other.terms {
            out.insert_add(mono.clone(), seq.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|s| s.neg())
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|s| s.scale(c))
    }

    pub fn shift(&self, j: i64) -> Self {
        self.map(|s| s.shift(j))
    }

    pub fn delta(&self) -> Self {
        self.map(|s| s.delta())
    }

    /// Same coefficients over the basis anchored at `m`.
    pub fn with_anchor(&self, m: i64) -> Self {
        let mut out = self.map(|s| s.with_anchor(m));
        out.anchor = m;
        out
    }

    fn map(&self, f: impl Fn(&ExpBinomSeq<S>) -> ExpBinomSeq<S>) -> Self {
        AmpSeq {
            anchor: self.anchor,
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, s)| (m.clone(), f(s)))
                .filter(|(_, s)| !s.is_zero())
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.arity, self.anchor);
        for (ma, sa) in &self.terms {
            for (mb, sb) in &other.terms {
                let mono: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.insert_add(mono, sa.product(sb)?)?;
            }
        }
        Ok(out)
    }

    /// Value at `n` with the amplitudes set to `amps`.
    pub fn eval(&self, n: i64, amps: &[S]) -> S {
        self.terms.iter().fold(S::zero(), |acc, (mono, seq)| {
            acc + monomial_value(mono, amps) * seq.eval(n)
        })
    }
}

/// `prod_j amps[j]^mono[j]`.
pub fn monomial_value<S: Scalar>(mono: &[u32], amps: &[S]) -> S {
    mono.iter()
        .zip(amps)
        .fold(S::one(), |acc, (&e, a)| acc * a.ipow(e as i64))
}

/// Truncated series `sum_k eps^k y_k` with amplitude-polynomial
/// coefficients. Products keep the shorter of the two truncations.
#[derive(Debug, Clone, PartialEq)]
pub struct Series<S> {
    orders: Vec<AmpSeq<S>>,
}

impl<S: Scalar> Series<S> {
    pub fn new(orders: Vec<AmpSeq<S>>) -> Self {
        assert!(!orders.is_empty(), "series needs at least one order");
        Series { orders }
    }

    pub fn orders(&self) -> &[AmpSeq<S>] {
        &self.orders
    }

    pub fn order(&self, k: usize) -> Option<&AmpSeq<S>> {
        self.orders.get(k)
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    /// Constant `c` at order 0, with the same truncation, arity and anchor.
    pub fn constant_like(&self, c: S) -> Self {
        let first = &self.orders[0];
        let mut orders = vec![AmpSeq::constant(first.arity(), c, first.anchor())];
        orders.extend((1..self.len()).map(|_| AmpSeq::zero(first.arity(), first.anchor())));
        Series { orders }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let n = self.len().min(other.len());
        let orders = (0..n)
            .map(|k| self.orders[k].add(&other.orders[k]))
            .collect::<Result<_>>()?;
        Ok(Series { orders })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|a| a.neg())
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|a| a.scale(c))
    }

    pub fn shift(&self, j: i64) -> Self {
        self.map(|a| a.shift(j))
    }

    fn map(&self, f: impl Fn(&AmpSeq<S>) -> AmpSeq<S>) -> Self {
        Series {
            orders: self.orders.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let n = self.len().min(other.len());
        let first = &self.orders[0];
        let mut orders = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = AmpSeq::zero(first.arity(), first.anchor());
            for i in 0..=k {
                acc = acc.add(&self.orders[i].mul(&other.orders[k - i])?)?;
            }
            orders.push(acc);
        }
        Ok(Series { orders })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqalg::scalar::{gaussian, ratio};
    use crate::seqalg::Exact;

    #[test]
    fn amplitude_products_collect_monomials() {
        let i = gaussian(0, 1);
        let a = AmpSeq::<Exact>::amplitude(2, 0, i.clone(), 0).unwrap();
        let b = AmpSeq::<Exact>::amplitude(2, 1, -i.clone(), 0).unwrap();
        let y = a.add(&b).unwrap();
        let sq = y.mul(&y).unwrap();
        // (A i^n + B (-i)^n)^2 = A^2 (-1)^n + 2AB + B^2 (-1)^n
        assert_eq!(sq.coeff(&[1, 1]), ExpBinomSeq::constant(ratio(2, 1), 0));
        assert_eq!(
            sq.coeff(&[2, 0]),
            ExpBinomSeq::make_term(ratio(1, 1), ratio(-1, 1), 0, 0).unwrap()
        );
        let amps = [gaussian(2, 1), gaussian(-1, 3)];
        for n in -3..6 {
            let v = y.eval(n, &amps);
            assert_eq!(sq.eval(n, &amps), v.clone() * v);
        }
    }

    #[test]
    fn series_product_truncates() {
        let one = AmpSeq::<Exact>::constant(1, ratio(1, 1), 0);
        let s = Series::new(vec![one.clone(), one.clone()]);
        let short = Series::new(vec![one.clone()]);
        let p = s.mul(&s).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.order(1).unwrap(), &one.scale(&ratio(2, 1)));
        assert_eq!(s.mul(&short).unwrap().len(), 1);
        assert!(s.sub(&s).unwrap().orders().iter().all(|o| o.is_zero()));
    }
}
