//! Newton-Maclaurin expansion of sequences about an integer anchor:
//! `y(n) = sum_k D^k y(m) C(n - m, k)`.

use crate::seqalg::{ExpBinomSeq, Scalar};

/// A deterministic, side-effect-free map `n -> y(n)`.
pub trait SequenceOracle<S>: Sync {
    fn at(&self, n: i64) -> S;
}

impl<S, F> SequenceOracle<S> for F
where
    F: Fn(i64) -> S + Sync,
{
    fn at(&self, n: i64) -> S {
        self(n)
    }
}

impl<S: Scalar> SequenceOracle<S> for ExpBinomSeq<S> {
    fn at(&self, n: i64) -> S {
        self.eval(n)
    }
}

/// `D^k y(m)` for `k = 0..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceTable<S> {
    pub anchor: i64,
    pub values: Vec<S>,
}

impl<S: Scalar> DifferenceTable<S> {
    pub fn order(&self) -> usize {
        self.values.len() - 1
    }
}

/// Default truncation order of Newton series.
pub const DEFAULT_ORDER: usize = 8;

/// Difference table at `m`, each entry from the binomial sum
/// `D^k y(m) = sum_j (-1)^(k-j) C(k,j) y(m+j)`.
pub fn difference_table<S: Scalar>(
    y: &dyn SequenceOracle<S>,
    m: i64,
    order: usize,
) -> DifferenceTable<S> {
    let samples: Vec<S> = (0..=order as i64).map(|j| y.at(m + j)).collect();
    let values = (0..=order)
        .map(|k| {
            samples
                .iter()
                .take(k + 1)
                .enumerate()
                .fold(S::zero(), |acc, (j, v)| {
                    let w = S::binomial(k as i64, j as u32);
                    if (k - j) % 2 == 0 {
                        acc + w * v.clone()
                    } else {
                        acc - w * v.clone()
                    }
                })
        })
        .collect();
    DifferenceTable { anchor: m, values }
}

/// Same table built by repeated differencing of the sample window.
pub fn difference_table_recursive<S: Scalar>(
    y: &dyn SequenceOracle<S>,
    m: i64,
    order: usize,
) -> DifferenceTable<S> {
    let mut row: Vec<S> = (0..=order as i64).map(|j| y.at(m + j)).collect();
    let mut values = Vec::with_capacity(order + 1);
    for _ in 0..=order {
        values.push(row[0].clone());
        row = row
            .windows(2)
            .map(|w| w[1].clone() - w[0].clone())
            .collect();
    }
    DifferenceTable { anchor: m, values }
}

/// Truncated series `sum_{k<=K} D^k y(m) C(n - m, k)`.
pub fn newton_reconstruct<S: Scalar>(table: &DifferenceTable<S>, n: i64) -> S {
    table
        .values
        .iter()
        .enumerate()
        .fold(S::zero(), |acc, (k, d)| {
            acc + d.clone() * S::binomial(n - table.anchor, k as u32)
        })
}

/// `y(n, m+1) - y(n, m)` for the truncated local expansions. Vanishes
/// identically when the truncation is exact.
pub fn partial_delta_m<S: Scalar>(
    y: &dyn SequenceOracle<S>,
    m: i64,
    n: i64,
    order: usize,
) -> S {
    let next = difference_table(y, m + 1, order);
    let here = difference_table(y, m, order);
    newton_reconstruct(&next, n) - newton_reconstruct(&here, n)
}

/// Residuals `Y_k(m) - D^k Y_0(m)` for `k = 1..=r`, where `ladder[k-1]`
/// holds the coefficient tables `Y_k`. Entry `k-1` of the result compares
/// `ladder[k-1].values[0]` against entry `k` of the `Y_0` table.
pub fn renorm_consistency_ladder<S: Scalar>(
    y0: &DifferenceTable<S>,
    ladder: &[DifferenceTable<S>],
) -> Vec<S> {
    ladder
        .iter()
        .enumerate()
        .map(|(i, yk)| {
            debug_assert_eq!(yk.anchor, y0.anchor, "tables must share an anchor");
            let k = i + 1;
            let diff = y0.values.get(k).cloned().unwrap_or_else(S::zero);
            yk.values[0].clone() - diff
        })
        .collect()
}

/// Float-mode tolerance for the partial-difference identity.
pub fn envelope_tolerance(magnitude: f64) -> f64 {
    1e-9 * (1.0 + magnitude)
}
