//! Stirling tables for converting between the binomial basis `C(x, k)` and
//! the monomial basis `x^p`.
//!
//! `C(x, k) = (1/k!) sum_p s(k, p) x^p` with signed Stirling numbers of the
//! first kind, and `x^p = sum_k S(p, k) k! C(x, k)` with Stirling numbers of
//! the second kind.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Largest degree covered by the precomputed tables.
pub const MAX_DEGREE: usize = 64;

struct Tables {
    first: Vec<Vec<BigInt>>,
    second: Vec<Vec<BigInt>>,
    factorial: Vec<BigInt>,
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let n = MAX_DEGREE + 1;
        let mut first = vec![vec![BigInt::zero(); n]; n];
        let mut second = vec![vec![BigInt::zero(); n]; n];
        first[0][0] = BigInt::one();
        second[0][0] = BigInt::one();
        for i in 1..n {
            for k in 1..=i {
                // s(i, k) = s(i-1, k-1) - (i-1) s(i-1, k)
                first[i][k] = &first[i - 1][k - 1] - BigInt::from(i - 1) * &first[i - 1][k];
                // S(i, k) = S(i-1, k-1) + k S(i-1, k)
                second[i][k] = &second[i - 1][k - 1] + BigInt::from(k) * &second[i - 1][k];
            }
        }
        let mut factorial = vec![BigInt::one(); n];
        for i in 1..n {
            factorial[i] = &factorial[i - 1] * BigInt::from(i);
        }
        Tables {
            first,
            second,
            factorial,
        }
    })
}

/// Signed Stirling number of the first kind `s(n, k)`.
pub fn stirling_first(n: usize, k: usize) -> BigInt {
    assert!(n <= MAX_DEGREE && k <= MAX_DEGREE, "degree above table");
    tables().first[n][k].clone()
}

/// Stirling number of the second kind `S(n, k)`.
pub fn stirling_second(n: usize, k: usize) -> BigInt {
    assert!(n <= MAX_DEGREE && k <= MAX_DEGREE, "degree above table");
    tables().second[n][k].clone()
}

/// Monomial coefficients of `C(x, k)`: entry `p` multiplies `x^p`.
pub fn binomial_to_monomial(k: usize) -> Vec<BigRational> {
    let t = tables();
    let kf = &t.factorial[k];
    (0..=k)
        .map(|p| BigRational::new(t.first[k][p].clone(), kf.clone()))
        .collect()
}

/// Binomial coefficients of a polynomial given in the monomial basis.
pub fn monomial_to_binomial(poly: &[BigRational]) -> Vec<BigRational> {
    let t = tables();
    let mut out = vec![BigRational::zero(); poly.len()];
    for (p, c) in poly.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (k, slot) in out.iter_mut().enumerate().take(p + 1) {
            let w = &t.second[p][k] * &t.factorial[k];
            if !w.is_zero() {
                *slot += c * BigRational::from_integer(w);
            }
        }
    }
    out
}

/// `C(x, a) * C(x, b)` in the binomial basis; entry `k` multiplies `C(x, k)`.
pub fn binomial_product(a: usize, b: usize) -> Vec<BigRational> {
    assert!(a + b <= MAX_DEGREE, "product degree above table");
    let pa = binomial_to_monomial(a);
    let pb = binomial_to_monomial(b);
    let mut prod = vec![BigRational::zero(); a + b + 1];
    for (i, x) in pa.iter().enumerate() {
        for (j, y) in pb.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    monomial_to_binomial(&prod)
}
