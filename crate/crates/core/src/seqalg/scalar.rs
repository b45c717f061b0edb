//! Scalar field used for coefficients and bases.
//!
//! Two instantiations exist: [`Exact`], complex numbers with arbitrary
//! precision rational parts, and [`Complex64`]. Exact scalars compare with
//! zero tolerance; float scalars use the absolute tolerances below.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Complex rational scalar.
pub type Exact = Complex<BigRational>;

/// Absolute tolerance for treating a float coefficient as zero.
pub const FLOAT_ZERO_TOL: f64 = 1e-12;

/// Two float bases closer than this are the same mode.
pub const BASE_MATCH_TOL: f64 = 1e-9;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn imag_unit() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_bigint(v: &BigInt) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    /// Embeds a float. Exact scalars take the binary value of `v` exactly.
    fn from_f64(v: f64) -> Self;
    fn from_c64(v: Complex64) -> Self;
    fn to_c64(&self) -> Complex64;
    fn conj(&self) -> Self;

    /// Zero test: exact for exact scalars, `|x| <= FLOAT_ZERO_TOL` for floats.
    fn vanishes(&self) -> bool;

    /// Whether two bases denote the same exponential mode.
    fn same_base(&self, other: &Self) -> bool;

    /// Total order on (real part, imaginary part).
    fn total_cmp(&self, other: &Self) -> Ordering;

    /// Principal square root; `None` when it leaves the scalar field.
    fn sqrt(&self) -> Option<Self>;

    /// `|x|` as a float.
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }

    /// Closeness with an absolute tolerance; exact scalars ignore `tol`.
    fn near(&self, other: &Self, tol: f64) -> bool {
        if Self::EXACT {
            self == other
        } else {
            (self.to_c64() - other.to_c64()).norm() <= tol
        }
    }

    /// `C(x, k)` for any integer `x` (falling factorial over `k!`).
    fn binomial(x: i64, k: u32) -> Self {
        Self::from_bigint(&binomial_bigint(x, k))
    }

    /// Integer power; negative exponents invert. Panics on `0^-k`.
    fn ipow(&self, exp: i64) -> Self {
        let mut base = if exp < 0 {
            assert!(!self.vanishes(), "negative power of zero");
            Self::one() / self.clone()
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

/// Generalized binomial coefficient `x (x-1) ... (x-k+1) / k!`, valid for
/// negative `x`.
pub fn binomial_bigint(x: i64, k: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k as i64 {
        num *= BigInt::from(x - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

fn cmp_rational(a: &BigRational, b: &BigRational) -> Ordering {
    a.cmp(b)
}

impl Scalar for Exact {
    const EXACT: bool = true;

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }
    fn imag_unit() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }
    fn from_i64(v: i64) -> Self {
        Complex::new(BigRational::from_integer(v.into()), BigRational::zero())
    }
    fn from_bigint(v: &BigInt) -> Self {
        Complex::new(BigRational::from_integer(v.clone()), BigRational::zero())
    }
    fn from_rational(q: &BigRational) -> Self {
        Complex::new(q.clone(), BigRational::zero())
    }
    fn from_f64(v: f64) -> Self {
        let q = BigRational::from_float(v).expect("finite float");
        Complex::new(q, BigRational::zero())
    }
    fn from_c64(v: Complex64) -> Self {
        Complex::new(
            BigRational::from_float(v.re).expect("finite float"),
            BigRational::from_float(v.im).expect("finite float"),
        )
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn vanishes(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn same_base(&self, other: &Self) -> bool {
        self == other
    }
    fn sqrt(&self) -> Option<Self> {
        exact_sqrt(self)
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        cmp_rational(&self.re, &other.re).then_with(|| cmp_rational(&self.im, &other.im))
    }
    fn magnitude(&self) -> f64 {
        let n2 = &self.re * &self.re + &self.im * &self.im;
        n2.to_f64().unwrap_or(f64::INFINITY).sqrt()
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_bigint(v: &BigInt) -> Self {
        Complex64::new(v.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn from_rational(q: &BigRational) -> Self {
        Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn from_f64(v: f64) -> Self {
        Complex64::new(v, 0.0)
    }
    fn from_c64(v: Complex64) -> Self {
        v
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn vanishes(&self) -> bool {
        self.norm() <= FLOAT_ZERO_TOL
    }
    fn same_base(&self, other: &Self) -> bool {
        (self - other).norm() <= BASE_MATCH_TOL
    }
    fn sqrt(&self) -> Option<Self> {
        Some(Complex::sqrt(*self))
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.re
            .total_cmp(&other.re)
            .then_with(|| self.im.total_cmp(&other.im))
    }
    fn binomial(x: i64, k: u32) -> Self {
        let mut acc = 1.0_f64;
        for i in 0..k as i64 {
            acc *= (x - i) as f64 / (i + 1) as f64;
        }
        Complex64::new(acc, 0.0)
    }
}

/// Exact rational `num/den` as a real exact scalar.
pub fn ratio(num: i64, den: i64) -> Exact {
    Complex::new(
        BigRational::new(num.into(), den.into()),
        BigRational::zero(),
    )
}

/// Exact complex rational `re + i im` from integer parts.
pub fn gaussian(re: i64, im: i64) -> Exact {
    Complex::new(
        BigRational::from_integer(re.into()),
        BigRational::from_integer(im.into()),
    )
}

/// Exact square root in `Q(i)`, when one exists.
pub fn exact_sqrt(z: &Exact) -> Option<Exact> {
    if z.vanishes() {
        return Some(<Exact as Scalar>::zero());
    }
    let two = BigRational::from_integer(2.into());
    let norm2 = &z.re * &z.re + &z.im * &z.im;
    let norm = rational_sqrt(&norm2)?;
    // sqrt(a + bi) = x + iy, x^2 = (|z| + a)/2, y^2 = (|z| - a)/2, sign(y) = sign(b)
    let x2 = (&norm + &z.re) / &two;
    let y2 = (&norm - &z.re) / &two;
    let x = rational_sqrt(&x2)?;
    let mut y = rational_sqrt(&y2)?;
    if z.im.is_negative() {
        y = -y;
    }
    let root = Complex::new(x, y);
    debug_assert!(&root * &root == *z);
    Some(root)
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}
