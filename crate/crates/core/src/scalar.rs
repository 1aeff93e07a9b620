//! Coefficient fields.
//!
//! Two scalar types back every series: exact Gaussian rationals, used
//! wherever a decision hinges on a coefficient vanishing (ranks, valuations,
//! jets of relations), and complex doubles for the numeric holonomy code.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `p/q + i r/s` with arbitrary-precision numerators and denominators.
pub type GaussianRational = Complex<BigRational>;

pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Whether arithmetic is free of rounding.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    fn from_rational(r: &BigRational) -> Self;

    /// `num/den`; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&BigRational::new(num.into(), den.into()))
    }

    fn from_parts(re: &BigRational, im: &BigRational) -> Self;

    /// Exact conversion from a double when one exists.
    fn from_c64(c: Complex64) -> Option<Self>;

    /// Multiplicative inverse, `None` at zero.
    fn inv(&self) -> Option<Self>;

    fn to_c64(&self) -> Complex64;

    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }

    /// `exp(self)` when representable in this field.
    fn try_exp(&self) -> Option<Self>;

    /// Principal `log(self)` when representable in this field.
    fn try_ln(&self) -> Option<Self>;

    /// Real and imaginary parts as rationals, for exact scalars.
    fn rational_parts(&self) -> Option<(BigRational, BigRational)>;
}

impl Scalar for GaussianRational {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        Complex::new(
            BigRational::from_integer(BigInt::from(n)),
            BigRational::zero(),
        )
    }

    fn from_rational(r: &BigRational) -> Self {
        Complex::new(r.clone(), BigRational::zero())
    }

    fn from_parts(re: &BigRational, im: &BigRational) -> Self {
        Complex::new(re.clone(), im.clone())
    }

    fn from_c64(c: Complex64) -> Option<Self> {
        Some(Complex::new(
            BigRational::from_float(c.re)?,
            BigRational::from_float(c.im)?,
        ))
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = &self.re * &self.re + &self.im * &self.im;
        Some(Complex::new(&self.re / &n, -(&self.im / &n)))
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    fn try_exp(&self) -> Option<Self> {
        self.is_zero().then(Self::one)
    }

    fn try_ln(&self) -> Option<Self> {
        self.is_one().then(Self::zero)
    }

    fn rational_parts(&self) -> Option<(BigRational, BigRational)> {
        Some((self.re.clone(), self.im.clone()))
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn from_rational(r: &BigRational) -> Self {
        Complex64::new(rational_to_f64(r), 0.0)
    }

    fn from_parts(re: &BigRational, im: &BigRational) -> Self {
        Complex64::new(rational_to_f64(re), rational_to_f64(im))
    }

    fn from_c64(c: Complex64) -> Option<Self> {
        Some(c)
    }

    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.finv())
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn try_exp(&self) -> Option<Self> {
        Some(self.exp())
    }

    fn try_ln(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.ln())
    }

    fn rational_parts(&self) -> Option<(BigRational, BigRational)> {
        None
    }
}

/// Nearest double to a big rational, robust to huge numerators and denominators.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Scale both sides down by their bit lengths before dividing.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift_n = (nb - 60).max(0) as usize;
    let shift_d = (db - 60).max(0) as usize;
    let n = (r.numer().abs() >> shift_n)
        .to_f64()
        .unwrap_or(f64::INFINITY);
    let d = (r.denom() >> shift_d).to_f64().unwrap_or(f64::INFINITY);
    let v = n / d * 2f64.powi((shift_n as i64 - shift_d as i64) as i32);
    if r.is_negative() {
        -v
    } else {
        v
    }
}

/// Builds an exact scalar from a small rational.
pub fn q(num: i64, den: i64) -> GaussianRational {
    GaussianRational::from_ratio(num, den)
}

/// Builds an exact Gaussian rational `re + i·im` from integers.
pub fn qi(re: i64, im: i64) -> GaussianRational {
    Complex::new(
        BigRational::from_integer(re.into()),
        BigRational::from_integer(im.into()),
    )
}
