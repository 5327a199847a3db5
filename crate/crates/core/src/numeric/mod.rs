//! Exact rationals and certified midpoint-radius ball arithmetic.
//!
//! [`Rat`] is exact. [`Ball`] and [`CBall`] carry a certified error radius:
//! every operation returns an enclosure of the exact image of its inputs.
//! Midpoints are [`Dyadic`] numbers backed by `num-bigint`; radii are short
//! upward-rounded [`Mag`] values.

mod ball;
mod cball;
mod dyadic;
pub mod elementary;
mod mag;

pub use ball::{Ball, BallSign};
pub use cball::CBall;
pub use dyadic::{Dyadic, Round};
pub use mag::Mag;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;

pub const DEFAULT_PREC: u32 = 256;
pub const MIN_PREC: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumericError {
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(&'static str),
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Coefficient field shared by exact and ball polynomials.
///
/// `prec` is ignored by [`Rat`]; balls use it when materializing constants.
pub trait Scalar: Clone + std::fmt::Debug + Send + Sync + 'static {
    fn from_rat(r: &Rat, prec: u32) -> Self;
    fn precision(&self) -> u32;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn try_div(&self, o: &Self) -> Result<Self, NumericError>;
    /// Exactly zero (for balls: zero midpoint and zero radius).
    fn is_exact_zero(&self) -> bool;
    /// Possibly zero (for balls: the enclosure contains zero).
    fn may_be_zero(&self) -> bool;

    fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_rat(&rat_int(v), prec)
    }

    fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Self::from_rat(&Rat::from_integer(v.clone()), prec)
    }

    fn zero_at(prec: u32) -> Self {
        Self::from_i64(0, prec)
    }

    fn mul_bigint(&self, k: &BigInt) -> Self {
        self.mul(&Self::from_bigint(k, self.precision()))
    }

    fn to_cball(&self, prec: u32) -> CBall;
}

/// Real coefficient types: signs are decidable (or certifiably undecided).
pub trait RealScalar: Scalar {
    fn to_ball(&self, prec: u32) -> Ball;
    fn sign(&self) -> BallSign;
}

impl RealScalar for Rat {
    fn to_ball(&self, prec: u32) -> Ball {
        Ball::from_rat(self, prec)
    }
    fn sign(&self) -> BallSign {
        if self.is_positive() {
            BallSign::Positive
        } else if self.is_negative() {
            BallSign::Negative
        } else {
            BallSign::ZeroStraddling
        }
    }
}

impl RealScalar for Ball {
    fn to_ball(&self, prec: u32) -> Ball {
        if prec > self.prec() { self.set_prec(prec) } else { self.clone() }
    }
    fn sign(&self) -> BallSign {
        Ball::sign(self)
    }
}

impl Scalar for Rat {
    fn from_rat(r: &Rat, _prec: u32) -> Self {
        r.clone()
    }
    fn precision(&self) -> u32 {
        0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn try_div(&self, o: &Self) -> Result<Self, NumericError> {
        if o.is_zero() {
            Err(NumericError::Domain("rational division by zero"))
        } else {
            Ok(self / o)
        }
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn may_be_zero(&self) -> bool {
        self.is_zero()
    }
    fn to_cball(&self, prec: u32) -> CBall {
        CBall::from_real(Ball::from_rat(self, prec))
    }
}

impl Scalar for Ball {
    fn from_rat(r: &Rat, prec: u32) -> Self {
        Ball::from_rat(r, prec)
    }
    fn precision(&self) -> u32 {
        self.prec()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn try_div(&self, o: &Self) -> Result<Self, NumericError> {
        Ball::try_div(self, o)
    }
    fn is_exact_zero(&self) -> bool {
        Ball::is_exact_zero(self)
    }
    fn may_be_zero(&self) -> bool {
        self.contains_zero()
    }
    fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Ball::from_bigint(v, prec)
    }
    fn to_cball(&self, _prec: u32) -> CBall {
        CBall::from_real(self.clone())
    }
}

impl Scalar for CBall {
    fn from_rat(r: &Rat, prec: u32) -> Self {
        CBall::from_real(Ball::from_rat(r, prec))
    }
    fn precision(&self) -> u32 {
        self.prec()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn try_div(&self, o: &Self) -> Result<Self, NumericError> {
        CBall::try_div(self, o)
    }
    fn is_exact_zero(&self) -> bool {
        self.re.is_exact_zero() && self.im.is_exact_zero()
    }
    fn may_be_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }
    fn to_cball(&self, _prec: u32) -> CBall {
        self.clone()
    }
}

/// Scalars with an exponential, needed by power-series arithmetic.
pub trait Analytic: Scalar {
    fn exp(&self) -> Result<Self, NumericError>;
    fn scale(&self, k: &Ball) -> Self;
}

impl Analytic for Ball {
    fn exp(&self) -> Result<Self, NumericError> {
        elementary::exp(self)
    }
    fn scale(&self, k: &Ball) -> Self {
        self * k
    }
}

impl Analytic for CBall {
    fn exp(&self) -> Result<Self, NumericError> {
        CBall::exp(self)
    }
    fn scale(&self, k: &Ball) -> Self {
        self.mul_real(k)
    }
}

/// `n!` as an exact integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Binomial coefficient `C(n, k)` as an exact integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Floor of a rational as an integer.
pub fn rat_floor(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

/// Ceiling of a rational as an integer.
pub fn rat_ceil(r: &Rat) -> BigInt {
    r.ceil().to_integer()
}

pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}
