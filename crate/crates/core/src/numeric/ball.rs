use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;

use super::dyadic::{Dyadic, Round};
use super::mag::Mag;
use super::{NumericError, Rat, MIN_PREC};

/// Midpoint-radius real ball `[mid - rad, mid + rad]`.
///
/// Every operation returns a ball containing the exact image of its operand
/// sets. `prec` is the target mantissa size for rounded midpoints; binary
/// operations work at the larger of the two operand precisions.
#[derive(Clone, PartialEq, Eq)]
pub struct Ball {
    mid: Dyadic,
    rad: Mag,
    prec: u32,
}

/// Certified sign of a ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum BallSign {
    Negative,
    ZeroStraddling,
    Positive,
}

impl Ball {
    pub fn new(mid: Dyadic, rad: Mag, prec: u32) -> Ball {
        let prec = prec.max(MIN_PREC);
        let (m, inexact) = mid.round(prec, Round::Nearest);
        let rad = if inexact { rad.add(&ulp_of(&m, prec)) } else { rad };
        Ball { mid: m, rad, prec }
    }

    /// Ball that keeps `mid` exactly, however many bits it has.
    pub fn exact(mid: Dyadic, prec: u32) -> Ball {
        Ball { mid, rad: Mag::ZERO, prec: prec.max(MIN_PREC) }
    }

    pub fn zero(prec: u32) -> Ball {
        Ball::exact(Dyadic::zero(), prec)
    }

    pub fn one(prec: u32) -> Ball {
        Ball::exact(Dyadic::one(), prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Ball {
        Ball::new(Dyadic::from_i64(v), Mag::ZERO, prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Ball {
        Ball::new(Dyadic::from_bigint(v.clone()), Mag::ZERO, prec)
    }

    pub fn from_rat(r: &Rat, prec: u32) -> Ball {
        let prec = prec.max(MIN_PREC);
        let (m, inexact) = Dyadic::from_rat(r, prec, Round::Nearest);
        let rad = if inexact { ulp_of(&m, prec) } else { Mag::ZERO };
        Ball { mid: m, rad, prec }
    }

    /// Exact value of an `f64`, then rounded to `prec`.
    pub fn from_f64(v: f64, prec: u32) -> Result<Ball, NumericError> {
        let d = Dyadic::from_f64(v).ok_or(NumericError::PrecisionExhausted("non-finite f64"))?;
        Ok(Ball::new(d, Mag::ZERO, prec))
    }

    /// Parses a decimal literal exactly, then rounds to `prec`.
    pub fn parse(s: &str, prec: u32) -> Option<Ball> {
        Dyadic::parse_rat(s).map(|r| Ball::from_rat(&r, prec))
    }

    pub fn with_rad(mid: Dyadic, rad: Mag, prec: u32) -> Ball {
        Ball::new(mid, rad, prec)
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> Mag {
        self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn mid_ball(&self) -> Ball {
        Ball::exact(self.mid.clone(), self.prec)
    }

    pub fn set_prec(&self, prec: u32) -> Ball {
        Ball::new(self.mid.clone(), self.rad, prec)
    }

    pub fn add_error(&self, err: Mag) -> Ball {
        Ball { mid: self.mid.clone(), rad: self.rad.add(&err), prec: self.prec }
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.rad.is_zero() && self.mid.is_zero()
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad.to_dyadic())
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad.to_dyadic())
    }

    pub fn sign(&self) -> BallSign {
        if self.lower().is_positive() {
            BallSign::Positive
        } else if self.upper().is_negative() {
            BallSign::Negative
        } else {
            BallSign::ZeroStraddling
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.sign() == BallSign::ZeroStraddling
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == BallSign::Positive
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == BallSign::Negative
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        x.sub(&self.mid).abs() <= self.rad.to_dyadic()
    }

    pub fn contains_rat(&self, x: &Rat) -> bool {
        let d = x - self.mid.to_rat();
        let d = if d < Rat::zero() { -d } else { d };
        d <= self.rad.to_dyadic().to_rat()
    }

    /// `self ⊇ other`.
    pub fn contains_ball(&self, other: &Ball) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// Intersection of the two enclosures; `None` when disjoint.
    pub fn intersect(&self, other: &Ball) -> Option<Ball> {
        let lo = self.lower().max(other.lower());
        let hi = self.upper().min(other.upper());
        if lo > hi {
            return None;
        }
        Some(Ball::from_endpoints(&lo, &hi, self.prec.max(other.prec)))
    }

    pub fn union(&self, other: &Ball) -> Ball {
        let lo = self.lower().min(other.lower());
        let hi = self.upper().max(other.upper());
        Ball::from_endpoints(&lo, &hi, self.prec.max(other.prec))
    }

    /// Smallest convenient ball containing `[lo, hi]`.
    pub fn from_endpoints(lo: &Dyadic, hi: &Dyadic, prec: u32) -> Ball {
        let mid = lo.add(hi).mul_2exp(-1);
        let half = hi.sub(lo).mul_2exp(-1);
        Ball::new(mid, Mag::from_dyadic_upper(&half), prec)
    }

    /// Upper bound of `|x|` over the ball.
    pub fn mag_upper(&self) -> Mag {
        Mag::from_dyadic_upper(&self.mid).add(&self.rad)
    }

    /// Lower bound of `|x|` over the ball (zero when straddling).
    pub fn mag_lower(&self) -> Mag {
        let m = self.mid.abs().sub(&self.rad.to_dyadic());
        if m.is_positive() {
            Mag::from_dyadic_lower(&m)
        } else {
            Mag::ZERO
        }
    }

    pub fn abs(&self) -> Ball {
        match self.sign() {
            BallSign::Positive => self.clone(),
            BallSign::Negative => -self,
            BallSign::ZeroStraddling => {
                let hi = self.mid.abs().add(&self.rad.to_dyadic());
                Ball::from_endpoints(&Dyadic::zero(), &hi, self.prec)
            }
        }
    }

    pub fn mul_2exp(&self, k: i64) -> Ball {
        Ball { mid: self.mid.mul_2exp(k), rad: self.rad.mul_2exp(k), prec: self.prec }
    }

    pub fn sqr(&self) -> Ball {
        let a = self.abs();
        a.mul_ref(&a)
    }

    fn add_ref(&self, o: &Ball) -> Ball {
        let prec = self.prec.max(o.prec);
        let (m, inexact) = self.mid.add(&o.mid).round(prec, Round::Nearest);
        let mut rad = self.rad.add(&o.rad);
        if inexact {
            rad = rad.add(&ulp_of(&m, prec));
        }
        Ball { mid: m, rad, prec }
    }

    fn mul_ref(&self, o: &Ball) -> Ball {
        let prec = self.prec.max(o.prec);
        let (m, inexact) = self.mid.mul(&o.mid).round(prec, Round::Nearest);
        let am = Mag::from_dyadic_upper(&self.mid);
        let bm = Mag::from_dyadic_upper(&o.mid);
        let mut rad = am.mul(&o.rad).add(&bm.mul(&self.rad)).add(&self.rad.mul(&o.rad));
        if inexact {
            rad = rad.add(&ulp_of(&m, prec));
        }
        Ball { mid: m, rad, prec }
    }

    pub fn mul_i64(&self, k: i64) -> Ball {
        self.mul_ref(&Ball::exact(Dyadic::from_i64(k), self.prec))
    }

    pub fn div_i64(&self, k: i64) -> Ball {
        self.try_div(&Ball::exact(Dyadic::from_i64(k), self.prec)).expect("nonzero integer divisor")
    }

    pub fn inv(&self) -> Result<Ball, NumericError> {
        Ball::one(self.prec).try_div(self)
    }

    /// `self / o`; fails when `o` contains zero.
    pub fn try_div(&self, o: &Ball) -> Result<Ball, NumericError> {
        if o.contains_zero() {
            return Err(NumericError::Domain("division by a ball containing zero"));
        }
        let prec = self.prec.max(o.prec);
        let (q, inexact) = self.mid.div_trunc(&o.mid, prec);
        let (m, rounded) = q.round(prec, Round::Nearest);
        let mut rad = Mag::ZERO;
        if !o.rad.is_zero() || !self.rad.is_zero() {
            // |x/y - a/b| <= (|a| r_b + |b| r_a) / (|b| (|b| - r_b))
            let am = Mag::from_dyadic_upper(&self.mid);
            let bm = Mag::from_dyadic_upper(&o.mid);
            let num = am.mul(&o.rad).add(&bm.mul(&self.rad));
            let b_lo = Mag::from_dyadic_lower(&o.mid);
            let gap = Mag::from_dyadic_lower(&o.mid.abs().sub(&o.rad.to_dyadic()));
            if gap.is_zero() || b_lo.is_zero() {
                return Err(NumericError::Domain("division by a ball containing zero"));
            }
            rad = num.div(&b_lo.mul(&gap));
        }
        if inexact {
            rad = rad.add(&ulp_of(&q, prec + 2));
        }
        if rounded || inexact {
            rad = rad.add(&ulp_of(&m, prec));
        }
        Ok(Ball { mid: m, rad, prec })
    }

    pub fn sqrt(&self) -> Result<Ball, NumericError> {
        if !self.is_positive() {
            if self.is_exact_zero() {
                return Ok(self.clone());
            }
            return Err(NumericError::Domain("sqrt of a ball that is not positive"));
        }
        let prec = self.prec;
        let (s, inexact) = self.mid.sqrt_floor(prec);
        let (m, rounded) = s.round(prec, Round::Nearest);
        let mut rad = Mag::ZERO;
        if !self.rad.is_zero() {
            // |sqrt(y) - sqrt(x)| <= r / sqrt(x - r)
            let lo = Mag::from_dyadic_lower(&self.lower());
            rad = self.rad.div(&lo.sqrt_lower());
        }
        if inexact {
            rad = rad.add(&ulp_of(&s, prec + 2));
        }
        if rounded {
            rad = rad.add(&ulp_of(&m, prec));
        }
        Ok(Ball { mid: m, rad, prec })
    }

    /// Integer power by repeated squaring.
    pub fn pow_u64(&self, mut n: u64) -> Ball {
        let mut base = self.clone();
        let mut acc = Ball::one(self.prec);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    pub fn floor_lower(&self) -> BigInt {
        self.lower().floor()
    }

    pub fn ceil_upper(&self) -> BigInt {
        self.upper().ceil()
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// `(mid, rad)` decimal strings; the midpoint carries enough digits to
    /// round-trip at `prec`, the radius is rounded upward.
    pub fn to_decimal_pair(&self) -> (String, String) {
        let digits = (self.prec as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
        let mid = self.mid.to_decimal(digits);
        let rad = super::dyadic::decimal_string(&self.rad.to_dyadic().to_rat(), 6, Round::Up);
        (mid, rad)
    }
}

/// One unit in the last place of `m` at `prec` bits (a safe upper bound).
pub(crate) fn ulp_of(m: &Dyadic, prec: u32) -> Mag {
    if m.is_zero() {
        return Mag::ZERO;
    }
    Mag::pow2(m.top() - prec as i64)
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} +/- {:?}]", self.mid.to_decimal(25), self.rad)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        write!(f, "[{} +/- {:.3e}]", self.mid.to_decimal(digits), self.rad.to_f64())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&Ball> for &Ball {
            type Output = Ball;
            fn $method(self, rhs: &Ball) -> Ball {
                let f: fn(&Ball, &Ball) -> Ball = $body;
                f(self, rhs)
            }
        }
        impl $tr<Ball> for Ball {
            type Output = Ball;
            fn $method(self, rhs: Ball) -> Ball {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Ball> for Ball {
            type Output = Ball;
            fn $method(self, rhs: &Ball) -> Ball {
                (&self).$method(rhs)
            }
        }
        impl $tr<Ball> for &Ball {
            type Output = Ball;
            fn $method(self, rhs: Ball) -> Ball {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_ref(b));
forward_binop!(Sub, sub, |a, b| a.add_ref(&-b));
forward_binop!(Mul, mul, |a, b| a.mul_ref(b));

impl Neg for &Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball { mid: self.mid.neg(), rad: self.rad, prec: self.prec }
    }
}

impl Neg for Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str) -> Ball {
        Ball::parse(s, 128).unwrap()
    }

    fn br(mid: f64, rad: f64) -> Ball {
        Ball::new(Dyadic::from_f64(mid).unwrap(), Mag::from_f64_upper(rad), 128)
    }

    #[test]
    fn exact_integer_arithmetic() {
        let s = b("1") + b("2");
        assert!(s.is_exact());
        assert_eq!(s.mid(), &Dyadic::from_i64(3));
        assert_eq!((b("6") * b("7")).mid(), &Dyadic::from_i64(42));
    }

    #[test]
    fn interval_product_contains_range() {
        let x = br(1.0, 0.1);
        let p = &x * &x;
        for v in [0.81, 1.0, 1.21] {
            assert!(p.contains_rat(&Dyadic::parse_rat(&v.to_string()).unwrap()), "{v} not in {p:?}");
        }
    }

    #[test]
    fn sqrt_of_exact_square() {
        let r = b("4").sqrt().unwrap();
        assert!(r.contains(&Dyadic::from_i64(2)));
        assert!(r.rad() <= Mag::pow2(2 - 128));
        assert!(b("-1").sqrt().is_err());
    }

    #[test]
    fn signs() {
        assert_eq!(br(3.0, 1.0).sign(), BallSign::Positive);
        assert_eq!(br(0.0, 1.0).sign(), BallSign::ZeroStraddling);
        assert_eq!(br(-2.0, 0.5).sign(), BallSign::Negative);
    }

    #[test]
    fn division_contains_quotient() {
        let q = b("1").try_div(&b("3")).unwrap();
        assert!(q.contains_rat(&Rat::new(1.into(), 3.into())));
        assert!(b("1").try_div(&br(0.0, 0.5)).is_err());
        let q = br(2.0, 0.1).try_div(&br(4.0, 0.1)).unwrap();
        assert!(q.contains_rat(&Rat::new(21.into(), 39.into())));
        assert!(q.contains_rat(&Rat::new(19.into(), 41.into())));
    }

    #[test]
    fn intersect_and_union() {
        let a = br(1.0, 0.5);
        let c = br(2.0, 0.75);
        let i = a.intersect(&c).unwrap();
        assert!(i.contains_rat(&Rat::new(5.into(), 4.into())));
        assert!(a.intersect(&br(5.0, 0.1)).is_none());
        assert!(a.union(&c).contains_ball(&a));
    }

    #[test]
    fn powers() {
        let x = b("1.5").pow_u64(5);
        assert!(x.contains_rat(&Dyadic::parse_rat("7.59375").unwrap()));
    }
}
