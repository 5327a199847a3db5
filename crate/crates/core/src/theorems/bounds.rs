use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::numeric::{elementary, rat, rat_floor, Ball, Rat};
use crate::{Error, Result};

/// Degree threshold `⌈max{n1, (d/4)^(c/2)}⌉`, exact for rational `c`.
pub fn bound_theorem1(c: &Rat, n1: u64, d: u64) -> Result<BigInt> {
    if !c.is_positive() {
        return Err(Error::InvalidArgument("c must be positive".into()));
    }
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    let p = c.numer().to_u32().ok_or_else(|| Error::InvalidArgument("c numerator too large".into()))?;
    let q = c.denom().to_u32().ok_or_else(|| Error::InvalidArgument("c denominator too large".into()))?;
    // m >= (d/4)^(p/2q)  <=>  m^(2q) 4^p >= d^p
    let rhs = Pow::pow(BigInt::from(d), p);
    let four_p = Pow::pow(BigInt::from(4), p);
    let ok = |m: &BigInt| Pow::pow(m, 2 * q) * &four_p >= rhs;
    let guess = ((d as f64 / 4.0).ln() * c.to_f64().unwrap_or(1.0) / 2.0).exp();
    let mut m = if guess.is_finite() && guess < 1e15 {
        BigInt::from(guess.floor().max(1.0) as u64)
    } else {
        BigInt::one()
    };
    while !ok(&m) {
        m = if m.bits() > 60 { &m * 2u32 } else { m + 1u32 };
    }
    // the doubling above may overshoot; bisect back down
    let mut lo = BigInt::zero();
    let mut hi = m;
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
        if ok(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi.max(BigInt::from(n1)))
}

/// Ball route for [`bound_theorem1`]: an upper bound, which may exceed the
/// exact value by one when `(d/4)^(c/2)` is an integer.
pub fn bound_theorem1_ball(c: &Ball, n1: u64, d: u64, prec: u32) -> Result<BigInt> {
    if !c.is_positive() || d == 0 {
        return Err(Error::InvalidArgument("need c > 0 and d >= 1".into()));
    }
    let base = Ball::from_rat(&rat(d as i64, 4), prec);
    let x = elementary::exp(&(elementary::log(&base)? * c.mul_2exp(-1)))?;
    Ok(x.ceil_upper().max(BigInt::from(n1)))
}

fn require_half(t: &Rat) -> Result<()> {
    if *t < rat(1, 2) {
        return Err(Error::HypothesisViolation(format!("T = {t} is below 1/2")));
    }
    Ok(())
}

/// `(⌊1 + 4T^2⌋, ⌊T^2 (1 + T^-2/4)^2⌋)`, exact.
pub fn bound_theorem4(t: &Rat) -> Result<(BigInt, BigInt)> {
    require_half(t)?;
    let t2 = t * t;
    let a = rat_floor(&(Rat::one() + rat(4, 1) * &t2));
    let s = &t2 + rat(1, 4);
    let b = rat_floor(&(&s * &s / &t2));
    Ok((a, b))
}

/// Ball route for [`bound_theorem4`], rounded inward.
pub fn bound_theorem4_ball(t: &Ball) -> Result<(BigInt, BigInt)> {
    let prec = t.prec();
    if t.lower().to_rat() < rat(1, 2) {
        return Err(Error::HypothesisViolation("T is not certified to be at least 1/2".into()));
    }
    let t2 = t.sqr();
    let a = (&Ball::one(prec) + &t2.mul_2exp(2)).floor_lower();
    let inner = &Ball::one(prec) + &t2.inv()?.mul_2exp(-2);
    let b = (&t2 * &inner.sqr()).floor_lower();
    Ok((a, b))
}

/// Sector parameters attached to the strip `|Im z| < 1/2`, `|Re z| >= T`.
#[derive(Clone, Debug)]
pub struct StripConstants {
    /// `δ^2 = 1/(1+4T^2)`
    pub delta_sq: Rat,
    /// `δ̃ = 2δ sqrt(1-δ^2)`, which simplifies to `4T/(1+4T^2)`
    pub delta_tilde: Rat,
    pub delta: Ball,
    /// `δ̃` evaluated from the square-root form.
    pub delta_tilde_ball: Ball,
}

pub fn strip_constants(t: &Rat, prec: u32) -> Result<StripConstants> {
    require_half(t)?;
    let q = Rat::one() + rat(4, 1) * t * t;
    let delta_sq = Rat::one() / &q;
    let delta_tilde = rat(4, 1) * t / &q;
    let d2 = Ball::from_rat(&delta_sq, prec);
    let delta = d2.sqrt()?;
    let delta_tilde_ball = (&delta * &(&Ball::one(prec) - &d2).sqrt()?).mul_2exp(1);
    Ok(StripConstants { delta_sq, delta_tilde, delta, delta_tilde_ball })
}
