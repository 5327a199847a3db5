//! Γ, log Γ and ψ by upward shift and the Stirling series.

use super::bernoulli::bernoulli;
use crate::numeric::{elementary, Ball, CBall, Mag};
use crate::{Error, Result};

/// Target real part after shifting, so the Stirling series reaches `2^-wp`.
fn shift_target(wp: u32) -> i64 {
    (wp as i64 / 4).max(10)
}

fn shift_count(re_lower: f64, wp: u32) -> usize {
    let t = shift_target(wp) as f64 - re_lower;
    if t > 0.0 {
        t.ceil() as usize
    } else {
        0
    }
}

/// Bound on the Stirling remainder after `k - 1` correction terms:
/// `|B_2k| / (2k (2k-1) |w|^(2k-1)) * sec(arg(w)/2)^(2k)`, where
/// `sec^2(arg(w)/2) <= sec2`.
fn stirling_remainder(k: usize, abs_lower: &Ball, sec2: &Ball) -> Mag {
    let p = 64;
    let b = Ball::from_rat(&bernoulli(2 * k), p).abs();
    let den = Ball::from_i64((2 * k * (2 * k - 1)) as i64, p) * abs_lower.set_prec(p).pow_u64(2 * k as u64 - 1);
    (b * sec2.set_prec(p).pow_u64(k as u64)).try_div(&den).map(|v| v.mag_upper()).unwrap_or(Mag::pow2(1 << 20))
}

fn half_log_2pi(wp: u32) -> Ball {
    elementary::log(&elementary::pi(wp).mul_2exp(1)).unwrap().mul_2exp(-1)
}

/// `log Γ(w)` for `Re w >= shift_target(wp)` (any branch-consistent value;
/// only its exponential is used).
fn stirling_complex(w: &CBall, wp: u32) -> Result<CBall> {
    let abs = w.abs();
    let abs_lo = Ball::exact(abs.mag_lower().to_dyadic(), 64);
    let abs_hi = Ball::exact(abs.mag_upper().to_dyadic(), 64);
    let re_lo = Ball::exact(w.re.lower(), 64);
    // sec^2(θ/2) = 2|w| / (|w| + Re w)
    let sec2 = (abs_hi.mul_2exp(1)).try_div(&(&abs_hi + &re_lo))?;
    let lw = w.log()?;
    let half = CBall::from_real(Ball::one(wp).mul_2exp(-1));
    let mut acc = &(&(w - &half) * &lw) - w;
    acc.re = &acc.re + &half_log_2pi(wp);
    let winv = w.inv()?;
    let winv2 = winv.sqr();
    let mut pw = winv.clone();
    let target = Mag::pow2(-(wp as i64) - 4);
    for k in 1..(4 * wp as usize) {
        let rem = stirling_remainder(k, &abs_lo, &sec2);
        if rem <= target {
            acc.re = acc.re.add_error(rem);
            acc.im = acc.im.add_error(rem);
            return Ok(acc);
        }
        let c = Ball::from_rat(&bernoulli(2 * k), wp).div_i64((2 * k * (2 * k - 1)) as i64);
        acc = &acc + &pw.mul_real(&c);
        pw = &pw * &winv2;
    }
    Err(Error::Numeric(crate::numeric::NumericError::PrecisionExhausted("Stirling series")))
}

/// Γ(z) on a complex ball.
pub fn gamma_ball(z: &CBall, prec: u32) -> Result<CBall> {
    let wp = prec + 32;
    let z = z.set_prec(wp);
    let n = shift_count(z.re.lower().to_f64(), wp);
    let mut prod = CBall::one(wp);
    for i in 0..n {
        let t = &z + &CBall::from_real(Ball::from_i64(i as i64, wp));
        if t.contains_zero() {
            return Err(Error::Pole("Γ at a non-positive integer"));
        }
        prod = &prod * &t;
    }
    if n == 0 && z.contains_zero() {
        return Err(Error::Pole("Γ at a non-positive integer"));
    }
    let w = &z + &CBall::from_real(Ball::from_i64(n as i64, wp));
    let lg = stirling_complex(&w, wp)?;
    Ok(lg.exp()?.try_div(&prod)?.set_prec(prec))
}

/// `log Γ(x)` for real `x > 0`.
pub fn lngamma_real(x: &Ball, prec: u32) -> Result<Ball> {
    if !x.is_positive() {
        return Err(Error::Pole("log Γ needs a positive argument"));
    }
    let wp = prec + 32;
    let x = x.set_prec(wp);
    let n = shift_count(x.lower().to_f64(), wp);
    let mut prod = Ball::one(wp);
    for i in 0..n {
        prod = &prod * &(&x + &Ball::from_i64(i as i64, wp));
    }
    let w = &x + &Ball::from_i64(n as i64, wp);
    let lg = stirling_complex(&CBall::from_real(w), wp)?.re;
    Ok((lg - elementary::log(&prod)?).set_prec(prec))
}

/// Digamma `ψ(x) = Γ'(x)/Γ(x)` for real `x > 0`.
pub fn digamma_real(x: &Ball, prec: u32) -> Result<Ball> {
    if !x.is_positive() {
        return Err(Error::Pole("ψ needs a positive argument"));
    }
    let wp = prec + 32;
    let x = x.set_prec(wp);
    let n = shift_count(x.lower().to_f64(), wp);
    let mut shift = Ball::zero(wp);
    for i in 0..n {
        shift = &shift + &(&x + &Ball::from_i64(i as i64, wp)).inv()?;
    }
    let y = &x + &Ball::from_i64(n as i64, wp);
    let y_lo = Ball::exact(y.lower(), 64);
    let yinv = y.inv()?;
    let yinv2 = yinv.sqr();
    let mut acc = &elementary::log(&y)? - &yinv.mul_2exp(-1);
    let mut pw = yinv2.clone();
    let target = Mag::pow2(-(wp as i64) - 4);
    for k in 1..(4 * wp as usize) {
        // alternating-sign asymptotic series: the error is below the first omitted term
        let b = Ball::from_rat(&bernoulli(2 * k), 64).abs();
        let rem = b.try_div(&(Ball::from_i64(2 * k as i64, 64) * y_lo.pow_u64(2 * k as u64)))?.mag_upper();
        if rem <= target {
            return Ok((acc.add_error(rem) - shift).set_prec(prec));
        }
        let c = Ball::from_rat(&bernoulli(2 * k), wp).div_i64(2 * k as i64);
        acc = &acc - &(&pw * &c);
        pw = &pw * &yinv2;
    }
    Err(Error::Numeric(crate::numeric::NumericError::PrecisionExhausted("digamma series")))
}
