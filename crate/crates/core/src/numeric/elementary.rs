//! Elementary functions on balls.
//!
//! Each function evaluates at the exact midpoint using ball arithmetic at a
//! raised working precision (so rounding is tracked automatically), adds an
//! explicit bound for the truncated series, and finally widens by a
//! Lipschitz bound for the input radius.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{factorial, Ball, Dyadic, Mag, NumericError};

static PI_CACHE: Mutex<Option<Ball>> = Mutex::new(None);
static LN2_CACHE: Mutex<Option<Ball>> = Mutex::new(None);

fn cached(cache: &Mutex<Option<Ball>>, prec: u32, compute: fn(u32) -> Ball) -> Ball {
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(b) = guard.as_ref() {
        if b.prec() >= prec + 16 {
            return b.set_prec(prec);
        }
    }
    let b = compute(prec + 64);
    *guard = Some(b.clone());
    b.set_prec(prec)
}

/// π.
pub fn pi(prec: u32) -> Ball {
    cached(&PI_CACHE, prec, compute_pi)
}

/// log 2.
pub fn ln2(prec: u32) -> Ball {
    cached(&LN2_CACHE, prec, compute_ln2)
}

fn compute_pi(wp: u32) -> Ball {
    // Machin: pi/4 = 4 atan(1/5) - atan(1/239)
    let a = atan_inv(5, wp + 8);
    let b = atan_inv(239, wp + 8);
    (a.mul_i64(4) - b).mul_i64(4).set_prec(wp)
}

/// `atan(1/k)` by the alternating series; error <= first omitted term.
fn atan_inv(k: i64, wp: u32) -> Ball {
    let x = Ball::one(wp).div_i64(k);
    let x2 = x.sqr();
    let mut power = x;
    let mut sum = Ball::zero(wp);
    let mut j: i64 = 0;
    let eps = Mag::pow2(-(wp as i64) - 8);
    loop {
        let term = power.div_i64(2 * j + 1);
        if term.mag_upper() < eps {
            return sum.add_error(term.mag_upper());
        }
        sum = if j % 2 == 0 { sum + term } else { sum - term };
        power = &power * &x2;
        j += 1;
    }
}

/// `atanh(u) = sum u^(2j+1)/(2j+1)` for `|u| <= 1/3`.
fn atanh_series(u: &Ball, wp: u32) -> Ball {
    let u2 = u.sqr();
    let mut power = u.clone();
    let mut sum = Ball::zero(wp);
    let mut j: i64 = 0;
    let eps = Mag::pow2(-(wp as i64) - 8);
    loop {
        let term = power.div_i64(2 * j + 1);
        if power.mag_upper() < eps {
            // tail <= |u|^(2j+1) / (1 - u^2) <= 9/8 |u|^(2j+1)
            return sum.add_error(power.mag_upper().mul_u64(2));
        }
        sum = sum + term;
        power = &power * &u2;
        j += 1;
    }
}

fn compute_ln2(wp: u32) -> Ball {
    let third = Ball::one(wp + 8).div_i64(3);
    atanh_series(&third, wp + 8).mul_2exp(1).set_prec(wp)
}

fn exp_point(x: &Dyadic, prec: u32) -> Result<Ball, NumericError> {
    if x.is_zero() {
        return Ok(Ball::one(prec));
    }
    let top = x.top();
    if top > 48 {
        return Err(NumericError::PrecisionExhausted("exp argument too large"));
    }
    let s = (top + 10).max(0) as u32;
    let wp = prec + s + 24;
    // |r| < 2^-10
    let r = Ball::exact(x.mul_2exp(-(s as i64)), wp).set_prec(wp);
    let k_max = (wp / 10 + 2) as i64;
    let one = Ball::one(wp);
    let mut acc = one.clone();
    for k in (1..=k_max).rev() {
        acc = &one + (&r * &acc).div_i64(k);
    }
    // tail <= 2 |r|^(K+1) / (K+1)! <= 2^(1 - 10 (K+1))
    acc = acc.add_error(Mag::pow2(1 - 10 * (k_max + 1)));
    for _ in 0..s {
        acc = &acc * &acc;
    }
    Ok(acc.set_prec(prec))
}

/// Upper bound for `e^x` (coarse, 64-bit).
pub(crate) fn exp_upper_bound(x: &Dyadic) -> Option<Mag> {
    exp_point(x, 64).ok().map(|b| b.mag_upper())
}

pub fn exp(a: &Ball) -> Result<Ball, NumericError> {
    let v = exp_point(a.mid(), a.prec())?;
    if a.rad().is_zero() {
        return Ok(v);
    }
    // |e^y - e^x| <= e^x (e^r - 1)
    let err = v.mag_upper().mul(&a.rad().expm1_upper());
    Ok(v.add_error(err))
}

fn log_point(x: &Dyadic, prec: u32) -> Result<Ball, NumericError> {
    if !x.is_positive() {
        return Err(NumericError::Domain("log of a non-positive number"));
    }
    if *x == Dyadic::one() {
        return Ok(Ball::zero(prec));
    }
    let mut e = x.top() - 1;
    let mut m = x.mul_2exp(-e);
    // keep m in [0.707, 1.414)
    if m > Dyadic::new(BigInt::from(181), -7) {
        m = m.mul_2exp(-1);
        e += 1;
    }
    let wp = prec + 24 + (64 - e.unsigned_abs().leading_zeros());
    let mb = Ball::exact(m, wp);
    let one = Ball::one(wp);
    let u = (&mb - &one).try_div(&(&mb + &one))?;
    let mut res = atanh_series(&u, wp).mul_2exp(1);
    if e != 0 {
        res = res + ln2(wp).mul_i64(e);
    }
    Ok(res.set_prec(prec))
}

pub fn log(a: &Ball) -> Result<Ball, NumericError> {
    if !a.is_positive() {
        return Err(NumericError::Domain("log of a ball that is not positive"));
    }
    let v = log_point(a.mid(), a.prec())?;
    if a.rad().is_zero() {
        return Ok(v);
    }
    // |log y - log x| <= r / (x - r)
    let lo = Mag::from_dyadic_lower(&a.lower());
    Ok(v.add_error(a.rad().div(&lo)))
}

/// Number of Taylor terms so that `b^(K+1)/(K+1)! < 2^-wp`, with `b <= 1`.
fn taylor_terms(b: f64, wp: u32) -> u64 {
    let lb = b.max(1e-300).log2();
    let mut acc = 0.0f64;
    let mut k = 1u64;
    loop {
        acc += lb - (k as f64).log2();
        if acc < -(wp as f64) - 8.0 {
            return k;
        }
        k += 1;
    }
}

/// Rigorous `bound^(k)/k!`.
fn taylor_tail(bound: Mag, k: u64) -> Mag {
    let mut p = Mag::from_u64(1);
    for _ in 0..k {
        p = p.mul(&bound);
    }
    let f = Mag::from_dyadic_lower(&Dyadic::from_bigint(factorial(k)));
    p.div(&f).mul_u64(2)
}

fn sin_cos_point(x: &Dyadic, prec: u32) -> Result<(Ball, Ball), NumericError> {
    let top = x.top().max(0);
    if top > 48 {
        return Err(NumericError::PrecisionExhausted("sin/cos argument too large"));
    }
    let wp = prec + 24 + top as u32;
    let xb = Ball::exact(x.clone(), wp);
    let (t, quadrant) = if x.top() <= -1 {
        (xb, 0i64)
    } else {
        let half_pi = pi(wp).mul_2exp(-1);
        let q = xb.try_div(&half_pi)?;
        let k: BigInt = q.mid().add(&Dyadic::new(BigInt::from(1), -1)).floor();
        let t = &xb - &half_pi * Ball::from_bigint(&k, wp);
        let quadrant = (k % BigInt::from(4)).to_i64().unwrap_or(0).rem_euclid(4);
        (t, quadrant)
    };
    let bound = t.mag_upper();
    let b = bound.to_f64().min(1.0);
    let terms = taylor_terms(b, wp) + 1;
    let t2 = t.sqr();
    let one = Ball::one(wp);
    // sin t = t (1 - t^2/(2*3) (1 - t^2/(4*5) (...)))
    let n = terms / 2 + 1;
    let mut s = one.clone();
    for j in (1..=n as i64).rev() {
        s = &one - (&t2 * &s).div_i64((2 * j) * (2 * j + 1));
    }
    let s = (&t * &s).add_error(taylor_tail(bound, 2 * n + 3));
    let mut c = one.clone();
    for j in (1..=n as i64).rev() {
        c = &one - (&t2 * &c).div_i64((2 * j - 1) * (2 * j));
    }
    let c = c.add_error(taylor_tail(bound, 2 * n + 2));
    let (s, c) = match quadrant {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    };
    Ok((s.set_prec(prec), c.set_prec(prec)))
}

pub fn sin_cos(a: &Ball) -> Result<(Ball, Ball), NumericError> {
    let (s, c) = sin_cos_point(a.mid(), a.prec())?;
    if a.rad().is_zero() {
        return Ok((s, c));
    }
    let r = a.rad().min(Mag::from_u64(2));
    Ok((s.add_error(r), c.add_error(r)))
}

pub fn sin(a: &Ball) -> Result<Ball, NumericError> {
    sin_cos(a).map(|p| p.0)
}

pub fn cos(a: &Ball) -> Result<Ball, NumericError> {
    sin_cos(a).map(|p| p.1)
}

fn atan_point(x: &Dyadic, prec: u32) -> Result<Ball, NumericError> {
    if x.is_zero() {
        return Ok(Ball::zero(prec));
    }
    let wp = prec + 32;
    let xb = Ball::exact(x.clone(), wp);
    if x.abs() > Dyadic::one() {
        // atan x = sign(x) pi/2 - atan(1/x)
        let inv = xb.inv()?;
        let inner = atan_point(&inv.mid().clone(), wp)?.add_error(inv.rad());
        let half_pi = pi(wp).mul_2exp(-1);
        let r = if x.is_positive() { half_pi - inner } else { -half_pi - inner };
        return Ok(r.set_prec(prec));
    }
    // halve the argument four times: atan x = 2 atan(x / (1 + sqrt(1 + x^2)))
    let one = Ball::one(wp);
    let mut y = xb;
    for _ in 0..4 {
        let d = &one + (&one + y.sqr()).sqrt()?;
        y = y.try_div(&d)?;
    }
    let y2 = y.sqr();
    let mut power = y.clone();
    let mut sum = Ball::zero(wp);
    let eps = Mag::pow2(-(wp as i64) - 8);
    let mut j: i64 = 0;
    loop {
        let term = power.div_i64(2 * j + 1);
        if term.mag_upper() < eps {
            sum = sum.add_error(term.mag_upper());
            break;
        }
        sum = if j % 2 == 0 { sum + term } else { sum - term };
        power = &power * &y2;
        j += 1;
    }
    Ok(sum.mul_2exp(4).set_prec(prec))
}

pub fn atan(a: &Ball) -> Result<Ball, NumericError> {
    let v = atan_point(a.mid(), a.prec())?;
    Ok(v.add_error(a.rad()))
}

/// Argument of `x + iy`, in `(-pi, pi]`. Fails if the box may contain the
/// origin or straddles the branch cut on the negative real axis.
pub fn atan2(y: &Ball, x: &Ball) -> Result<Ball, NumericError> {
    let prec = y.prec().max(x.prec());
    if x.is_positive() {
        return atan(&y.try_div(x)?);
    }
    if y.is_positive() {
        // pi/2 - atan(x/y)
        return Ok(pi(prec).mul_2exp(-1) - atan(&x.try_div(y)?)?);
    }
    if y.is_negative() {
        return Ok(-pi(prec).mul_2exp(-1) - atan(&x.try_div(y)?)?);
    }
    if x.is_negative() && y.is_exact_zero() {
        return Ok(pi(prec));
    }
    Err(NumericError::Domain("argument undefined or on the branch cut"))
}

/// `a^b = exp(b log a)` for positive `a`.
pub fn pow(a: &Ball, b: &Ball) -> Result<Ball, NumericError> {
    exp(&(b * &log(a)?))
}

pub fn sqrt(a: &Ball) -> Result<Ball, NumericError> {
    a.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat, Rat};

    const P: u32 = 200;

    fn q(s: &str) -> Rat {
        Dyadic::parse_rat(s).unwrap()
    }

    #[test]
    fn pi_and_ln2_digits() {
        let p = pi(P);
        assert!(p.contains_rat(&q("3.14159265358979323846264338327950288419716939937510582097494459")));
        assert!(p.rad() < Mag::pow2(-190));
        let l = ln2(P);
        assert!(l.contains_rat(&q("0.693147180559945309417232121458176568075500134360255254120680009")));
    }

    #[test]
    fn exp_log_known_values() {
        let e = exp(&Ball::one(P)).unwrap();
        assert!(e.contains_rat(&q("2.71828182845904523536028747135266249775724709369995957496696762")));
        let x = Ball::from_rat(&rat(-7, 3), P);
        let back = log(&exp(&x).unwrap()).unwrap();
        assert!(back.contains_rat(&rat(-7, 3)));
        assert!(back.rad() < Mag::pow2(-180));
        let l10 = log(&Ball::from_i64(10, P)).unwrap();
        assert!(l10.contains_rat(&q("2.30258509299404568401799145468436420760110148862877297603332790")));
    }

    #[test]
    fn exp_of_large_negative_argument_is_tiny_and_positive() {
        let v = exp(&Ball::from_i64(-2000, P)).unwrap();
        assert!(v.is_positive());
        assert!(v.mag_upper() < Mag::pow2(-2880));
    }

    #[test]
    fn trig_known_values() {
        let (s, c) = sin_cos(&Ball::one(P)).unwrap();
        assert!(s.contains_rat(&q("0.841470984807896506652502321630298999622563060798371065672751709")));
        assert!(c.contains_rat(&q("0.540302305868139717400936607442976603732310420617922227670097255")));
        let (s, c) = sin_cos(&Ball::from_i64(10, P)).unwrap();
        assert!(s.contains_rat(&q("-0.544021110889369813404747661851377281683643012916223891574184012")));
        assert!(c.contains_rat(&q("-0.839071529076452452258863947824064834519930165133168546835953731")));
        let a = atan(&Ball::from_i64(3, P)).unwrap();
        assert!(a.contains_rat(&q("1.24904577239825442582991707728109012307782940412989671905466923")));
        let a = atan2(&Ball::from_i64(1, P), &Ball::from_i64(-1, P)).unwrap();
        let three_quarter_pi = pi(P).mul_i64(3).mul_2exp(-2);
        assert!(a.overlaps(&three_quarter_pi));
    }

    #[test]
    fn pow_real() {
        let v = pow(&Ball::from_i64(25, P), &Ball::from_rat(&rat(11, 20), P)).unwrap();
        // v^20 = 25^11
        let v20 = v.pow_u64(20);
        assert!(v20.contains_rat(&Rat::from_integer(BigInt::from(25).pow(11u32))));
        assert!((v.to_f64() - 5.873_094_715_440_095).abs() < 1e-14);
    }
}
