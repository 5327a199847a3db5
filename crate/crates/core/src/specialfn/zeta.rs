//! Hurwitz and Riemann ζ by Euler–Maclaurin summation with explicit
//! remainder bounds, plus the Taylor series of the pole-free `(s-1)ζ(s)`.

use super::bernoulli::bernoulli;
use crate::numeric::{elementary, factorial, Ball, CBall, Mag, NumericError};
use crate::poly::series;
use crate::{Error, Result};

const BOUND_PREC: u32 = 64;

/// Summation plan: `n` explicit terms and `j` correction terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct EmPlan {
    pub n: usize,
    pub j: usize,
    pub remainder: Mag,
}

/// Picks `(N, J)` so the Euler–Maclaurin remainder for `Σ (k+a)^(-s)` is
/// below `2^-wp` for every `s` with `Re s >= sigma_lo` and `|s| <= abs_hi`.
///
/// The bound is `|B_2J| Π_{i<2J}(|s|+i) / (2J)! * (N+a)^(1-σ-2J) / (σ+2J-1)`.
pub(crate) fn em_plan(sigma_lo: f64, abs_hi: f64, a: &Ball, wp: u32, n_hint: Option<usize>) -> Result<EmPlan> {
    let p = BOUND_PREC;
    let target = Mag::pow2(-(wp as i64));
    let mut n = n_hint.unwrap_or((abs_hi + 0.25 * wp as f64 + 8.0).ceil() as usize);
    let sigma = Ball::from_f64(sigma_lo, p)?.set_prec(p);
    let s_abs = Ball::from_f64(abs_hi, p)?;
    for _ in 0..6 {
        let base = &Ball::from_i64(n as i64, p) + &a.set_prec(p);
        let lb = elementary::log(&base)?;
        let mut poch = Ball::one(p);
        let mut binv = Ball::one(p);
        let base_inv2 = base.inv()?.sqr();
        // (N+a)^(1-σ)
        let lead = elementary::exp(&(&(&Ball::one(p) - &sigma) * &lb))?;
        for j in 1..=8 * n + 64 {
            let i = (2 * j - 2) as i64;
            poch = &poch * &(&s_abs + &Ball::from_i64(i, p)) * (&s_abs + &Ball::from_i64(i + 1, p));
            binv = &binv * &base_inv2;
            let den_s = &sigma + &Ball::from_i64(2 * j as i64 - 1, p);
            if !den_s.is_positive() {
                continue;
            }
            let b = Ball::from_rat(&bernoulli(2 * j), p).abs();
            let fact = Ball::from_bigint(&factorial(2 * j as u64), p);
            let r = (b * &poch * &lead * &binv).try_div(&(fact * den_s))?.mag_upper();
            if r <= target {
                return Ok(EmPlan { n, j, remainder: r });
            }
            // terms have started growing again: more explicit terms needed
            if (2 * j) as f64 > 2.0 * std::f64::consts::PI * n as f64 + abs_hi + 2.0 {
                break;
            }
        }
        n *= 2;
    }
    Err(Error::Numeric(NumericError::PrecisionExhausted("Euler–Maclaurin plan")))
}

fn check_a(a: &Ball) -> Result<()> {
    if a.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidArgument("Hurwitz parameter must be positive".into()))
    }
}

/// `Σ_{k<N} (k+a)^(-s) + (N+a)^(-s)/2 + Σ_j B_2j/(2j)! (s)_{2j-1} (N+a)^(-s-2j+1)`,
/// i.e. the Euler–Maclaurin sum without the pole term, plus `(N+a)^(-s)`.
fn em_body(s: &CBall, a: &Ball, plan: EmPlan, wp: u32) -> Result<(CBall, CBall)> {
    let neg_s = -s;
    let power = |x: &Ball| -> Result<CBall> {
        if let Some(k) = small_integer(s) {
            return Ok(CBall::from_real(x.inv()?.pow_u64(k)));
        }
        Ok(neg_s.mul_real(&elementary::log(x)?).exp()?)
    };
    let mut acc = CBall::zero(wp);
    for k in 0..plan.n {
        acc = &acc + &power(&(a + &Ball::from_i64(k as i64, wp)))?;
    }
    let base = a + &Ball::from_i64(plan.n as i64, wp);
    let x = power(&base)?;
    acc = &acc + &x.mul_2exp(-1);
    let binv2 = base.inv()?.sqr();
    let mut poch = s.clone();
    let mut scale = base.clone();
    for j in 1..plan.j {
        scale = &scale * &binv2;
        let c = Ball::from_rat(&bernoulli(2 * j), wp).try_div(&Ball::from_bigint(&factorial(2 * j as u64), wp))?;
        acc = &acc + &(&poch * &x).mul_real(&(&c * &scale));
        let i = (2 * j - 1) as i64;
        poch = &poch * &(s + &CBall::from_real(Ball::from_i64(i, wp)));
        poch = &poch * &(s + &CBall::from_real(Ball::from_i64(i + 1, wp)));
    }
    acc.re = acc.re.add_error(plan.remainder);
    acc.im = acc.im.add_error(plan.remainder);
    Ok((acc, x))
}

fn small_integer(s: &CBall) -> Option<u64> {
    if !s.re.is_exact() || !s.im.is_exact_zero() || !s.re.mid().is_integer() || !s.re.is_positive() {
        return None;
    }
    num_traits::ToPrimitive::to_u64(&s.re.mid().floor()).filter(|&k| k <= 1 << 20)
}

fn plan_for(s: &CBall, a: &Ball, wp: u32, n_hint: Option<usize>) -> Result<EmPlan> {
    let sigma_lo = s.re.lower().to_f64().floor();
    let abs_hi = s.abs().upper().to_f64().ceil() + 1.0;
    em_plan(sigma_lo, abs_hi, a, wp, n_hint)
}

fn hurwitz_with(s: &CBall, a: &Ball, prec: u32, n_hint: Option<usize>) -> Result<CBall> {
    check_a(a)?;
    let one = CBall::one(prec);
    let sm1 = s - &one;
    if sm1.contains_zero() {
        return Err(Error::Pole("ζ at s = 1"));
    }
    let wp = prec + 32;
    let s = s.set_prec(wp);
    let a = a.set_prec(wp);
    let plan = plan_for(&s, &a, wp, n_hint)?;
    let (body, x) = em_body(&s, &a, plan, wp)?;
    let base = &a + &Ball::from_i64(plan.n as i64, wp);
    // (N+a)^(1-s)/(s-1)
    let pole = x.mul_real(&base).try_div(&sm1.set_prec(wp))?;
    Ok((&body + &pole).set_prec(prec))
}

/// Hurwitz `ζ(s, a) = Σ_{k>=0} (k+a)^(-s)` for real `a > 0`.
pub fn hurwitz_zeta(s: &CBall, a: &Ball, prec: u32) -> Result<CBall> {
    hurwitz_with(s, a, prec, None)
}

/// Riemann `ζ(s)`.
pub fn zeta_ball(s: &CBall, prec: u32) -> Result<CBall> {
    hurwitz_zeta(s, &Ball::one(prec), prec)
}

/// `(s-1) ζ(s)`, entire.
pub fn sm1_zeta(s: &CBall, prec: u32) -> Result<CBall> {
    let wp = prec + 32;
    let s = s.set_prec(wp);
    let a = Ball::one(wp);
    let plan = plan_for(&s, &a, wp, None)?;
    let (body, x) = em_body(&s, &a, plan, wp)?;
    let sm1 = &s - &CBall::one(wp);
    let base = Ball::from_i64(plan.n as i64 + 1, wp);
    let pole_free = &(&sm1 * &body) + &x.mul_real(&base);
    // the remainder inside `body` was scaled by |s-1| through ball arithmetic
    Ok(pole_free.set_prec(prec))
}

/// Taylor coefficients `c_0..c_m` of `t -> (s0+t-1) ζ(s0+t)` at a real
/// point `s0`, each with a certified radius.
///
/// Every piece of the Euler–Maclaurin formula is expanded as a power
/// series in `t`; the remainder is bounded on `|t| <= 1` and transferred to
/// the coefficients by Cauchy's estimate.
pub fn sm1_zeta_series(s0: &Ball, m: usize, wp: u32) -> Result<Vec<Ball>> {
    let n_terms = m + 1;
    let s0 = s0.set_prec(wp);
    let sigma_lo = s0.lower().to_f64().floor() - 1.0;
    let abs_hi = s0.abs().upper().to_f64().ceil() + 1.0;
    let plan = em_plan(sigma_lo, abs_hi, &Ball::one(64), wp + 8, None)?;
    // |s - 1| <= |s0 - 1| + 1 on the disk
    let factor = (&s0 - &Ball::one(wp)).abs().mag_upper().add(&Mag::from_u64(1));
    let err = plan.remainder.mul(&factor);

    // e^(-t L) b^(-s0)
    let shifted_exp = |b: &Ball| -> Result<Vec<Ball>> {
        let l = elementary::log(b)?;
        let lead = elementary::exp(&-(&s0 * &l))?;
        let mut out = Vec::with_capacity(n_terms);
        let mut c = lead;
        for j in 0..n_terms {
            out.push(c.clone());
            c = (&c * &l).div_i64(-(j as i64 + 1));
        }
        Ok(out)
    };
    let mut body = vec![Ball::zero(wp); n_terms];
    for k in 1..=plan.n {
        let e = shifted_exp(&Ball::from_i64(k as i64, wp))?;
        for (acc, v) in body.iter_mut().zip(&e) {
            *acc = &*acc + v;
        }
    }
    let base = Ball::from_i64(plan.n as i64 + 1, wp);
    let eb = shifted_exp(&base)?;
    // Σ_j B_2j/(2j)! b^(1-2j) (s0+t)_{2j-1}, as a polynomial in t
    let binv2 = base.inv()?.sqr();
    let mut poch = vec![s0.clone(), Ball::one(wp)];
    let mut scale = base.clone();
    let mut corr = vec![Ball::zero(wp); n_terms];
    for j in 1..plan.j {
        scale = &scale * &binv2;
        let c = Ball::from_rat(&bernoulli(2 * j), wp).try_div(&Ball::from_bigint(&factorial(2 * j as u64), wp))?;
        let c = &c * &scale;
        for (acc, v) in corr.iter_mut().zip(&poch) {
            *acc = &*acc + &(v * &c);
        }
        for i in [2 * j - 1, 2 * j] {
            let lin = [&s0 + &Ball::from_i64(i as i64, wp), Ball::one(wp)];
            poch = series::mul(&poch, &lin, (poch.len() + 1).min(n_terms));
        }
    }
    let half: Vec<Ball> = eb.iter().map(|v| v.mul_2exp(-1)).collect();
    let tail = series::mul(&corr, &eb, n_terms);
    let em: Vec<Ball> = (0..n_terms).map(|k| &(&body[k] + &half[k]) + &tail[k]).collect();
    let lin = [&s0 - &Ball::one(wp), Ball::one(wp)];
    let mut out = series::mul(&em, &lin, n_terms);
    for (o, e) in out.iter_mut().zip(&eb) {
        *o = (&*o + &(e * &base)).add_error(err);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    const P: u32 = 128;

    fn real(r: (i64, i64)) -> CBall {
        CBall::from_rats(&rat(r.0, r.1), &rat(0, 1), P)
    }

    #[test]
    fn trivial_values() {
        let z2 = zeta_ball(&real((2, 1)), P).unwrap();
        let pi = elementary::pi(P);
        assert!(z2.re.overlaps(&(&pi * &pi).div_i64(6)));
        assert!(z2.re.rad() < Mag::pow2(-100));
        let z0 = zeta_ball(&real((0, 1)), P).unwrap();
        assert!(z0.re.contains_rat(&rat(-1, 2)));
        let zm1 = zeta_ball(&real((-1, 1)), P).unwrap();
        assert!(zm1.re.contains_rat(&rat(-1, 12)));
        assert!(matches!(zeta_ball(&real((1, 1)), P), Err(Error::Pole(_))));
    }

    #[test]
    fn half_two_parameterizations() {
        let s = real((1, 2));
        let a = zeta_ball(&s, P).unwrap();
        let b = hurwitz_with(&s, &Ball::one(256), 256, Some(300)).unwrap();
        assert!(a.re.overlaps(&b.re));
        assert!((a.re.to_f64() + 1.4603545088095868).abs() < 1e-15);
        assert!(a.re.rad() < Mag::pow2(-100) && b.re.rad() < Mag::pow2(-200));
    }

    #[test]
    fn hurwitz_shift_and_complex_points() {
        // ζ(s, a) = a^(-s) + ζ(s, a+1)
        let s = CBall::from_rats(&rat(3, 2), &rat(5, 1), P);
        let a = Ball::from_rat(&rat(5, 4), P);
        let lhs = hurwitz_zeta(&s, &a, P).unwrap();
        let a1 = &a + &Ball::one(P);
        let head = (-&s).mul_real(&elementary::log(&a).unwrap()).exp().unwrap();
        let rhs = &head + &hurwitz_zeta(&s, &a1, P).unwrap();
        assert!(lhs.overlaps(&rhs));
        let z = zeta_ball(&s, P).unwrap();
        assert!(zeta_ball(&s.conj(), P).unwrap().overlaps(&z.conj()));
    }

    #[test]
    fn pole_free_form() {
        let one = sm1_zeta(&real((1, 1)), P).unwrap();
        assert!(one.re.contains_rat(&rat(1, 1)));
        let s = real((3, 1));
        let via = (&s - &CBall::one(P)) * zeta_ball(&s, P).unwrap();
        assert!(sm1_zeta(&s, P).unwrap().overlaps(&via));
    }

    #[test]
    fn series_matches_point_values() {
        let c = sm1_zeta_series(&Ball::from_rat(&rat(1, 2), P), 40, P).unwrap();
        // at t = 0: (−1/2) ζ(1/2)
        let z = zeta_ball(&real((1, 2)), P).unwrap().re;
        assert!(c[0].overlaps(&-z.mul_2exp(-1)));
        // at t = 1/10 the truncated series is accurate to ~ 10^-41
        let t = Ball::from_rat(&rat(1, 10), P);
        let mut acc = Ball::zero(P);
        for v in c.iter().rev() {
            acc = &(&acc * &t) + v;
        }
        let want = sm1_zeta(&real((3, 5)), P).unwrap().re;
        let acc = acc.add_error(Mag::pow2(-130));
        assert!(acc.overlaps(&want), "{acc} vs {want}");
        assert!(c.iter().all(|v| v.rad() < Mag::pow2(-110)));
    }
}
