//! The Riemann Ξ function and its Taylor jet at the origin.
//!
//! Two independent routes produce `Ξ^{(k)}(0)`:
//!
//! * moments of the kernel Φ: `Ξ^{(2m)}(0) = (-1)^m 4 ∫_0^∞ Φ(u) u^{2m} du`;
//! * the product `Ξ(iz) = π^{-z/2-1/4} Γ(z/2+5/4) (s-1) ζ(s)` with
//!   `s = 1/2 + z`, expanded factor by factor as power series in `z`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::gamma::{digamma_real, gamma_ball, lngamma_real};
use super::phi::{phi_moments, QuadratureSpec};
use super::zeta::{hurwitz_zeta, sm1_zeta, sm1_zeta_series};
use crate::numeric::{elementary, factorial, rat, Ball, CBall, Mag, Rat};
use crate::poly::{series, DecayBound, Parity, TaylorJet};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XiMethod {
    PhiMoments,
    DirectFactors,
    Both,
}

impl XiMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            XiMethod::PhiMoments => "phi",
            XiMethod::DirectFactors => "factors",
            XiMethod::Both => "both",
        }
    }
}

impl fmt::Display for XiMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for XiMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phi" => Ok(XiMethod::PhiMoments),
            "factors" => Ok(XiMethod::DirectFactors),
            "both" => Ok(XiMethod::Both),
            _ => Err(Error::InvalidArgument(format!("unknown method `{s}` (phi, factors, both)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct XiJetRequest {
    /// Highest derivative order.
    pub order: usize,
    pub prec: u32,
    pub method: XiMethod,
    pub quadrature: QuadratureSpec,
}

impl XiJetRequest {
    pub fn new(order: usize, prec: u32, method: XiMethod) -> XiJetRequest {
        XiJetRequest { order, prec, method, quadrature: QuadratureSpec::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.prec < 64 {
            return Err(Error::InvalidArgument(format!("precision {} below 64 bits", self.prec)));
        }
        if let Some(u) = &self.quadrature.u_max {
            if *u <= rat(0, 1) {
                return Err(Error::InvalidArgument("quadrature cutoff must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Converts the `k`-th Taylor coefficient `p_k` of `z -> Ξ(iz)` into
/// `Ξ^{(k)}(0) = k! (-i)^k p_k`, which must be real.
pub fn xi_derivative_from_rotated(k: usize, p_k: &CBall) -> Result<Ball> {
    let v = p_k.mul_real(&Ball::from_bigint(&factorial(k as u64), p_k.prec()));
    let rotated = match k % 4 {
        0 => v,
        1 => -v.mul_i(),
        2 => -v,
        _ => v.mul_i(),
    };
    if !rotated.im.contains_zero() {
        return Err(Error::Parity(format!("Ξ^({k})(0) has a nonzero imaginary part")));
    }
    Ok(rotated.re)
}

/// Envelope `|Ξ^{(k)}(0)| <= (7/2) (k/4)^k`.
///
/// From `|Φ(u)| <= 4.04 π² e^{-π} e^{-2πu²}` (using `e^{2u} >= 1+2u+2u²`
/// and `9/2 < 2π`), `sup u^{2m} e^{-πu²} = (m/(πe))^m` and
/// `∫_0^∞ e^{-πu²} = 1/2`: `|Ξ^{(k)}(0)| <= 8.08 π² e^{-π} (k/(2πe))^{k/2}`,
/// and `(k/(2πe))^{1/2} <= k/4` for `k >= 1`.
pub fn xi_decay_bound() -> DecayBound {
    DecayBound::Stirling { a: rat(7, 2), w: rat(4, 1) }
}

fn finish(values: Vec<Ball>) -> Result<TaylorJet<Ball>> {
    Ok(TaylorJet::new(values, Parity::Even, "Xi")?.with_order_hint(1.0).with_decay(xi_decay_bound()))
}

fn via_moments(req: &XiJetRequest) -> Result<Vec<Ball>> {
    let moments = phi_moments(req.order / 2, req.prec, &req.quadrature)?;
    let mut out = Vec::with_capacity(req.order + 1);
    for k in 0..=req.order {
        if k % 2 == 1 {
            out.push(Ball::zero(req.prec));
            continue;
        }
        let v = moments[k / 2].mul_2exp(2);
        out.push(if k % 4 == 0 { v } else { -v });
    }
    Ok(out)
}

/// Power series of `log(π^{-z/2-1/4} Γ(z/2+5/4))`.
fn log_gamma_factor_series(m: usize, wp: u32) -> Result<Vec<Ball>> {
    let a = Ball::from_rat(&rat(5, 4), wp);
    let lnpi = elementary::log(&elementary::pi(wp))?;
    let mut out = Vec::with_capacity(m + 1);
    out.push(lngamma_real(&a, wp)? - lnpi.mul_2exp(-2));
    if m >= 1 {
        out.push((digamma_real(&a, wp)? - &lnpi).mul_2exp(-1));
    }
    // log Γ(a+x) = log Γ(a) + ψ(a) x + Σ_{k>=2} (-1)^k ζ(k, a) x^k / k, with x = z/2
    for k in 2..=m {
        let z = hurwitz_zeta(&CBall::from_real(Ball::from_i64(k as i64, wp)), &a, wp)?.re;
        let v = z.div_i64(k as i64).mul_2exp(-(k as i64));
        out.push(if k % 2 == 0 { v } else { -v });
    }
    Ok(out)
}

fn direct_at(m: usize, wp: u32) -> Result<Vec<Ball>> {
    let lg = log_gamma_factor_series(m, wp)?;
    let g = series::exp(&lg, m + 1)?;
    let f = sm1_zeta_series(&Ball::from_rat(&rat(1, 2), wp), m, wp)?;
    let p = series::mul(&g, &f, m + 1);
    p.iter().enumerate().map(|(k, c)| xi_derivative_from_rotated(k, &CBall::from_real(c.clone()))).collect()
}

fn via_factors(req: &XiJetRequest) -> Result<Vec<Ball>> {
    let goal = Mag::pow2(-(req.prec as i64));
    // the product has heavy cancellation at high order; raise precision until
    // every even entry carries `prec` relative bits
    let mut wp = req.prec + 64 + 4 * req.order as u32;
    for _ in 0..6 {
        let vals = direct_at(req.order, wp)?;
        let ok = vals.iter().step_by(2).all(|v| v.rad() <= v.mag_lower().mul(&goal));
        if ok {
            let mut out: Vec<Ball> = vals.into_iter().map(|v| v.set_prec(req.prec)).collect();
            for v in out.iter_mut().skip(1).step_by(2) {
                *v = Ball::zero(req.prec);
            }
            return Ok(out);
        }
        wp *= 2;
    }
    Err(Error::Numeric(crate::numeric::NumericError::PrecisionExhausted("Ξ product series")))
}

/// Intersects two enclosures entrywise.
pub fn intersect_jets(a: &[Ball], b: &[Ball]) -> Result<Vec<Ball>> {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(k, (x, y))| x.intersect(y).ok_or(Error::MethodDisagreement { order: k }))
        .collect()
}

/// Taylor jet `Ξ(0), Ξ'(0), ..., Ξ^{(M)}(0)`.
pub fn xi_taylor(req: &XiJetRequest) -> Result<TaylorJet<Ball>> {
    req.validate()?;
    let values = match req.method {
        XiMethod::PhiMoments => via_moments(req)?,
        XiMethod::DirectFactors => via_factors(req)?,
        XiMethod::Both => {
            let a = via_moments(req)?;
            let b = via_factors(req)?;
            intersect_jets(&a, &b)?
        }
    };
    finish(values)
}

/// `Ξ(w)` on a complex ball, through the product formula at `z = -iw`
/// (or `z = iw` by evenness, so that `Re z >= 0` away from a strip).
pub fn xi_eval(w: &CBall, prec: u32) -> Result<CBall> {
    let wp = prec + 32;
    let w = if w.im.is_negative() { -w } else { w.clone() }.set_prec(wp);
    let z = -w.mul_i();
    let quarter = CBall::from_real(Ball::from_rat(&rat(1, 4), wp));
    let half = CBall::from_real(Ball::from_rat(&rat(1, 2), wp));
    let lnpi = elementary::log(&elementary::pi(wp))?;
    let pipow = (-(&z.mul_2exp(-1) + &quarter)).mul_real(&lnpi).exp()?;
    let g = gamma_ball(&(&z.mul_2exp(-1) + &CBall::from_real(Ball::from_rat(&rat(5, 4), wp))), wp)?;
    let f = sm1_zeta(&(&half + &z), wp)?;
    Ok((&(&pipow * &g) * &f).set_prec(prec))
}

/// `Ξ(0) = -(1/8) π^{-1/4} Γ(1/4) ζ(1/2)`, straight from the defining
/// formula.
pub fn xi_at_zero_direct(prec: u32) -> Result<Ball> {
    let wp = prec + 32;
    let q = Rat::new(1.into(), 4.into());
    let g = gamma_ball(&CBall::from_rats(&q, &rat(0, 1), wp), wp)?.re;
    let z = super::zeta::zeta_ball(&CBall::from_rats(&rat(1, 2), &rat(0, 1), wp), wp)?.re;
    let pi_q = elementary::exp(&-(elementary::log(&elementary::pi(wp))?.mul_2exp(-2)))?;
    Ok((-(g * z * pi_q).mul_2exp(-3)).set_prec(prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_bookkeeping() {
        let p = 64;
        let one = CBall::one(p);
        assert!(xi_derivative_from_rotated(0, &one).unwrap().contains_rat(&rat(1, 1)));
        assert!(xi_derivative_from_rotated(2, &one).unwrap().contains_rat(&rat(-2, 1)));
        assert!(xi_derivative_from_rotated(4, &one).unwrap().contains_rat(&rat(24, 1)));
        // odd orders: real coefficients are rotated onto the imaginary axis
        assert!(matches!(xi_derivative_from_rotated(1, &one), Err(Error::Parity(_))));
        let zero = CBall::zero(p);
        assert!(xi_derivative_from_rotated(3, &zero).unwrap().is_exact_zero());
        // an imaginary coefficient at odd order gives a real derivative
        let i = CBall::i(p);
        assert!(xi_derivative_from_rotated(1, &i).unwrap().contains_rat(&rat(1, 1)));
        assert!(xi_derivative_from_rotated(3, &i).unwrap().contains_rat(&rat(-6, 1)));
    }

    #[test]
    fn value_at_zero() {
        let x = xi_at_zero_direct(128).unwrap();
        assert!((x.to_f64() - 0.4971207781883141).abs() < 1e-15);
        let e = xi_eval(&CBall::zero(128), 128).unwrap();
        assert!(e.re.overlaps(&x) && e.im.contains_zero());
    }

    #[test]
    fn evenness_and_first_zero() {
        let p = 96;
        let z = CBall::from_rats(&rat(3, 2), &rat(1, 3), p);
        let a = xi_eval(&z, p).unwrap();
        let b = xi_eval(&-&z, p).unwrap();
        assert!(a.overlaps(&b));
        let at = |t: (i64, i64)| xi_eval(&CBall::from_rats(&rat(t.0, t.1), &rat(0, 1), p), p).unwrap();
        assert!(at((14, 1)).re.is_positive());
        assert!(at((142, 10)).re.is_negative());
        assert!((at((14, 1)).re.to_f64() - 2.0129444423525751e-4).abs() < 1e-15);
    }

    #[test]
    fn methods_agree_low_order() {
        let mut req = XiJetRequest::new(12, 96, XiMethod::Both);
        req.quadrature.pieces_per_unit = 16;
        let jet = xi_taylor(&req).unwrap();
        assert_eq!(jet.parity(), Parity::Even);
        assert!(jet.value(1).is_exact_zero());
        assert!((jet.value(2).to_f64() + 0.022971944315145437535).abs() < 1e-17);
        let x0 = xi_at_zero_direct(96).unwrap();
        assert!(jet.value(0).overlaps(&x0));
        for k in 0..=12 {
            assert!(!(jet.value(k).abs() - xi_decay_bound().at(k as u64, 64)).is_positive());
        }
    }
}
