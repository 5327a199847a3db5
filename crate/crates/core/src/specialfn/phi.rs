//! The kernel `Φ(u) = Σ_{n>=1} (2π²n⁴e^{9u/2} - 3πn²e^{5u/2}) exp(-πn²e^{2u})`
//! and its even moments `∫_0^∞ Φ(u) u^{2m} du`.
//!
//! Moments use piecewise Taylor models: on each interval `[c-h, c+h]` the
//! kernel is expanded to degree `K` in `t = u - c`, the truncation error is
//! bounded by Cauchy's estimate on the disk `|t| <= ρ`, and the polynomial
//! times `(c+t)^{2m}` is integrated exactly.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::numeric::{elementary, rat, Ball, Mag, NumericError, Rat};
use crate::poly::series;
use crate::{Error, Result};

/// Interval layout for the moment quadrature.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureSpec {
    /// Intervals per unit length (each has half-width `1/(2 pieces_per_unit)`).
    pub pieces_per_unit: u32,
    /// Upper cutoff; chosen automatically from the tail bound when `None`.
    pub u_max: Option<Rat>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { pieces_per_unit: 32, u_max: None }
    }
}

/// Cauchy radius for the Taylor models.
const RHO: (i64, i64) = (1, 4);

/// Upper bound for `Σ_{n>=n0} C n⁴ exp(-π β n²)` (`β > 0`).
fn quartic_gauss_sum(c: &Ball, beta: &Ball, n0: u64, pi: &Ball) -> Result<Mag> {
    let p = 64;
    let term = |n: u64| -> Result<Ball> {
        let nb = Ball::from_i64(n as i64, p);
        let e = elementary::exp(&-(pi * beta * nb.sqr()))?;
        Ok(c * &nb.pow_u64(4) * e)
    };
    let mut acc = Mag::ZERO;
    for n in n0..n0 + 10_000 {
        let t = term(n)?;
        // successive ratios decrease in n; bound the rest geometrically
        let nb = Ball::from_i64(n as i64, p);
        let g = (&nb + &Ball::one(p)).try_div(&nb)?.pow_u64(4);
        let q = g * elementary::exp(&-(pi * beta * Ball::from_i64(2 * n as i64 + 1, p)))?;
        let slack = &Ball::one(p) - &q;
        if slack.mag_lower() >= Mag::pow2(-1) {
            return Ok(acc.add(&t.try_div(&slack)?.mag_upper()));
        }
        acc = acc.add(&t.mag_upper());
    }
    Err(Error::Numeric(NumericError::PrecisionExhausted("kernel tail")))
}

/// `(α, γ)` with `|2π²n⁴e^{9w/2}| <= α n⁴`, `|3πn²e^{5w/2}| <= γ n²` for
/// `Re w <= x`.
fn prefactors(x: &Ball, pi: &Ball) -> Result<(Ball, Ball)> {
    let a = (pi.sqr() * elementary::exp(&(x * &Ball::from_rat(&rat(9, 2), x.prec())))?).mul_2exp(1);
    let g = pi.mul_i64(3) * elementary::exp(&(x * &Ball::from_rat(&rat(5, 2), x.prec())))?;
    Ok((a, g))
}

/// Certified enclosure of `Φ(u)` for real `u >= 0`.
pub fn phi_density(u: &Ball, prec: u32) -> Result<Ball> {
    if u.is_negative() {
        return Err(Error::InvalidArgument("Φ is evaluated for u >= 0".into()));
    }
    let wp = prec + 32;
    let u = u.set_prec(wp);
    let pi = elementary::pi(wp);
    let e2 = elementary::exp(&u.mul_2exp(1))?;
    let e9 = elementary::exp(&(&u * &Ball::from_rat(&rat(9, 2), wp)))?;
    let e5 = elementary::exp(&(&u * &Ball::from_rat(&rat(5, 2), wp)))?;
    let target = Mag::pow2(-(wp as i64) - 8);
    let p = 64;
    let u_lo = Ball::exact(u.lower().max(crate::numeric::Dyadic::zero()), p);
    let u_hi = Ball::exact(u.upper(), p);
    let (a, g) = prefactors(&u_hi, &elementary::pi(p))?;
    let beta = elementary::exp(&u_lo.mul_2exp(1))?;
    let mut acc = Ball::zero(wp);
    for n in 1u64.. {
        let tail = quartic_gauss_sum(&(&a + &g), &beta, n, &elementary::pi(p))?;
        if tail <= target {
            return Ok(acc.add_error(tail).set_prec(prec));
        }
        let nb = Ball::from_i64(n as i64, wp);
        let n2 = nb.sqr();
        let lead = &(pi.sqr() * &n2.sqr() * &e9).mul_2exp(1) - &(pi.mul_i64(3) * &n2 * &e5);
        acc = &acc + &(lead * elementary::exp(&-(&pi * &n2 * &e2))?);
    }
    unreachable!()
}

/// Bound on `∫_U^∞ |Φ(u)| u^{2m} du` for `U >= 1`.
///
/// For `u >= 1`, `|Φ(u)| <= 8π² e^{9u/2} exp(-πe^{2u})` and the log-derivative
/// of `u^{2m} e^{9u/2} exp(-πe^{2u})` is at most `-λ` beyond `U`.
fn moment_tail(u_max: &Rat, m: usize) -> Result<Option<Mag>> {
    let p = 128;
    let u = Ball::from_rat(u_max, p);
    let pi = elementary::pi(p);
    let e2 = elementary::exp(&u.mul_2exp(1))?;
    let lambda = &(&(&pi * &e2).mul_2exp(1) - &Ball::from_rat(&rat(9, 2), p))
        - &Ball::from_i64(2 * m as i64, p).try_div(&u)?;
    if !lambda.is_positive() {
        return Ok(None);
    }
    let g = pi.sqr().mul_i64(8)
        * u.pow_u64(2 * m as u64)
        * elementary::exp(&(&(&u * &Ball::from_rat(&rat(9, 2), p)) - &(&pi * &e2)))?;
    Ok(Some(g.try_div(&lambda)?.mag_upper()))
}

struct Piece {
    center: Rat,
    /// Taylor coefficients in `t = u - center`.
    coeffs: Vec<Ball>,
    /// Pointwise bound on `|Φ - T|` over the interval.
    err: Mag,
}

fn taylor_piece(center: &Rat, h: &Rat, k: usize, wp: u32, target: Mag) -> Result<Piece> {
    let p = 64;
    let rho = rat(RHO.0, RHO.1);
    let c = Ball::from_rat(center, wp);
    let pi = elementary::pi(wp);
    let pi_lo = elementary::pi(p);
    // disk |t| <= ρ: Re e^{2(c+t)} >= e^{2(c-ρ)} cos 2ρ
    let c_lo = Ball::from_rat(center, p);
    let rho_b = Ball::from_rat(&rho, p);
    let (a_disk, g_disk) = prefactors(&(&c_lo + &rho_b), &pi_lo)?;
    let beta_disk = elementary::exp(&(&c_lo - &rho_b).mul_2exp(1))? * elementary::cos(&rho_b.mul_2exp(1))?;
    let disk = quartic_gauss_sum(&(&a_disk + &g_disk), &beta_disk, 1, &pi_lo)?;
    let hb = Ball::from_rat(h, p);
    let (a_line, g_line) = prefactors(&(&c_lo + &hb), &pi_lo)?;
    let beta_line = elementary::exp(&(&c_lo - &hb).mul_2exp(1))?;
    let q = Ball::from_rat(&(h / &rho), p);
    // |Φ - T| <= B q^{K+1}/(1-q) plus the neglected n
    let trunc = (Ball::exact(disk.to_dyadic(), p) * q.pow_u64(k as u64 + 1)).try_div(&(&Ball::one(p) - &q))?;
    let mut n_max = 1;
    let neglected = loop {
        let t = quartic_gauss_sum(&(&a_line + &g_line), &beta_line, n_max + 1, &pi_lo)?;
        if t <= target {
            break t;
        }
        n_max += 1;
    };

    let e2c = elementary::exp(&c.mul_2exp(1))?;
    let e9c = elementary::exp(&(&c * &Ball::from_rat(&rat(9, 2), wp)))?;
    let e5c = elementary::exp(&(&c * &Ball::from_rat(&rat(5, 2), wp)))?;
    let scaled = |rate: &Rat| -> Vec<Ball> {
        // e^{rate t}
        let r = Ball::from_rat(rate, wp);
        let mut out = Vec::with_capacity(k + 1);
        let mut v = Ball::one(wp);
        for j in 0..=k {
            out.push(v.clone());
            v = (&v * &r).div_i64(j as i64 + 1);
        }
        out
    };
    let exp2 = scaled(&rat(2, 1));
    let exp9 = scaled(&rat(9, 2));
    let exp5 = scaled(&rat(5, 2));
    let mut acc = vec![Ball::zero(wp); k + 1];
    for n in 1..=n_max {
        let n2 = Ball::from_i64((n * n) as i64, wp);
        let amp = -(&pi * &n2 * &e2c);
        let inner: Vec<Ball> = exp2.iter().map(|v| v * &amp).collect();
        let gauss = series::exp(&inner, k + 1)?;
        let a9 = (pi.sqr() * n2.sqr() * &e9c).mul_2exp(1);
        let a5 = pi.mul_i64(3) * &n2 * &e5c;
        let lead: Vec<Ball> = exp9.iter().zip(&exp5).map(|(x, y)| &(x * &a9) - &(y * &a5)).collect();
        for (s, v) in acc.iter_mut().zip(series::mul(&lead, &gauss, k + 1)) {
            *s = &*s + &v;
        }
    }
    Ok(Piece { center: center.clone(), coeffs: acc, err: trunc.mag_upper().add(&neglected) })
}

/// `∫_0^∞ Φ(u) u^{2m} du` for `m = 0..=m_max`.
pub fn phi_moments(m_max: usize, prec: u32, quad: &QuadratureSpec) -> Result<Vec<Ball>> {
    if quad.pieces_per_unit < 4 {
        return Err(Error::QuadratureTooCoarse(format!("{} pieces per unit", quad.pieces_per_unit)));
    }
    let wp = prec + 64;
    let target = Mag::pow2(-(prec as i64) - 48);
    let step = rat(1, quad.pieces_per_unit as i64);
    let h = &step / rat(2, 1);
    let rho = rat(RHO.0, RHO.1);
    let log_ratio = (rho.clone() / &h).to_integer().bits() as u32 - 1;
    let k = ((wp + 10) as usize).div_ceil(log_ratio as usize);

    let tails_ok = |u: &Rat| -> Result<Option<Vec<Mag>>> {
        let mut out = Vec::with_capacity(m_max + 1);
        for m in 0..=m_max {
            match moment_tail(u, m)? {
                Some(t) if t <= target => out.push(t),
                _ => return Ok(None),
            }
        }
        Ok(Some(out))
    };
    let (u_max, tails) = match &quad.u_max {
        Some(u) => {
            let pieces = (u / &step).ceil();
            let u = pieces * &step;
            if u < rat(1, 1) {
                return Err(Error::QuadratureTooCoarse("cutoff below 1".into()));
            }
            match tails_ok(&u)? {
                Some(t) => (u, t),
                None => return Err(Error::QuadratureTooCoarse(format!("tail beyond u = {u} too large"))),
            }
        }
        None => {
            let mut u = rat(1, 1);
            loop {
                if let Some(t) = tails_ok(&u)? {
                    break (u, t);
                }
                u += &step;
            }
        }
    };

    let n_pieces = (&u_max / &step).to_integer();
    let n_pieces: usize = num_traits::ToPrimitive::to_usize(&n_pieces).unwrap();
    let centers: Vec<Rat> = (0..n_pieces).map(|i| &h * rat(2 * i as i64 + 1, 1)).collect();
    let piece_target = Mag::pow2(-(wp as i64) - 16);
    #[cfg(feature = "parallel")]
    let pieces: Vec<Result<Piece>> = centers.par_iter().map(|c| taylor_piece(c, &h, k, wp, piece_target)).collect();
    #[cfg(not(feature = "parallel"))]
    let pieces: Vec<Result<Piece>> = centers.iter().map(|c| taylor_piece(c, &h, k, wp, piece_target)).collect();

    // ∫_{-h}^{h} t^j dt for even j
    let hb = Ball::from_rat(&h, wp);
    let max_pow = k + 2 * m_max + 1;
    let mut hpow = Vec::with_capacity(max_pow + 1);
    let mut v = hb.mul_2exp(1);
    for j in 0..=max_pow {
        hpow.push(if j % 2 == 0 { v.div_i64(j as i64 + 1) } else { Ball::zero(wp) });
        v = &v * &hb;
    }
    let mut moments = vec![Ball::zero(wp); m_max + 1];
    let two_h = Ball::from_rat(&step, 64);
    for piece in pieces {
        let piece = piece?;
        let c = Ball::from_rat(&piece.center, wp);
        let far = Ball::from_rat(&(&piece.center + &h), 64);
        // (c+t)^{2m}, updated by (c+t)^2 each step
        let mut w = vec![Ball::one(wp)];
        let sq = [c.sqr(), c.mul_2exp(1), Ball::one(wp)];
        for (m, slot) in moments.iter_mut().enumerate() {
            if m > 0 {
                w = series::mul(&w, &sq, w.len() + 2);
            }
            let mut s = Ball::zero(wp);
            for (a, ta) in piece.coeffs.iter().enumerate() {
                for (b, wb) in w.iter().enumerate().skip(a % 2).step_by(2) {
                    s = &s + &(&(ta * wb) * &hpow[a + b]);
                }
            }
            let err = (Ball::exact(piece.err.to_dyadic(), 64) * &two_h * far.pow_u64(2 * m as u64)).mag_upper();
            *slot = &*slot + &s.add_error(err);
        }
    }
    Ok(moments
        .into_iter()
        .zip(tails)
        .map(|(v, t)| v.add_error(t).set_prec(prec))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn near(b: &Ball, v: f64, rel: f64) -> bool {
        ((b.to_f64() - v) / v).abs() < rel
    }

    #[test]
    fn density_values() {
        let p0 = phi_density(&Ball::zero(128), 128).unwrap();
        assert!(near(&p0, 0.44669690046712344, 1e-15), "{p0}");
        assert!(p0.rad() < Mag::pow2(-120));
        // single n = 1 term at u = 0
        let pi = elementary::pi(128);
        let t1 = (&(pi.sqr().mul_2exp(1)) - &pi.mul_i64(3)) * elementary::exp(&-&pi).unwrap();
        assert!((&p0 - &t1).is_positive());
        let far = phi_density(&Ball::from_i64(4, 128), 128).unwrap();
        assert!(far.upper().to_f64() < 1e-30);
        assert!(phi_density(&Ball::from_i64(-1, 64), 64).is_err());
    }

    #[test]
    fn low_moments() {
        let q = QuadratureSpec { pieces_per_unit: 16, u_max: None };
        let m = phi_moments(2, 96, &q).unwrap();
        let s = Ball::from_i64(4, 64);
        assert!(near(&(&m[0] * &s), 0.4971207781883141, 1e-15));
        assert!(near(&(&m[1] * &s), 0.022971944315145437535, 1e-15));
        assert!(near(&(&m[2] * &s), 0.0029628484336876321654, 1e-15));
        assert!(m.iter().all(|v| v.rad() < Mag::pow2(-96)));
    }

    #[test]
    fn refinement_agrees() {
        let coarse = phi_moments(6, 80, &QuadratureSpec { pieces_per_unit: 8, u_max: None }).unwrap();
        let fine = phi_moments(6, 80, &QuadratureSpec { pieces_per_unit: 16, u_max: Some(rat(3, 1)) }).unwrap();
        for (a, b) in coarse.iter().zip(&fine) {
            assert!(a.overlaps(b));
        }
        let short = QuadratureSpec { pieces_per_unit: 8, u_max: Some(rat(1, 1)) };
        assert!(matches!(phi_moments(2, 80, &short), Err(Error::QuadratureTooCoarse(_))));
    }
}
