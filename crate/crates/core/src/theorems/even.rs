//! Desk-scale harness for even functions with zeros in a gapped strip.
//!
//! Even polynomials stand in for even transcendental entire functions: the
//! argument (Gauss–Lucas inside a half sector, then the sector corollary)
//! never uses transcendence, so the harness checks the mechanism and the
//! conclusion on polynomials.

use num_traits::One;
use rand::Rng;
use serde::Serialize;

use super::bounds::{strip_constants, StripConstants};
use super::{coeff_strings, par_map, trial_rng, Counterexample, Mode, TrialConfig};
use crate::numeric::{rat, rat_floor, rat_int, Ball, Rat};
use crate::poly::Poly;
use crate::roots::{
    all_roots, gauss_lucas_check, is_hyperbolic_ball, is_hyperbolic_exact, region_contains,
    GaussLucas, RegionSpec, RegionVerdict, Status,
};
use crate::{Error, Result};
use num_traits::ToPrimitive;

/// `f(z) = f0(z^2)` with zeros `±r` and `±x ± iy`, `x >= T`, `0 < y < 1/2`.
#[derive(Clone, Debug)]
pub struct EvenStripPoly {
    pub real_zeros: Vec<Rat>,
    pub strip_zeros: Vec<(Rat, Rat)>,
    pub f0: Poly<Rat>,
    pub f: Poly<Rat>,
}

impl EvenStripPoly {
    pub fn from_parts(lead: Rat, real_zeros: Vec<Rat>, strip_zeros: Vec<(Rat, Rat)>) -> EvenStripPoly {
        let squares: Vec<Rat> = real_zeros.iter().map(|r| r * r).collect();
        let mut f0 = Poly::from_roots(&squares).scale(&lead);
        for (x, y) in &strip_zeros {
            // (w - a^2)(w - conj(a)^2)
            let m = x * x + y * y;
            f0 = f0.mul(&Poly::new(vec![&m * &m, rat_int(-2) * (x * x - y * y), Rat::one()]));
        }
        let f = f0.substitute_power(2);
        EvenStripPoly { real_zeros, strip_zeros, f0, f }
    }

    /// Every zero lies in `{|Im z| < 1/2, |Re z| >= T} ∪ R`, decided exactly.
    pub fn in_strip(&self, t: &Rat) -> bool {
        let half = rat(1, 2);
        self.strip_zeros.iter().all(|(x, y)| x >= t && *y > rat(0, 1) && *y < half)
    }
}

/// Random instance with `deg f0 = deg0`, of which `quartets` factors carry
/// nonreal zeros.
pub fn even_strip_poly<R: Rng>(t: &Rat, deg0: usize, quartets: usize, rng: &mut R) -> EvenStripPoly {
    let quartets = quartets.min(deg0 / 2);
    let strip = (0..quartets)
        .map(|_| {
            let x = t + rat(rng.gen_range(0..=24), rng.gen_range(1..=8));
            (x, rat(rng.gen_range(1..=7), 16))
        })
        .collect();
    let real = (0..deg0 - 2 * quartets)
        .map(|_| {
            let den = rng.gen_range(1..=6);
            rat(rng.gen_range(1..=8 * den), den)
        })
        .collect();
    let lead = rat(rng.gen_range(1..=5), rng.gen_range(1..=3));
    EvenStripPoly::from_parts(lead, real, strip)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Theorem4Report {
    pub t: String,
    pub seed: u64,
    pub trials: usize,
    pub d_max: u64,
    pub delta_sq: String,
    pub delta_tilde: String,
    pub jensen_checked: usize,
    pub jensen_hyperbolic: usize,
    /// Jensen polynomials that vanish identically.
    pub jensen_vacuous: usize,
    pub jensen_indeterminate: usize,
    pub identities_checked: usize,
    pub identities_exact: usize,
    pub containment_checked: usize,
    pub containment_yes: usize,
    pub containment_indeterminate: usize,
    pub gauss_lucas_pass: usize,
    pub gauss_lucas_indeterminate: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl Theorem4Report {
    pub fn is_clean(&self) -> bool {
        self.counterexamples.is_empty()
            && self.jensen_indeterminate == 0
            && self.identities_exact == self.identities_checked
            && self.containment_yes == self.containment_checked
            && self.gauss_lucas_indeterminate == 0
    }
}

#[derive(Default)]
struct TrialTally {
    jensen: [usize; 4],
    identities: [usize; 2],
    containment: [usize; 3],
    gauss_lucas: [usize; 2],
    failures: Vec<Counterexample>,
}

/// Derivative identities of `f(z) = f0(z^2)` and of `g = z f0'^2`.
fn identities_hold(f0: &Poly<Rat>) -> bool {
    let two = rat_int(2);
    let z = Poly::monomial(1, 0);
    let f = f0.substitute_power(2);
    let d1 = f0.differentiate(1);
    let d2 = f0.differentiate(2);
    let first = f.differentiate(1) == z.mul(&d1.substitute_power(2)).scale(&two);
    let inner = d1.substitute_power(2).add(&Poly::monomial(2, 0).mul(&d2.substitute_power(2)).scale(&two));
    let second = f.differentiate(2) == inner.scale(&two);
    let g = z.mul(&d1).mul(&d1);
    let third = g.differentiate(1) == d1.mul(&d1.add(&z.mul(&d2).scale(&two)));
    first && second && third
}

fn run_trial(
    inst: &EvenStripPoly,
    trial: usize,
    d_max: usize,
    delta_tilde: &Ball,
    mode: Mode,
    prec: u32,
) -> Result<TrialTally> {
    let mut tally = TrialTally::default();
    let deg = inst.f.degree()?;
    let fail = |detail: String| Counterexample { trial, detail, p: coeff_strings(&inst.f), q: vec![] };
    let jet = inst.f.jet_to(deg + d_max);
    for n in 0..=deg {
        for d in 1..=d_max {
            tally.jensen[0] += 1;
            let j = jet.jensen(n, d)?;
            if j.is_zero() {
                tally.jensen[2] += 1;
                continue;
            }
            let status = match mode {
                Mode::Exact => is_hyperbolic_exact(&j)?.status,
                Mode::Ball => is_hyperbolic_ball(&j.to_ball(prec))?.status,
            };
            match status {
                Status::Hyperbolic => tally.jensen[1] += 1,
                Status::Indeterminate => tally.jensen[3] += 1,
                Status::NotHyperbolic => tally.failures.push(fail(format!("J(f^({n}); {d}) not hyperbolic"))),
            }
        }
    }
    // the induction runs over the even derivatives f^(2k), whose half forms
    // are the derivatives f0^(k) up to the factor (2k)!/k!
    let deg0 = inst.f0.degree()?;
    let region = RegionSpec::HalfSector(delta_tilde.clone());
    for k in 0..=deg0 {
        let g0 = inst.f0.differentiate(k);
        tally.identities[0] += 1;
        if identities_hold(&g0) {
            tally.identities[1] += 1;
        } else {
            tally.failures.push(fail(format!("derivative identity fails for f0^({k})")));
        }
        if k == deg0 {
            continue;
        }
        tally.containment[0] += 1;
        match region_contains(&all_roots(&g0, prec)?, &region) {
            RegionVerdict::Yes => tally.containment[1] += 1,
            RegionVerdict::Indeterminate => tally.containment[2] += 1,
            RegionVerdict::No(d) => tally.failures.push(fail(format!(
                "zero of f0^({k}) near {} + {} i outside the half sector",
                d.re.to_f64(),
                d.im.to_f64()
            ))),
        }
        if deg0 - k >= 2 {
            match gauss_lucas_check(&g0, prec)? {
                GaussLucas::Pass => tally.gauss_lucas[0] += 1,
                GaussLucas::Indeterminate => tally.gauss_lucas[1] += 1,
                GaussLucas::Fail(_) => tally.failures.push(fail(format!("Gauss-Lucas fails for f0^({k})"))),
            }
        }
    }
    Ok(tally)
}

/// Constructs `cfg.trials` even polynomials with half-form degree in
/// `cfg.deg_p` and zeros in the gapped strip for `T`, then checks every
/// `J(f^(n); d)`, `d <= 1 + 4T^2`, together with the intermediate claims.
pub fn verify_theorem4(cfg: &TrialConfig, t: &Rat) -> Result<Theorem4Report> {
    let (c, d_max) = setup(t, cfg.prec)?;
    cfg.validate()?;
    if cfg.deg_p.0 == 0 {
        return Err(Error::InvalidArgument("half-form degree must be at least 1".into()));
    }
    let delta_tilde = Ball::from_rat(&c.delta_tilde, cfg.prec);
    let tallies = par_map(cfg.trials, |i| -> Result<TrialTally> {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let deg0 = rng.gen_range(cfg.deg_p.0..=cfg.deg_p.1);
        // every fourth instance is real-rooted
        let quartets = if i % 4 == 3 { 0 } else { rng.gen_range(1..=(deg0 / 2).max(1)) };
        let inst = even_strip_poly(t, deg0, quartets, &mut rng);
        debug_assert!(inst.in_strip(t));
        run_trial(&inst, i, d_max, &delta_tilde, cfg.mode, cfg.prec)
    });
    let mut r = Theorem4Report::header(t, &c, d_max, cfg.seed, cfg.trials);
    for tally in tallies {
        r.absorb(tally?);
    }
    Ok(r)
}

/// The checks of [`verify_theorem4`] on one given instance.
pub fn check_even_instance(inst: &EvenStripPoly, t: &Rat, mode: Mode, prec: u32) -> Result<Theorem4Report> {
    let (c, d_max) = setup(t, prec)?;
    if !inst.in_strip(t) {
        return Err(Error::HypothesisViolation(format!("zeros outside the gapped strip for T = {t}")));
    }
    let delta_tilde = Ball::from_rat(&c.delta_tilde, prec);
    let mut r = Theorem4Report::header(t, &c, d_max, 0, 1);
    r.absorb(run_trial(inst, 0, d_max, &delta_tilde, mode, prec)?);
    Ok(r)
}

fn setup(t: &Rat, prec: u32) -> Result<(StripConstants, usize)> {
    if *t < rat(1, 2) {
        return Err(Error::HypothesisViolation(format!("T = {t} is below 1/2")));
    }
    let c = strip_constants(t, prec)?;
    let d_max = rat_floor(&(Rat::one() + rat(4, 1) * t * t))
        .to_usize()
        .filter(|&d| d <= 4096)
        .ok_or_else(|| Error::InvalidArgument(format!("1 + 4T^2 too large for a grid at T = {t}")))?;
    Ok((c, d_max))
}

impl Theorem4Report {
    fn header(t: &Rat, c: &StripConstants, d_max: usize, seed: u64, trials: usize) -> Self {
        Theorem4Report {
            t: t.to_string(),
            seed,
            trials,
            d_max: d_max as u64,
            delta_sq: c.delta_sq.to_string(),
            delta_tilde: c.delta_tilde.to_string(),
            ..Default::default()
        }
    }

    fn absorb(&mut self, tally: TrialTally) {
        self.jensen_checked += tally.jensen[0];
        self.jensen_hyperbolic += tally.jensen[1];
        self.jensen_vacuous += tally.jensen[2];
        self.jensen_indeterminate += tally.jensen[3];
        self.identities_checked += tally.identities[0];
        self.identities_exact += tally.identities[1];
        self.containment_checked += tally.containment[0];
        self.containment_yes += tally.containment[1];
        self.containment_indeterminate += tally.containment[2];
        self.gauss_lucas_pass += tally.gauss_lucas[0];
        self.gauss_lucas_indeterminate += tally.gauss_lucas[1];
        self.counterexamples.extend(tally.failures);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructed_instance() {
        // nonreal zeros at ±(T+1) ± 0.4i with T = 1, plus real zeros ±2
        let t = rat_int(1);
        let inst = EvenStripPoly::from_parts(rat_int(1), vec![rat_int(2)], vec![(rat_int(2), rat(2, 5))]);
        assert!(inst.in_strip(&t));
        assert_eq!(inst.f.degree().unwrap(), 6);
        let delta_tilde = Ball::from_rat(&rat(4, 5), 128);
        let tally = run_trial(&inst, 0, 5, &delta_tilde, Mode::Exact, 128).unwrap();
        assert!(tally.failures.is_empty());
        assert_eq!(tally.jensen[0], 7 * 5);
        assert_eq!(tally.jensen[1] + tally.jensen[2], 7 * 5);
        assert_eq!(tally.containment[1], tally.containment[0]);
    }

    #[test]
    fn hypothesis_and_small_suite() {
        let cfg = TrialConfig { seed: 5, trials: 8, deg_p: (2, 4), ..Default::default() };
        assert!(matches!(verify_theorem4(&cfg, &rat(1, 4)), Err(Error::HypothesisViolation(_))));
        for t in [rat(1, 2), rat_int(1)] {
            let r = verify_theorem4(&cfg, &t).unwrap();
            assert!(r.is_clean(), "{r:?}");
        }
    }

    #[test]
    fn identities_hold_for_a_cubic() {
        let f0 = Poly::new(vec![rat_int(3), rat(-1, 2), rat_int(1), rat_int(2)]);
        assert!(identities_hold(&f0));
    }
}
