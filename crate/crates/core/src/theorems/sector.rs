use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rand::Rng;
use serde::Serialize;

use super::{coeff_strings, par_map, trial_rng, Counterexample, Mode, Outcome, SuiteReport, TrialConfig};
use crate::numeric::{rat, rat_floor, rat_int, Ball, CBall, Rat};
use crate::poly::Poly;
use crate::roots::{
    all_roots, gauss_lucas_check, is_hyperbolic_ball, is_hyperbolic_exact, region_contains,
    sector_square_member, sector_square_member_exact, Agreement, GaussLucas, Membership,
    RegionSpec, RegionVerdict, Status,
};
use crate::{Error, Result};

/// A real polynomial together with its exact zeros: real roots and
/// upper-half-plane representatives `(x, y)` of conjugate pairs.
#[derive(Clone, Debug)]
pub struct SectorPoly {
    pub lead: Rat,
    pub real_roots: Vec<Rat>,
    pub pairs: Vec<(Rat, Rat)>,
    pub poly: Poly<Rat>,
}

impl SectorPoly {
    pub fn from_parts(lead: Rat, real_roots: Vec<Rat>, pairs: Vec<(Rat, Rat)>) -> SectorPoly {
        let mut poly = Poly::from_roots(&real_roots).scale(&lead);
        for (x, y) in &pairs {
            // (z - a)(z - conj a)
            let q = Poly::new(vec![x * x + y * y, rat_int(-2) * x, Rat::one()]);
            poly = poly.mul(&q);
        }
        SectorPoly { lead, real_roots, pairs, poly }
    }

    pub fn degree(&self) -> usize {
        self.real_roots.len() + 2 * self.pairs.len()
    }

    /// `|Im a| <= δ|a|` for every zero, decided exactly.
    pub fn in_sector_exact(&self, delta_sq: &Rat) -> bool {
        let one = Rat::one();
        self.pairs.iter().all(|(x, y)| y * y * (&one - delta_sq) <= delta_sq * x * x)
    }

    fn without_real(&self, i: usize) -> SectorPoly {
        let mut r = self.real_roots.clone();
        r.remove(i);
        SectorPoly::from_parts(self.lead.clone(), r, self.pairs.clone())
    }

    fn without_pair(&self, i: usize) -> SectorPoly {
        let mut p = self.pairs.clone();
        p.remove(i);
        SectorPoly::from_parts(self.lead.clone(), self.real_roots.clone(), p)
    }
}

fn small_rat<R: Rng>(rng: &mut R, bound: i64, max_den: i64) -> Rat {
    let den = rng.gen_range(1..=max_den);
    rat(rng.gen_range(-bound * den..=bound * den), den)
}

fn nonzero_lead<R: Rng>(rng: &mut R) -> Rat {
    let n = rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 };
    rat(n, rng.gen_range(1..=3))
}

/// Largest `k/1024` not exceeding `sqrt(r)`.
fn sqrt_lower(r: &Rat) -> Rat {
    let approx = r.to_f64().unwrap_or(0.0).sqrt();
    let mut k = (approx * 1024.0).floor().max(0.0) as i64;
    while k > 0 && rat(k, 1024) * rat(k, 1024) > *r {
        k -= 1;
    }
    rat(k, 1024)
}

/// Random real polynomial of degree `deg` whose zeros `a` satisfy
/// `|Im a| <= 0.95 δ|a|`, with `δ^2 = delta_sq <= 1`.
pub fn random_sector_poly<R: Rng>(deg: usize, delta_sq: &Rat, rng: &mut R) -> SectorPoly {
    // y = u x with u^2 <= s^2 δ^2 / (1 - s^2 δ^2), s = 0.95
    let s2d2 = rat(361, 400) * delta_sq;
    let slope = sqrt_lower(&(&s2d2 / (Rat::one() - &s2d2)));
    let mut real_roots = Vec::new();
    let mut pairs = Vec::new();
    let mut left = deg;
    while left > 0 {
        let x = small_rat(rng, 10, 6);
        if left >= 2 && rng.gen_bool(0.5) {
            let u = &slope * rat(rng.gen_range(0..=64), 64);
            pairs.push((x.clone(), (&x * u).abs()));
            left -= 2;
        } else {
            real_roots.push(x);
            left -= 1;
        }
    }
    SectorPoly::from_parts(nonzero_lead(rng), real_roots, pairs)
}

/// Random real-rooted polynomial with roots uniform on `[-10, 10]`
/// (denominators at most 8).
pub fn random_hyperbolic<R: Rng>(deg: usize, rng: &mut R) -> (Poly<Rat>, Vec<Rat>) {
    let roots: Vec<Rat> = (0..deg).map(|_| small_rat(rng, 10, 8)).collect();
    let lead = nonzero_lead(rng);
    (Poly::from_roots(&roots).scale(&lead), roots)
}

fn composition_status(p: &Poly<Rat>, q: &Poly<Rat>, mode: Mode, prec: u32) -> Result<Option<Status>> {
    let r = p.compose_obreschkoff(q);
    if r.is_zero() {
        return Ok(None);
    }
    Ok(Some(match mode {
        Mode::Exact => is_hyperbolic_exact(&r)?.status,
        Mode::Ball => is_hyperbolic_ball(&r.to_ball(prec))?.status,
    }))
}

fn fails(p: &SectorPoly, q_lead: &Rat, q_roots: &[Rat], mode: Mode, prec: u32) -> bool {
    let q = Poly::from_roots(q_roots).scale(q_lead);
    matches!(composition_status(&p.poly, &q, mode, prec), Ok(Some(Status::NotHyperbolic)))
}

/// Greedy deletion of zeros while the failure persists. Deleting zeros keeps
/// every hypothesis intact.
fn minimize(mut p: SectorPoly, q_lead: &Rat, mut q: Vec<Rat>, mode: Mode, prec: u32) -> (SectorPoly, Vec<Rat>) {
    loop {
        let mut changed = false;
        for i in (0..p.real_roots.len()).rev() {
            let c = p.without_real(i);
            if fails(&c, q_lead, &q, mode, prec) {
                p = c;
                changed = true;
            }
        }
        for i in (0..p.pairs.len()).rev() {
            let c = p.without_pair(i);
            if fails(&c, q_lead, &q, mode, prec) {
                p = c;
                changed = true;
            }
        }
        for i in (0..q.len()).rev() {
            let mut c = q.clone();
            c.remove(i);
            if fails(&p, q_lead, &c, mode, prec) {
                q = c;
                changed = true;
            }
        }
        if !changed {
            return (p, q);
        }
    }
}

fn pick<R: Rng>(rng: &mut R, range: (usize, usize)) -> usize {
    rng.gen_range(range.0..=range.1)
}

/// Randomized check that `P(D)Q` is hyperbolic whenever the zeros of `P` lie
/// in `S(δ)`, `Q` is hyperbolic and `deg Q <= δ^-2`.
pub fn verify_theorem3(cfg: &TrialConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let cap = rat_floor(&(Rat::one() / &cfg.delta_sq));
    if BigInt::from(cfg.deg_q.1) > cap {
        return Err(Error::HypothesisViolation(format!(
            "deg Q up to {} exceeds floor(delta^-2) = {cap}",
            cfg.deg_q.1
        )));
    }
    let outcomes = par_map(cfg.trials, |i| -> Result<Outcome> {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let p = random_sector_poly(pick(&mut rng, cfg.deg_p), &cfg.delta_sq, &mut rng);
        debug_assert!(p.in_sector_exact(&cfg.delta_sq));
        let (q, q_roots) = random_hyperbolic(pick(&mut rng, cfg.deg_q), &mut rng);
        Ok(match composition_status(&p.poly, &q, cfg.mode, cfg.prec)? {
            None => Outcome::Vacuous,
            Some(Status::Hyperbolic) => Outcome::Pass,
            Some(Status::Indeterminate) => Outcome::Indeterminate,
            Some(Status::NotHyperbolic) => {
                let q_lead = q.leading().clone();
                let (mp, mq) = minimize(p, &q_lead, q_roots, cfg.mode, cfg.prec);
                Outcome::Fail(Counterexample {
                    trial: i,
                    detail: "P(D)Q has a nonreal zero".into(),
                    p: coeff_strings(&mp.poly),
                    q: coeff_strings(&Poly::from_roots(&mq).scale(&q_lead)),
                })
            }
        })
    });
    let mut report = SuiteReport::new("theorem3", cfg.seed, cfg.trials);
    for o in outcomes {
        report.record(o?);
    }
    report.notes.push(format!("delta^2 = {}, deg P in {:?}, deg Q in {:?}", cfg.delta_sq, cfg.deg_p, cfg.deg_q));
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct CorollaryReport {
    pub d: usize,
    /// `J(P; d)` equals the reversed `P(D) z^d`, coefficient by coefficient.
    pub identity: bool,
    /// Zeros of `P` in `S(δ)`; `None` when no sector was given.
    pub in_sector: Option<Membership>,
    /// `d <= δ^-2`
    pub within_degree_bound: Option<bool>,
    /// Hyperbolicity of `J(P; d)`; `None` for the zero polynomial.
    pub verdict: Option<Status>,
    pub jensen: Vec<String>,
}

impl CorollaryReport {
    /// Both hypotheses are certified.
    pub fn hypotheses_hold(&self) -> bool {
        self.in_sector == Some(Membership::Yes) && self.within_degree_bound == Some(true)
    }

    /// No certified hypothesis is contradicted by the verdict.
    pub fn consistent(&self) -> bool {
        self.identity && (!self.hypotheses_hold() || matches!(self.verdict, Some(Status::Hyperbolic) | None))
    }
}

fn corollary_core(p: &Poly<Rat>, d: usize, delta_sq: Option<&Rat>, in_sector: Option<Membership>) -> Result<CorollaryReport> {
    let jensen = p.jet_to(d).jensen(0, d)?;
    let reversed = p.compose_obreschkoff(&Poly::monomial(d, 0)).reverse(d)?;
    let verdict = if jensen.is_zero() { None } else { Some(is_hyperbolic_exact(&jensen)?.status) };
    Ok(CorollaryReport {
        d,
        identity: jensen == reversed,
        in_sector,
        within_degree_bound: delta_sq.map(|s| rat_int(d as i64) * s <= Rat::one()),
        verdict,
        jensen: coeff_strings(&jensen),
    })
}

/// Reversal identity and, given `δ^2`, the hyperbolicity claim for `J(P; d)`.
/// Sector membership of the zeros is certified from root enclosures, so zeros
/// on the sector boundary give `Indeterminate`.
pub fn verify_corollary(p: &Poly<Rat>, d: usize, delta_sq: Option<&Rat>, prec: u32) -> Result<CorollaryReport> {
    let in_sector = match delta_sq {
        None => None,
        Some(s) => Some(if p.degree()? == 0 {
            Membership::Yes
        } else {
            let delta = Ball::from_rat(s, prec).sqrt()?;
            match region_contains(&all_roots(p, prec)?, &RegionSpec::Sector(delta)) {
                RegionVerdict::Yes => Membership::Yes,
                RegionVerdict::No(_) => Membership::No,
                RegionVerdict::Indeterminate => Membership::Indeterminate,
            }
        }),
    };
    corollary_core(p, d, delta_sq, in_sector)
}

/// [`verify_corollary`] with sector membership decided from known zeros.
pub fn verify_corollary_known(p: &SectorPoly, d: usize, delta_sq: &Rat) -> Result<CorollaryReport> {
    let m = if p.in_sector_exact(delta_sq) { Membership::Yes } else { Membership::No };
    corollary_core(&p.poly, d, Some(delta_sq), Some(m))
}

/// Random `(P, d)` pairs with `P` from [`random_sector_poly`] and
/// `deg P <= d <= deg P + 4`.
pub fn verify_corollary_suite(cfg: &TrialConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let outcomes = par_map(cfg.trials, |i| -> Result<(Outcome, bool)> {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let p = random_sector_poly(pick(&mut rng, cfg.deg_p), &cfg.delta_sq, &mut rng);
        let d = p.degree() + rng.gen_range(0..=4);
        let r = verify_corollary_known(&p, d, &cfg.delta_sq)?;
        let outcome = if r.consistent() {
            Outcome::Pass
        } else {
            Outcome::Fail(Counterexample {
                trial: i,
                detail: if r.identity { format!("J(P;{d}) not hyperbolic") } else { format!("identity fails at d = {d}") },
                p: coeff_strings(&p.poly),
                q: vec![],
            })
        };
        Ok((outcome, r.hypotheses_hold()))
    });
    let mut report = SuiteReport::new("corollary", cfg.seed, cfg.trials);
    let mut claimed = 0;
    for o in outcomes {
        let (o, h) = o?;
        claimed += h as usize;
        report.record(o);
    }
    report.notes.push(format!("hyperbolicity claim applied in {claimed} trials"));
    Ok(report)
}

/// Compares `z ∈ S(δ)` with `z^2 ∈ S̃` for random `z` with `1/4 <= |Re z|, |Im z|`
/// bounded by 4, exactly and in ball arithmetic. One sample in eight is
/// placed on the sector boundary when the boundary slope is rational.
pub fn verify_sector_squaring(seed: u64, samples: usize, deltas_sq: &[Rat], prec: u32) -> Result<SuiteReport> {
    for s in deltas_sq {
        if !s.is_positive() || *s > rat(1, 2) {
            return Err(Error::InvalidArgument(format!("delta^2 = {s} outside (0, 1/2]")));
        }
    }
    let outcomes = par_map(samples, |i| -> Result<Outcome> {
        let mut rng = trial_rng(seed, i as u64);
        let s = &deltas_sq[i % deltas_sq.len()];
        let x = small_rat(&mut rng, 4, 64);
        let slope_sq = s / (Rat::one() - s);
        let slope = sqrt_lower(&slope_sq);
        let y = if &slope * &slope == slope_sq && rng.gen_range(0..8) == 0 {
            &x * &slope * if rng.gen_bool(0.5) { rat_int(1) } else { rat_int(-1) }
        } else {
            small_rat(&mut rng, 4, 64)
        };
        let exact = sector_square_member_exact(&x, &y, s)?;
        let delta = Ball::from_rat(s, prec).sqrt()?;
        let ball = sector_square_member(&CBall::from_rats(&x, &y, prec), &delta)?;
        let contradicts = |a: Membership, b: Membership| {
            a != Membership::Indeterminate && b != Membership::Indeterminate && a != b
        };
        Ok(
            if exact.agreement == Agreement::Disagree
                || ball.agreement == Agreement::Disagree
                || contradicts(exact.in_sector, ball.in_sector)
            {
                Outcome::Fail(Counterexample {
                    trial: i,
                    detail: format!("z = {x} + {y} i, delta^2 = {s}: exact {exact:?}, ball {ball:?}"),
                    p: vec![],
                    q: vec![],
                })
            } else {
                Outcome::Pass
            },
        )
    });
    let mut report = SuiteReport::new("sector_squaring", seed, samples);
    for o in outcomes {
        report.record(o?);
    }
    Ok(report)
}

/// Critical points of random rational polynomials against the hull of
/// their zeros.
pub fn verify_gauss_lucas(cfg: &TrialConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    if cfg.deg_p.0 < 2 {
        return Err(Error::InvalidArgument("Gauss-Lucas suite needs degree at least 2".into()));
    }
    let outcomes = par_map(cfg.trials, |i| -> Result<Outcome> {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let deg = pick(&mut rng, cfg.deg_p);
        let mut c: Vec<Rat> = (0..deg).map(|_| small_rat(&mut rng, 10, 8)).collect();
        c.push(nonzero_lead(&mut rng));
        let p = Poly::new(c);
        Ok(match gauss_lucas_check(&p, cfg.prec)? {
            GaussLucas::Pass => Outcome::Pass,
            GaussLucas::Indeterminate => Outcome::Indeterminate,
            GaussLucas::Fail(d) => Outcome::Fail(Counterexample {
                trial: i,
                detail: format!("critical point near {} + {} i outside the hull", d.re.to_f64(), d.im.to_f64()),
                p: coeff_strings(&p),
                q: vec![],
            }),
        })
    });
    let mut report = SuiteReport::new("gauss_lucas", cfg.seed, cfg.trials);
    for o in outcomes {
        report.record(o?);
    }
    Ok(report)
}
