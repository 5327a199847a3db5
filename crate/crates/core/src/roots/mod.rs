//! Real-root counting, hyperbolicity certificates, certified root
//! enclosures and region membership.

mod aberth;
mod hull;
mod region;
mod sturm;

pub use aberth::{all_roots, RootDisk, RootSet};
pub use hull::{convex_hull, gauss_lucas_check, hull_dist_sq, GaussLucas};
pub use region::{
    disk_membership, region_contains, sector_square_member, sector_square_member_exact, Agreement,
    Membership, RegionSpec, RegionVerdict, SquareCheck,
};
pub use sturm::{squarefree_part, sturm_chain, sturm_count, Endpoint};

use serde::{Deserialize, Serialize};

use crate::numeric::{Ball, BallSign, CBall, Dyadic, Mag, Rat, RealScalar};
use crate::poly::{Poly, RealPoly};
use crate::Result;

const WITNESS_PREC: u32 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Hyperbolic,
    NotHyperbolic,
    Indeterminate,
}

#[derive(Clone, Debug)]
pub struct HyperbolicityVerdict {
    pub status: Status,
    /// Enclosure of a root off the real axis.
    pub witness: Option<CBall>,
    /// For undecided cases: largest root-enclosure radius met.
    pub margin: Option<Ball>,
}

impl HyperbolicityVerdict {
    fn hyperbolic() -> Self {
        HyperbolicityVerdict { status: Status::Hyperbolic, witness: None, margin: None }
    }
}

fn nonreal_witness<S: RealScalar>(p: &Poly<S>, prec: u32) -> Option<CBall> {
    let rs = all_roots(p, prec).ok()?;
    if !rs.certified {
        return None;
    }
    rs.disks.iter().find(|d| d.is_nonreal()).map(|d| d.enclosure(rs.prec))
}

/// Exact decision by Sturm counting on the square-free part.
pub fn is_hyperbolic_exact(p: &Poly<Rat>) -> Result<HyperbolicityVerdict> {
    let deg = p.degree()?;
    if deg == 0 {
        return Ok(HyperbolicityVerdict::hyperbolic());
    }
    let sqf = squarefree_part(p);
    if sturm_count(&sqf, &Endpoint::NegInf, &Endpoint::PosInf) == sqf.formal_degree() {
        return Ok(HyperbolicityVerdict::hyperbolic());
    }
    let witness = nonreal_witness(&sqf, WITNESS_PREC).or_else(|| nonreal_witness(&sqf, 4 * WITNESS_PREC));
    Ok(HyperbolicityVerdict { status: Status::NotHyperbolic, witness, margin: None })
}

fn sign_of(p: &Poly<Ball>, x: &Dyadic, prec: u32) -> BallSign {
    p.eval_at(&Ball::exact(x.clone(), prec)).sign()
}

/// Decision valid for every polynomial whose coefficients lie in the balls.
///
/// Hyperbolic is certified by `deg` sign changes along the real line;
/// NotHyperbolic by an inclusion disk that misses the real axis.
pub fn is_hyperbolic_ball(p: &Poly<Ball>) -> Result<HyperbolicityVerdict> {
    let deg = p.degree()?;
    if deg == 0 {
        return Ok(HyperbolicityVerdict::hyperbolic());
    }
    let prec = p.coeffs().iter().map(|c| c.prec()).max().unwrap();
    let rs = all_roots(p, prec)?;
    let lead = p.leading().sign();
    let mut xs: Vec<Dyadic> = Vec::with_capacity(deg);
    for d in &rs.disks {
        for _ in 0..d.multiplicity {
            xs.push(d.re.clone());
        }
    }
    xs.sort();
    let flip = |s: BallSign| match s {
        BallSign::Positive => BallSign::Negative,
        BallSign::Negative => BallSign::Positive,
        z => z,
    };
    let mut signs = vec![if deg % 2 == 0 { lead } else { flip(lead) }];
    for w in xs.windows(2) {
        let mid = w[0].add(&w[1]).mul_2exp(-1);
        signs.push(sign_of(p, &mid, rs.prec));
    }
    signs.push(lead);
    let alternating = signs.iter().all(|s| *s != BallSign::ZeroStraddling)
        && signs.windows(2).all(|w| w[0] != w[1]);
    if alternating {
        return Ok(HyperbolicityVerdict::hyperbolic());
    }
    if rs.certified {
        if let Some(d) = rs.disks.iter().find(|d| d.is_nonreal()) {
            return Ok(HyperbolicityVerdict {
                status: Status::NotHyperbolic,
                witness: Some(d.enclosure(rs.prec)),
                margin: None,
            });
        }
    }
    let r = if rs.certified { rs.max_radius() } else { Mag::from_u64(1).mul_2exp(60) };
    Ok(HyperbolicityVerdict {
        status: Status::Indeterminate,
        witness: None,
        margin: Some(Ball::exact(r.to_dyadic(), prec)),
    })
}

pub fn is_hyperbolic(p: &RealPoly) -> Result<HyperbolicityVerdict> {
    match p {
        RealPoly::Exact(q) => is_hyperbolic_exact(q),
        RealPoly::Approx(q) => is_hyperbolic_ball(q),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat_int, Rat};
    use crate::Error;

    fn p(c: &[i64]) -> Poly<Rat> {
        Poly::new(c.iter().map(|&v| rat_int(v)).collect())
    }

    #[test]
    fn exact_examples() {
        let v = is_hyperbolic_exact(&p(&[1, 0, 1])).unwrap();
        assert_eq!(v.status, Status::NotHyperbolic);
        let w = v.witness.unwrap();
        assert!(!w.im.contains_zero());
        assert!((w.im.to_f64().abs() - 1.0).abs() < 1e-20);
        let f = Poly::from_roots(&[rat_int(1), rat_int(1), rat_int(-2)]);
        assert_eq!(is_hyperbolic_exact(&f).unwrap().status, Status::Hyperbolic);
        assert_eq!(is_hyperbolic_exact(&p(&[2, 4, 2])).unwrap().status, Status::Hyperbolic);
        assert_eq!(is_hyperbolic_exact(&p(&[5])).unwrap().status, Status::Hyperbolic);
        assert!(is_hyperbolic_exact(&p(&[0])).is_err());
    }

    #[test]
    fn ball_mode() {
        let f = Poly::from_roots(&(1..=6).map(rat_int).collect::<Vec<_>>()).to_ball(128);
        assert_eq!(is_hyperbolic_ball(&f).unwrap().status, Status::Hyperbolic);
        let g = p(&[1, 0, 1]).to_ball(128);
        assert_eq!(is_hyperbolic_ball(&g).unwrap().status, Status::NotHyperbolic);
        let fuzzy = Ball::zero(64).add_error(Mag::pow2(-3));
        let h = Poly::new(vec![Ball::one(64), fuzzy]);
        assert!(matches!(is_hyperbolic_ball(&h), Err(Error::AmbiguousDegree)));
        // double root: sign changes cannot certify it
        let d = p(&[1, 2, 1]).to_ball(128);
        assert_eq!(is_hyperbolic_ball(&d).unwrap().status, Status::Indeterminate);
    }
}
