use num_traits::{Signed, Zero};

use super::{all_roots, RootDisk};
use crate::numeric::{Rat, RealScalar};
use crate::poly::Poly;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub enum GaussLucas {
    Pass,
    /// A certified critical point outside the inflated hull.
    Fail(RootDisk),
    Indeterminate,
}

type Pt = (Rat, Rat);

fn cross(o: &Pt, a: &Pt, b: &Pt) -> Rat {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// Convex hull in counter-clockwise order (monotone chain, exact).
pub fn convex_hull(mut pts: Vec<Pt>) -> Vec<Pt> {
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Pt> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Pt> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn seg_dist_sq(p: &Pt, a: &Pt, b: &Pt) -> Rat {
    let (dx, dy) = (&b.0 - &a.0, &b.1 - &a.1);
    let len = &dx * &dx + &dy * &dy;
    let t = if len.is_zero() {
        Rat::zero()
    } else {
        let t = ((&p.0 - &a.0) * &dx + (&p.1 - &a.1) * &dy) / &len;
        t.max(Rat::zero()).min(Rat::from_integer(1.into()))
    };
    let (qx, qy) = (&a.0 + &t * &dx - &p.0, &a.1 + &t * &dy - &p.1);
    &qx * &qx + &qy * &qy
}

/// Squared distance from a point to a convex hull (zero inside).
pub fn hull_dist_sq(p: &Pt, hull: &[Pt]) -> Rat {
    match hull.len() {
        0 => panic!("empty hull"),
        1 => seg_dist_sq(p, &hull[0], &hull[0]),
        2 => seg_dist_sq(p, &hull[0], &hull[1]),
        n => {
            if (0..n).all(|i| !cross(&hull[i], &hull[(i + 1) % n], p).is_negative()) {
                return Rat::zero();
            }
            (0..n).map(|i| seg_dist_sq(p, &hull[i], &hull[(i + 1) % n])).min().unwrap()
        }
    }
}

/// Checks that the critical points of `P` lie in the convex hull of its
/// roots, with the hull inflated by the enclosure radii.
pub fn gauss_lucas_check<S: RealScalar>(p: &Poly<S>, prec: u32) -> Result<GaussLucas> {
    if p.degree()? < 2 {
        return Err(Error::Degree("need degree at least 2".into()));
    }
    let rp = all_roots(p, prec)?;
    let rq = all_roots(&p.differentiate(1), prec)?;
    if !rp.certified || !rq.certified {
        return Ok(GaussLucas::Indeterminate);
    }
    let hull = convex_hull(rp.disks.iter().map(|d| (d.re.to_rat(), d.im.to_rat())).collect());
    let slack_p = rp.max_radius().to_dyadic().to_rat();
    for d in &rq.disks {
        let allow = &slack_p + d.radius.to_dyadic().to_rat();
        if hull_dist_sq(&(d.re.to_rat(), d.im.to_rat()), &hull) > &allow * &allow {
            return Ok(GaussLucas::Fail(d.clone()));
        }
    }
    Ok(GaussLucas::Pass)
}
