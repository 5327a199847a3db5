use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::{RootDisk, RootSet};
use crate::numeric::{rat, Ball, CBall, NumericError, Rat};

/// Zero-location regions in the complex plane.
#[derive(Clone, Debug)]
pub enum RegionSpec {
    /// `|Im z| < h` (open)
    Strip(Ball),
    /// `|Im z| <= δ|z|` (closed)
    Sector(Ball),
    /// `(|Im z| < 1/2 and |Re z| >= T)` or `z` real
    GappedStrip(Ball),
    /// `(Im z)^2 - 1/4 < Re z` (open)
    Parabolic,
    /// `|Im z| <= δ|z|` and `Re z >= 0`
    HalfSector(Ball),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Yes,
    No,
    Indeterminate,
}

#[derive(Clone, Debug)]
pub enum RegionVerdict {
    Yes,
    No(RootDisk),
    Indeterminate,
}

fn nonneg(b: &Ball) -> bool {
    !b.lower().is_negative()
}

fn neg(b: &Ball) -> bool {
    b.is_negative()
}

fn sector_test(cx: &Ball, cy: &Ball, r: &Ball, delta: &Ball) -> Membership {
    let prec = cx.prec();
    if !(delta.lower() < crate::numeric::Dyadic::one()) {
        return Membership::Yes;
    }
    let comp = &Ball::one(prec) - &delta.sqr();
    let Ok(s) = comp.sqrt() else {
        return Membership::Indeterminate;
    };
    // g = δ|x| - sqrt(1-δ^2)|y| is 1-Lipschitz
    let g = delta * &cx.abs() - &s * &cy.abs();
    if nonneg(&(&g - r)) {
        Membership::Yes
    } else if neg(&(&g + r)) {
        Membership::No
    } else {
        Membership::Indeterminate
    }
}

/// Membership of a whole root disk in a region.
pub fn disk_membership(d: &RootDisk, region: &RegionSpec, prec: u32) -> Membership {
    let cx = Ball::exact(d.re.clone(), prec);
    let cy = Ball::exact(d.im.clone(), prec);
    let r = Ball::exact(d.radius.to_dyadic(), prec);
    let half = Ball::from_rat(&rat(1, 2), prec);
    let quarter = Ball::from_rat(&rat(1, 4), prec);
    let off_axis = d.is_nonreal();
    match region {
        RegionSpec::Strip(h) => {
            if d.real || neg(&(&(&cy.abs() + &r) - h)) {
                Membership::Yes
            } else if nonneg(&(&(&cy.abs() - &r) - h)) {
                Membership::No
            } else {
                Membership::Indeterminate
            }
        }
        RegionSpec::Sector(delta) => {
            if d.real {
                Membership::Yes
            } else {
                sector_test(&cx, &cy, &r, delta)
            }
        }
        RegionSpec::GappedStrip(t) => {
            let in_strip = neg(&(&(&cy.abs() + &r) - &half));
            // |Re z| >= 0 always holds
            let far = !t.upper().is_positive() || nonneg(&(&(&cx.abs() - &r) - t));
            let out_strip = nonneg(&(&(&cy.abs() - &r) - &half));
            let near = neg(&(&(&cx.abs() + &r) - t));
            if d.real || (in_strip && far) {
                Membership::Yes
            } else if off_axis && (out_strip || near) {
                Membership::No
            } else {
                Membership::Indeterminate
            }
        }
        RegionSpec::Parabolic => {
            let ay = cy.abs();
            let (ymin, ymax) = if d.real {
                (Ball::zero(prec), Ball::zero(prec))
            } else {
                let lo = &ay - &r;
                (if lo.is_positive() { lo } else { Ball::zero(prec) }, &ay + &r)
            };
            let lo = &(&(&cx - &r) - &ymax.sqr()) + &quarter;
            let hi = &(&(&cx + &r) - &ymin.sqr()) + &quarter;
            if lo.is_positive() {
                Membership::Yes
            } else if !hi.upper().is_positive() {
                Membership::No
            } else {
                Membership::Indeterminate
            }
        }
        RegionSpec::HalfSector(delta) => {
            let right = nonneg(&(&cx - &r));
            let left = neg(&(&cx + &r));
            let sec = if d.real { Membership::Yes } else { sector_test(&cx, &cy, &r, delta) };
            if sec == Membership::Yes && right {
                Membership::Yes
            } else if sec == Membership::No || left {
                Membership::No
            } else {
                Membership::Indeterminate
            }
        }
    }
}

/// Whether every root of a certified set lies in the region.
pub fn region_contains(rs: &RootSet, region: &RegionSpec) -> RegionVerdict {
    if !rs.certified {
        return RegionVerdict::Indeterminate;
    }
    let mut undecided = false;
    for d in &rs.disks {
        match disk_membership(d, region, rs.prec) {
            Membership::Yes => {}
            Membership::No => return RegionVerdict::No(d.clone()),
            Membership::Indeterminate => undecided = true,
        }
    }
    if undecided {
        RegionVerdict::Indeterminate
    } else {
        RegionVerdict::Yes
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Agreement {
    Agree,
    Disagree,
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareCheck {
    /// `z` in the sector of half-angle `δ`.
    pub in_sector: Membership,
    /// `z^2` in the right half-sector for `2δ sqrt(1-δ^2)`.
    pub square_in_half_sector: Membership,
    pub agreement: Agreement,
}

fn agreement(a: Membership, b: Membership) -> Agreement {
    match (a, b) {
        (Membership::Indeterminate, _) | (_, Membership::Indeterminate) => Agreement::Indeterminate,
        _ if a == b => Agreement::Agree,
        _ => Agreement::Disagree,
    }
}

fn tri_le_zero(b: &Ball) -> Membership {
    if !b.upper().is_positive() {
        Membership::Yes
    } else if b.is_positive() {
        Membership::No
    } else {
        Membership::Indeterminate
    }
}

/// Compares `z ∈ S(δ)` with `z^2 ∈ S̃` over a complex ball, for
/// `0 < δ <= 2^(-1/2)`.
pub fn sector_square_member(z: &CBall, delta: &Ball) -> Result<SquareCheck, NumericError> {
    let prec = z.prec().max(delta.prec());
    let d2 = delta.sqr();
    if !delta.upper().is_positive() || d2.lower().to_rat() > rat(1, 2) {
        return Err(NumericError::Domain("sector parameter outside (0, 2^-1/2]"));
    }
    let (x, y) = (&z.re, &z.im);
    let one = Ball::one(prec);
    // y^2 (1-δ^2) <= δ^2 x^2
    let a = &(&y.sqr() * &(&one - &d2)) - &(&d2 * &x.sqr());
    let in_sector = tri_le_zero(&a);
    let u = &x.sqr() - &y.sqr();
    let v = (x * y).mul_2exp(1);
    let dt2 = (&d2 * &(&one - &d2)).mul_2exp(2);
    let b = &v.sqr() - &(&dt2 * &(&u.sqr() + &v.sqr()));
    let sq = match tri_le_zero(&b) {
        Membership::No => Membership::No,
        _ if u.is_negative() => Membership::No,
        Membership::Yes if nonneg(&u) => Membership::Yes,
        _ => Membership::Indeterminate,
    };
    Ok(SquareCheck { in_sector, square_in_half_sector: sq, agreement: agreement(in_sector, sq) })
}

/// Exact variant of [`sector_square_member`] for `z = x + iy` and a rational
/// `δ^2`.
pub fn sector_square_member_exact(x: &Rat, y: &Rat, delta_sq: &Rat) -> Result<SquareCheck, NumericError> {
    if !delta_sq.is_positive() || *delta_sq > rat(1, 2) {
        return Err(NumericError::Domain("sector parameter outside (0, 2^-1/2]"));
    }
    let one = Rat::one();
    let yes_if = |b: bool| if b { Membership::Yes } else { Membership::No };
    let in_sector = yes_if(y * y * (&one - delta_sq) <= delta_sq * x * x);
    let u = x * x - y * y;
    let v = Rat::from_integer(2.into()) * x * y;
    let dt2 = Rat::from_integer(4.into()) * delta_sq * (&one - delta_sq);
    let sq = yes_if(!u.is_negative() && &v * &v <= &dt2 * (&u * &u + &v * &v));
    Ok(SquareCheck { in_sector, square_in_half_sector: sq, agreement: agreement(in_sector, sq) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat_int, Dyadic, Mag};

    const P: u32 = 128;

    fn disk(re: f64, im: f64) -> RootDisk {
        RootDisk {
            re: Dyadic::from_f64(re).unwrap(),
            im: Dyadic::from_f64(im).unwrap(),
            radius: Mag::pow2(-60),
            multiplicity: 1,
            real: false,
        }
    }

    fn set(d: Vec<RootDisk>) -> RootSet {
        RootSet { degree: d.len(), disks: d, residual: Ball::zero(P), certified: true, prec: P }
    }

    #[test]
    fn examples() {
        let quarter = set(vec![disk(0.0, 0.25), disk(0.0, -0.25)]);
        assert!(matches!(region_contains(&quarter, &RegionSpec::Strip(Ball::from_rat(&rat(1, 2), P))), RegionVerdict::Yes));
        let one_one = set(vec![disk(1.0, 1.0), disk(1.0, -1.0)]);
        assert!(matches!(region_contains(&one_one, &RegionSpec::Sector(Ball::one(P))), RegionVerdict::Yes));
        let i = set(vec![disk(0.0, 1.0)]);
        match region_contains(&i, &RegionSpec::Sector(Ball::from_rat(&rat(1, 2), P))) {
            RegionVerdict::No(w) => assert_eq!(w.im.to_f64(), 1.0),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn gapped_strip_and_parabola() {
        let t = Ball::from_i64(3, P);
        let far = set(vec![disk(4.0, 0.3), disk(4.0, -0.3)]);
        assert!(matches!(region_contains(&far, &RegionSpec::GappedStrip(t.clone())), RegionVerdict::Yes));
        let near = set(vec![disk(2.0, 0.3)]);
        assert!(matches!(region_contains(&near, &RegionSpec::GappedStrip(t)), RegionVerdict::No(_)));
        assert_eq!(disk_membership(&disk(0.0, 0.4), &RegionSpec::Parabolic, P), Membership::Yes);
        assert_eq!(disk_membership(&disk(-1.0, 0.0), &RegionSpec::Parabolic, P), Membership::No);
        assert_eq!(disk_membership(&disk(1.0, 1.5), &RegionSpec::Parabolic, P), Membership::No);
    }

    #[test]
    fn square_check_examples() {
        let half = rat(1, 2);
        let c = sector_square_member_exact(&rat_int(1), &rat_int(1), &half).unwrap();
        assert_eq!(c.agreement, Agreement::Agree);
        assert_eq!(c.in_sector, Membership::Yes);
        let c = sector_square_member_exact(&rat_int(2), &rat_int(0), &half).unwrap();
        assert_eq!((c.in_sector, c.agreement), (Membership::Yes, Agreement::Agree));
        assert!(sector_square_member_exact(&rat_int(1), &rat_int(0), &rat(3, 4)).is_err());
        let z = CBall::from_rats(&rat(3, 1), &rat(1, 1), P);
        let c = sector_square_member(&z, &Ball::from_rat(&rat(1, 2), P)).unwrap();
        assert_eq!((c.in_sector, c.agreement), (Membership::Yes, Agreement::Agree));
        let z = CBall::from_rats(&rat(1, 1), &rat(3, 1), P);
        let c = sector_square_member(&z, &Ball::from_rat(&rat(1, 2), P)).unwrap();
        assert_eq!((c.in_sector, c.agreement), (Membership::No, Agreement::Agree));
    }
}
