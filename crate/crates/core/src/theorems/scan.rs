//! Finite scans of Jensen polynomials and of derivative zeros near the axis.

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::par_map;
use crate::numeric::{elementary, rat, rat_int, Ball, CBall, Mag, Rat, RealScalar};
use crate::poly::{DecayBound, Poly, TaylorJet};
use crate::roots::{
    all_roots, disk_membership, is_hyperbolic_ball, is_hyperbolic_exact, Membership, RegionSpec,
    Status,
};
use crate::{Error, Result};

pub const EMPIRICAL_CAVEAT: &str =
    "empirical within scanned range only: no finite scan certifies a statement about all larger n";

/// Anything that yields Jensen polynomials with a hyperbolicity decision.
pub trait JensenSource: Sync {
    fn max_order(&self) -> usize;
    fn cell(&self, n: usize, d: usize) -> Result<GridCell>;
}

#[derive(Clone, Debug, Serialize)]
pub struct GridCell {
    pub n: usize,
    pub d: usize,
    pub status: Status,
    /// Approximate nonreal zero, for `NotHyperbolic`.
    pub witness: Option<(f64, f64)>,
    /// Largest root-enclosure radius, for `Indeterminate`.
    pub margin: Option<f64>,
}

impl GridCell {
    fn from_verdict(n: usize, d: usize, v: crate::roots::HyperbolicityVerdict) -> GridCell {
        GridCell {
            n,
            d,
            status: v.status,
            witness: v.witness.map(|w| w.to_f64_pair()),
            margin: v.margin.map(|m| m.to_f64()),
        }
    }

    fn undecided(n: usize, d: usize) -> GridCell {
        GridCell { n, d, status: Status::Indeterminate, witness: None, margin: None }
    }
}

impl JensenSource for TaylorJet<Rat> {
    fn max_order(&self) -> usize {
        TaylorJet::max_order(self)
    }

    fn cell(&self, n: usize, d: usize) -> Result<GridCell> {
        let j = self.jensen(n, d)?;
        if j.is_zero() {
            return Ok(GridCell::undecided(n, d));
        }
        Ok(GridCell::from_verdict(n, d, is_hyperbolic_exact(&j)?))
    }
}

impl JensenSource for TaylorJet<Ball> {
    fn max_order(&self) -> usize {
        TaylorJet::max_order(self)
    }

    fn cell(&self, n: usize, d: usize) -> Result<GridCell> {
        match is_hyperbolic_ball(&self.jensen(n, d)?) {
            Ok(v) => Ok(GridCell::from_verdict(n, d, v)),
            Err(Error::AmbiguousDegree) | Err(Error::NonConvergence { .. }) => Ok(GridCell::undecided(n, d)),
            Err(e) => Err(e),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanResult {
    pub label: String,
    pub n_range: (usize, usize),
    pub d_range: (usize, usize),
    /// Row-major in `n`, then `d`.
    pub cells: Vec<GridCell>,
    /// Per `d`: smallest scanned `n` from which every scanned cell is
    /// hyperbolic.
    pub first_all_hyperbolic_n: Vec<(usize, Option<usize>)>,
    pub empirical_only: bool,
    pub caveat: &'static str,
}

impl ScanResult {
    pub fn cell(&self, n: usize, d: usize) -> Option<&GridCell> {
        if n < self.n_range.0 || n > self.n_range.1 || d < self.d_range.0 || d > self.d_range.1 {
            return None;
        }
        let width = self.d_range.1 - self.d_range.0 + 1;
        self.cells.get((n - self.n_range.0) * width + d - self.d_range.0)
    }

    pub fn count(&self, s: Status) -> usize {
        self.cells.iter().filter(|c| c.status == s).count()
    }
}

fn check_range(r: (usize, usize), what: &str) -> Result<()> {
    if r.0 > r.1 {
        return Err(Error::InvalidArgument(format!("empty {what} range {}..{}", r.0, r.1)));
    }
    Ok(())
}

/// Hyperbolicity of `J(f^(n); d)` over a rectangle of `(n, d)`.
pub fn scan_jensen_grid<J: JensenSource>(
    jet: &J,
    label: &str,
    d_range: (usize, usize),
    n_range: (usize, usize),
) -> Result<ScanResult> {
    check_range(d_range, "d")?;
    check_range(n_range, "n")?;
    if n_range.1 + d_range.1 > jet.max_order() {
        return Err(Error::JetTooShort { needed: n_range.1 + d_range.1, available: jet.max_order() });
    }
    let width = d_range.1 - d_range.0 + 1;
    let rows = n_range.1 - n_range.0 + 1;
    let cells = par_map(rows * width, |i| jet.cell(n_range.0 + i / width, d_range.0 + i % width))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let first = (0..width)
        .map(|j| {
            let mut first = None;
            for r in (0..rows).rev() {
                if cells[r * width + j].status != Status::Hyperbolic {
                    break;
                }
                first = Some(n_range.0 + r);
            }
            (d_range.0 + j, first)
        })
        .collect();
    Ok(ScanResult {
        label: label.into(),
        n_range,
        d_range,
        cells,
        first_all_hyperbolic_n: first,
        empirical_only: true,
        caveat: EMPIRICAL_CAVEAT,
    })
}

/// Jet of `(z^2 + 1/16) cos z` to order `m`: two nonreal zeros `±i/4`, all
/// others real. `|f^(k)(0)| <= k(k-1) + 1/16 <= (k+1)^2`.
pub fn quartic_cos_jet(m: usize) -> TaylorJet<Rat> {
    let g = Poly::new(vec![rat(1, 16), Rat::zero(), Rat::one()]);
    TaylorJet::cos(m)
        .times_poly(&g)
        .with_label("(z^2+1/16)cos z")
        .with_order_hint(1.0)
        .with_decay(DecayBound::Polynomial { a: Rat::one(), p: 2 })
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem2Row {
    pub n: usize,
    /// `n^(1/c)`
    pub threshold: f64,
    /// Radius on which the truncation and `f^(n)` provably have equally many
    /// zeros; `None` if no tried radius could be certified.
    pub certified_radius: Option<String>,
    pub tail_bound: Option<f64>,
    /// Truncation zeros whose enclosure lies inside the certified disk.
    pub roots_inside: usize,
    pub nonreal_inside: usize,
    /// Nonreal truncation zeros inside the disk that are certified to miss
    /// the gapped strip.
    pub violations: usize,
    pub undecided: usize,
    /// All truncation zeros inside the disk lie in the gapped strip.
    pub contained: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem2Report {
    pub label: String,
    pub c: String,
    pub radius: String,
    pub trunc: usize,
    pub rows: Vec<Theorem2Row>,
    /// Smallest scanned `n` from which every row is contained. A candidate
    /// only, not the threshold of any theorem.
    pub empirical_n1: Option<usize>,
    /// Zeros reported are zeros of Taylor truncations.
    pub truncation_roots: bool,
    pub empirical_only: bool,
    pub caveat: &'static str,
}

/// Point of the upper half of `|z| = r` at parameter `t in [0, 2]`:
/// `t <= 1` runs through the first quadrant as `((1-t^2), 2t)/(1+t^2)`,
/// `t > 1` through the second by a quarter turn. Exact.
fn circle_point(r: &Rat, t: &Rat) -> (Rat, Rat) {
    let one = Rat::one();
    let (u, turn) = if *t <= one { (t.clone(), false) } else { (t - &one, true) };
    let q = &one + &u * &u;
    let x = r * (&one - &u * &u) / &q;
    let y = r * rat_int(2) * &u / &q;
    if turn { (-y, x) } else { (x, y) }
}

/// Lower bound of `|P|` on the arc between parameters `a < b`, refined by
/// bisection up to `depth` times. A minor arc lies in the disk whose
/// diameter is its chord.
fn arc_lower(p: &Poly<Ball>, r: &Rat, a: &Rat, b: &Rat, need: &Mag, depth: u32, prec: u32) -> Mag {
    let (x0, y0) = circle_point(r, a);
    let (x1, y1) = circle_point(r, b);
    let half = rat(1, 2);
    let (dx, dy) = (&x1 - &x0, &y1 - &y0);
    let chord_sq = Ball::from_rat(&(&dx * &dx + &dy * &dy), prec);
    let spread = chord_sq.sqrt().map(|c| c.mul_2exp(-1).mag_upper()).unwrap_or(Mag::from_u64(1 << 20));
    let z = CBall::from_rats(&((&x0 + &x1) * &half), &((&y0 + &y1) * &half), prec).add_error(spread);
    let low = p.eval(&z).abs().mag_lower();
    if low > *need || depth == 0 {
        return low;
    }
    let m = (a + b) * &half;
    let l = arc_lower(p, r, a, &m, need, depth - 1, prec);
    if !(l > *need) {
        return l;
    }
    let h = arc_lower(p, r, &m, b, need, depth - 1, prec);
    if l < h { l } else { h }
}

/// Lower bound of `|P|` on `|z| = r`; real coefficients make the lower half
/// circle a mirror image. Stops early once the bound drops to `need`.
fn circle_lower(p: &Poly<Ball>, r: &Rat, need: &Mag, prec: u32) -> Mag {
    let arcs = (2 * p.formal_degree()).max(32) as i64;
    let mut low: Option<Mag> = None;
    for j in 0..arcs {
        let l = arc_lower(p, r, &rat(2 * j, arcs), &rat(2 * j + 2, arcs), need, 8, prec);
        if !(l > *need) {
            return l;
        }
        low = Some(match low {
            Some(m) if m < l => m,
            _ => l,
        });
    }
    low.unwrap_or(Mag::ZERO)
}

fn threshold(n: usize, c: &Rat, prec: u32) -> Result<Ball> {
    if n == 0 {
        return Ok(Ball::zero(prec));
    }
    let nb = Ball::from_i64(n as i64, prec);
    Ok(elementary::exp(&elementary::log(&nb)?.try_div(&Ball::from_rat(c, prec))?)?)
}

fn theorem2_row<S: RealScalar>(
    jet: &TaylorJet<S>,
    n: usize,
    c: &Rat,
    radius: &Rat,
    trunc: usize,
    prec: u32,
) -> Result<Theorem2Row> {
    let sj = jet.shifted(n)?;
    let (decay, shift) = sj.decay().ok_or_else(|| Error::TailBoundUnavailable(jet.label().into()))?;
    let p = sj.truncate_taylor(trunc)?.to_ball(prec);
    let t = threshold(n, c, prec)?;
    let mut row = Theorem2Row {
        n,
        threshold: t.to_f64(),
        certified_radius: None,
        tail_bound: None,
        roots_inside: 0,
        nonreal_inside: 0,
        violations: 0,
        undecided: 0,
        contained: None,
    };
    if p.is_zero() || p.leading().contains_zero() {
        return Ok(row);
    }
    if p.degree()? == 0 {
        return Ok(row);
    }
    let rs = all_roots(&p, prec)?;
    if !rs.certified {
        return Ok(row);
    }
    // Rouché on |z| = rho: |f^(n) - P| <= tail < |P|. Candidate radii sit
    // midway between consecutive zero moduli, largest first.
    let mut moduli: Vec<f64> = rs.disks.iter().map(|d| d.re.to_f64().hypot(d.im.to_f64())).collect();
    moduli.push(0.0);
    moduli.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let r_max = radius.to_f64().unwrap_or(0.0);
    let mut gaps: Vec<(f64, f64)> = moduli
        .windows(2)
        .filter(|w| w[1] - w[0] > 1e-3 && w[0] < r_max)
        .map(|w| (w[0], w[1].min(r_max)))
        .collect();
    if moduli.last().is_some_and(|&m| m < r_max) {
        gaps.push((*moduli.last().unwrap(), r_max));
    }
    gaps.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    // lower bounds on the circle are limited by enclosure width, not rounding
    let p_lo: Poly<Ball> = Poly::new(p.coeffs().iter().map(|c| c.set_prec(64)).collect());
    let mut cert: Option<(Rat, Mag)> = None;
    for (lo, hi) in gaps.into_iter().take(4) {
        let mid = if hi >= r_max && hi - lo > 0.5 { hi } else { (lo + hi) / 2.0 };
        let rho = Rat::new(((mid * 64.0).floor() as i64).into(), 64.into());
        if !rho.is_positive() {
            continue;
        }
        let Some(tail) = decay.tail_bound(shift, trunc as u64 + 1, &Ball::from_rat(&rho, prec), prec) else {
            continue;
        };
        if circle_lower(&p_lo, &rho, &tail, 64) > tail {
            cert = Some((rho, tail));
            break;
        }
    }
    let Some((rho, tail)) = cert else { return Ok(row) };
    row.certified_radius = Some(rho.to_string());
    row.tail_bound = Some(tail.to_f64());
    let rho_b = Ball::from_rat(&rho, prec);
    let region = RegionSpec::GappedStrip(t);
    for d in &rs.disks {
        let far = (&d.center(prec).abs() + &Ball::exact(d.radius.to_dyadic(), prec)) - rho_b.clone();
        if !far.is_negative() {
            continue;
        }
        row.roots_inside += d.multiplicity;
        if d.is_nonreal() {
            row.nonreal_inside += d.multiplicity;
        }
        match disk_membership(d, &region, prec) {
            Membership::Yes => {}
            Membership::No => row.violations += d.multiplicity,
            Membership::Indeterminate => row.undecided += d.multiplicity,
        }
    }
    row.contained = match (row.violations, row.undecided) {
        (0, 0) => Some(true),
        (0, _) => None,
        _ => Some(false),
    };
    Ok(row)
}

/// For each `n`, locates the zeros of a Taylor truncation of `f^(n)` inside
/// a disk where a tail bound certifies the zero count, and tests the nonreal
/// ones against the strip `|Im z| < 1/2`, `|Re z| >= n^(1/c)`.
pub fn scan_theorem2<S: RealScalar>(
    jet: &TaylorJet<S>,
    c: &Rat,
    n_range: (usize, usize),
    radius: &Rat,
    trunc: usize,
    prec: u32,
) -> Result<Theorem2Report> {
    check_range(n_range, "n")?;
    let hint = jet
        .order_hint()
        .ok_or_else(|| Error::InvalidArgument(format!("jet `{}` has no order hint", jet.label())))?;
    if !c.is_positive() || c.to_f64().unwrap_or(0.0) <= hint {
        return Err(Error::InvalidArgument(format!("c = {c} does not exceed the order {hint}")));
    }
    if jet.decay().is_none() {
        return Err(Error::TailBoundUnavailable(jet.label().into()));
    }
    if trunc + n_range.1 > jet.max_order() {
        return Err(Error::JetTooShort { needed: trunc + n_range.1, available: jet.max_order() });
    }
    let count = n_range.1 - n_range.0 + 1;
    let rows = par_map(count, |i| theorem2_row(jet, n_range.0 + i, c, radius, trunc, prec))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut empirical_n1 = None;
    for r in rows.iter().rev() {
        if r.contained != Some(true) {
            break;
        }
        empirical_n1 = Some(r.n);
    }
    Ok(Theorem2Report {
        label: jet.label().into(),
        c: c.to_string(),
        radius: radius.to_string(),
        trunc,
        rows,
        empirical_n1,
        truncation_roots: true,
        empirical_only: true,
        caveat: EMPIRICAL_CAVEAT,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_grid_is_hyperbolic() {
        let r = scan_jensen_grid(&TaylorJet::exp(40), "exp", (1, 12), (0, 6)).unwrap();
        assert_eq!(r.cells.len(), 12 * 7);
        assert_eq!(r.count(Status::Hyperbolic), r.cells.len());
        assert!(r.first_all_hyperbolic_n.iter().all(|&(_, n)| n == Some(0)));
        assert!(r.empirical_only);
        let short = scan_jensen_grid(&TaylorJet::exp(10), "exp", (1, 8), (0, 4));
        assert!(matches!(short, Err(Error::JetTooShort { .. })));
    }

    #[test]
    fn nonreal_pair_shows_up() {
        // J(z^2 + 1; 2) = 1 + 2z^2
        let jet = Poly::new(vec![rat_int(1), rat_int(0), rat_int(1)]).jet_to(8);
        let r = scan_jensen_grid(&jet, "z^2+1", (1, 4), (0, 2)).unwrap();
        assert_eq!(r.cell(0, 2).unwrap().status, Status::NotHyperbolic);
        assert!(r.cell(0, 2).unwrap().witness.is_some());
        assert_eq!(r.cell(1, 2).unwrap().status, Status::Hyperbolic);
        let ball = scan_jensen_grid(&jet.to_ball(128), "z^2+1", (1, 4), (0, 2)).unwrap();
        assert_eq!(ball.cell(0, 2).unwrap().status, Status::NotHyperbolic);
    }

    #[test]
    fn example_jet_values() {
        let jet = quartic_cos_jet(12);
        // f(0) = 1/16, f''(0) = 2 - 1/16
        assert_eq!(jet.values()[0], rat(1, 16));
        assert_eq!(jet.values()[2], rat(31, 16));
        for (k, v) in jet.values().iter().enumerate() {
            let bound = rat_int(((k + 1) * (k + 1)) as i64);
            assert!(num_traits::Signed::abs(v) <= bound);
        }
    }

    #[test]
    fn theorem2_needs_decay() {
        let jet = Poly::new(vec![rat_int(1), rat_int(0), rat_int(1)]).jet_to(30).with_order_hint(0.0);
        let r = scan_theorem2(&jet, &rat(3, 2), (0, 2), &rat_int(4), 10, 128);
        assert!(matches!(r, Err(Error::TailBoundUnavailable(_))));
    }

    #[test]
    fn theorem2_small_scan() {
        let jet = quartic_cos_jet(90);
        let r = scan_theorem2(&jet, &rat(3, 2), (0, 1), &rat_int(6), 60, 128).unwrap();
        assert!(r.rows.iter().all(|row| row.certified_radius.is_some()), "{r:?}");
        // n = 0: zeros ±i/4 sit in the strip, threshold 0
        assert_eq!(r.rows[0].nonreal_inside, 2);
        assert_eq!(r.rows[0].contained, Some(true));
    }
}
