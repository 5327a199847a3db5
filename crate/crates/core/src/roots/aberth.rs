//! Simultaneous root approximation and certified inclusion disks.
//!
//! Approximations come from Ehrlich–Aberth iteration, first in an
//! extended-exponent double format (no overflow for wide coefficient ranges),
//! then at full precision. Inclusion follows from Gerschgorin's theorem
//! applied to `diag(z) - W 1^T`, whose eigenvalues are the roots of `P`;
//! `W_i = P(z_i) / (a_n Π_{j≠i} (z_i - z_j))` are the Weierstrass corrections.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::numeric::{Ball, CBall, Dyadic, Mag, RealScalar};
use crate::poly::Poly;
use crate::{Error, Result};

const STAGE1_SWEEPS: usize = 200;
const STAGE2_SWEEPS: usize = 40;

/// A disk `|z - center| <= radius` holding `multiplicity` roots.
#[derive(Clone, Debug, PartialEq)]
pub struct RootDisk {
    pub re: Dyadic,
    pub im: Dyadic,
    pub radius: Mag,
    pub multiplicity: usize,
    /// Certified to hold a single real root.
    pub real: bool,
}

impl RootDisk {
    pub fn center(&self, prec: u32) -> CBall {
        CBall::new(Ball::exact(self.re.clone(), prec), Ball::exact(self.im.clone(), prec))
    }

    /// Rectangular enclosure of the disk.
    pub fn enclosure(&self, prec: u32) -> CBall {
        CBall::new(
            Ball::with_rad(self.re.clone(), self.radius, prec),
            Ball::with_rad(self.im.clone(), self.radius, prec),
        )
    }

    /// The disk misses the real axis.
    pub fn is_nonreal(&self) -> bool {
        Mag::from_dyadic_lower(&self.im) > self.radius
    }
}

#[derive(Clone, Debug)]
pub struct RootSet {
    pub disks: Vec<RootDisk>,
    /// Upper bound on `max |P(z_i)|` over the final approximations.
    pub residual: Ball,
    /// Inclusion and counting guarantees hold.
    pub certified: bool,
    pub degree: usize,
    pub prec: u32,
}

impl RootSet {
    pub fn roots(&self) -> Vec<CBall> {
        self.disks.iter().map(|d| d.enclosure(self.prec)).collect()
    }

    pub fn max_radius(&self) -> Mag {
        self.disks.iter().fold(Mag::ZERO, |m, d| m.max(d.radius))
    }
}

/// Complex number `(re + i im) 2^e` with `max(|re|, |im|)` in `[1/2, 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Xc {
    re: f64,
    im: f64,
    e: i64,
}

fn pow2(k: i64) -> f64 {
    f64::from_bits(((k + 1023).clamp(1, 2046) as u64) << 52)
}

impl Xc {
    const ZERO: Xc = Xc { re: 0.0, im: 0.0, e: 0 };

    fn norm(re: f64, im: f64, e: i64) -> Xc {
        let m = re.abs().max(im.abs());
        if m == 0.0 || !m.is_finite() {
            return Xc::ZERO;
        }
        let k = ((m.to_bits() >> 52) & 0x7ff) as i64 - 1022;
        let s = pow2(-k);
        Xc { re: re * s, im: im * s, e: e + k }
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn add(self, o: Xc) -> Xc {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (a, b) = if self.e >= o.e { (self, o) } else { (o, self) };
        let d = a.e - b.e;
        if d > 200 {
            return a;
        }
        let s = pow2(-d);
        Xc::norm(a.re + b.re * s, a.im + b.im * s, a.e)
    }

    fn neg(self) -> Xc {
        Xc { re: -self.re, im: -self.im, e: self.e }
    }

    fn sub(self, o: Xc) -> Xc {
        self.add(o.neg())
    }

    fn mul(self, o: Xc) -> Xc {
        Xc::norm(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re, self.e + o.e)
    }

    fn div(self, o: Xc) -> Option<Xc> {
        if o.is_zero() {
            return None;
        }
        let d = o.re * o.re + o.im * o.im;
        let re = (self.re * o.re + self.im * o.im) / d;
        let im = (self.im * o.re - self.re * o.im) / d;
        Some(Xc::norm(re, im, self.e - o.e))
    }

    fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.e as f64 + self.re.hypot(self.im).log2()
        }
    }

    fn from_polar(log2_r: f64, theta: f64) -> Xc {
        let e = log2_r.floor();
        let f = (log2_r - e).exp2();
        Xc::norm(f * theta.cos(), f * theta.sin(), e as i64)
    }

    fn from_dyadic(d: &Dyadic) -> (f64, i64) {
        if d.is_zero() {
            return (0.0, 0);
        }
        let bits = d.mantissa().bits() as i64;
        let shift = (bits - 60).max(0);
        let m: BigInt = d.mantissa() >> shift as usize;
        (m.to_f64().unwrap(), d.exponent() + shift)
    }

    fn from_dyadics(re: &Dyadic, im: &Dyadic) -> Xc {
        let (a, ea) = Xc::from_dyadic(re);
        let (b, eb) = Xc::from_dyadic(im);
        Xc::norm(a, 0.0, ea).add(Xc::norm(0.0, b, eb))
    }

    fn to_dyadics(self) -> (Dyadic, Dyadic) {
        (
            Dyadic::from_f64(self.re).unwrap().mul_2exp(self.e),
            Dyadic::from_f64(self.im).unwrap().mul_2exp(self.e),
        )
    }
}

fn horner_xc(c: &[Xc], z: Xc) -> (Xc, Xc) {
    let n = c.len() - 1;
    let mut p = c[n];
    let mut dp = Xc::ZERO;
    for k in (0..n).rev() {
        dp = dp.mul(z).add(p);
        p = p.mul(z).add(c[k]);
    }
    (p, dp)
}

/// Starting points on circles read off the Newton polygon of `|c_k|`.
fn initial_points(c: &[Xc]) -> Vec<Xc> {
    let n = c.len() - 1;
    let pts: Vec<(usize, f64)> = c
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(k, x)| (k, x.log2_abs()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(n);
    for w in hull.windows(2) {
        let (i, li) = w[0];
        let (j, lj) = w[1];
        let m = j - i;
        let log_r = (li - lj) / m as f64;
        for t in 0..m {
            let theta = std::f64::consts::TAU * (t as f64 / m as f64 + i as f64 / n as f64) + 0.4;
            out.push(Xc::from_polar(log_r, theta));
        }
    }
    out
}

fn aberth_xc(c: &[Xc], z: &mut [Xc]) -> bool {
    let n = z.len();
    let mut done = vec![false; n];
    for _ in 0..STAGE1_SWEEPS {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp) = horner_xc(c, z[i]);
            if p.is_zero() {
                done[i] = true;
                continue;
            }
            let mut s = Xc::ZERO;
            for j in 0..n {
                if j != i {
                    let d = z[i].sub(z[j]);
                    let d = if d.is_zero() { Xc::norm(1.0, 1.0, z[i].e - 40) } else { d };
                    s = s.add(Xc::norm(1.0, 0.0, 0).div(d).unwrap());
                }
            }
            let Some(ratio) = p.div(dp) else {
                z[i] = z[i].add(Xc::norm(0.3, 0.7, z[i].e - 20));
                continue;
            };
            let den = Xc::norm(1.0, 0.0, 0).sub(ratio.mul(s));
            let w = ratio.div(den).unwrap_or(ratio);
            z[i] = z[i].sub(w);
            if w.log2_abs() < z[i].log2_abs() - 50.0 || z[i].is_zero() {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return true;
        }
    }
    false
}

fn point(re: &Dyadic, im: &Dyadic, prec: u32) -> CBall {
    CBall::new(Ball::exact(re.clone(), prec), Ball::exact(im.clone(), prec))
}

fn mid_point(z: &CBall, prec: u32) -> (Dyadic, Dyadic) {
    (z.re.mid().round(prec, crate::numeric::Round::Nearest).0, z.im.mid().round(prec, crate::numeric::Round::Nearest).0)
}

/// Aberth sweeps at full precision on exact points. Returns whether every
/// correction fell below the working precision.
fn aberth_ball(c: &[Ball], z: &mut [(Dyadic, Dyadic)], prec: u32) -> bool {
    let n = z.len();
    let coeffs: Vec<CBall> = c.iter().map(|b| CBall::from_real(b.mid_ball().set_prec(prec))).collect();
    let deriv: Vec<CBall> = coeffs.iter().enumerate().skip(1).map(|(k, b)| b.mul_real(&Ball::from_i64(k as i64, prec))).collect();
    let horner = |cs: &[CBall], x: &CBall| {
        let mut acc = cs[cs.len() - 1].clone();
        for k in (0..cs.len() - 1).rev() {
            acc = &(&acc * x) + &cs[k];
        }
        acc
    };
    let tol = prec as i64 - 6;
    let mut done = vec![false; n];
    for _ in 0..STAGE2_SWEEPS {
        let mut converged = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let zi = point(&z[i].0, &z[i].1, prec);
            let p = horner(&coeffs, &zi);
            // the value is lost in rounding noise: no further progress here
            if p.contains_zero() {
                done[i] = true;
                continue;
            }
            let dp = if deriv.is_empty() { CBall::zero(prec) } else { horner(&deriv, &zi) };
            let mut s = CBall::zero(prec);
            for j in 0..n {
                if j != i {
                    let d = &zi - &point(&z[j].0, &z[j].1, prec);
                    if let Ok(inv) = d.inv() {
                        s = &s + &inv;
                    }
                }
            }
            let Ok(ratio) = p.try_div(&dp) else {
                converged = false;
                continue;
            };
            let den = &CBall::one(prec) - &(&ratio * &s);
            let w = den.inv().map(|d| &ratio * &d).unwrap_or(ratio);
            let (wr, wi) = mid_point(&w, prec);
            let scale = zi.mag_upper().max(Mag::pow2(-(prec as i64)));
            let wmag = Mag::from_dyadic_upper(&wr).max(Mag::from_dyadic_upper(&wi));
            if wmag.mul_2exp(tol) > scale {
                converged = false;
            } else {
                done[i] = true;
            }
            z[i] = (z[i].0.sub(&wr).round(prec, crate::numeric::Round::Nearest).0, z[i].1.sub(&wi).round(prec, crate::numeric::Round::Nearest).0);
        }
        if converged {
            return true;
        }
    }
    false
}

fn dist_upper(ax: &Dyadic, ay: &Dyadic, bx: &Dyadic, by: &Dyadic) -> Mag {
    let dx = ax.sub(bx);
    let dy = ay.sub(by);
    Mag::from_dyadic_upper(&dx.mul(&dx).add(&dy.mul(&dy))).sqrt_upper()
}

fn dist_lower(ax: &Dyadic, ay: &Dyadic, bx: &Dyadic, by: &Dyadic) -> Mag {
    let dx = ax.sub(bx);
    let dy = ay.sub(by);
    Mag::from_dyadic_lower(&dx.mul(&dx).add(&dy.mul(&dy))).sqrt_lower()
}

/// Gerschgorin disks around the approximations; `None` if a correction
/// cannot be bounded.
fn inclusion_disks(c: &[Ball], z: &[(Dyadic, Dyadic)], prec: u32) -> Option<(Vec<(Dyadic, Dyadic, Mag)>, Ball)> {
    let n = z.len();
    let p = Poly::new(c.to_vec());
    let lead = CBall::from_real(c[n].clone());
    let mut out = Vec::with_capacity(n);
    let mut residual = Mag::ZERO;
    for i in 0..n {
        let zi = point(&z[i].0, &z[i].1, prec);
        let pz = p.eval(&zi);
        residual = residual.max(pz.mag_upper());
        let mut den = lead.clone();
        for j in 0..n {
            if j != i {
                den = &den * &(&zi - &point(&z[j].0, &z[j].1, prec));
            }
        }
        let w = pz.try_div(&den).ok()?;
        let g = &zi - &w;
        let (gx, gy) = (g.re.mid().clone(), g.im.mid().clone());
        let off = g.re.rad().mul(&g.re.rad()).add(&g.im.rad().mul(&g.im.rad())).sqrt_upper();
        let r = w.mag_upper().mul_u64((n - 1) as u64).add(&off);
        out.push((gx, gy, r));
    }
    Some((out, Ball::with_rad(Dyadic::zero(), residual, prec)))
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, i: usize) -> usize {
        if self.0[i] != i {
            let r = self.find(self.0[i]);
            self.0[i] = r;
        }
        self.0[i]
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
            true
        } else {
            false
        }
    }
}

/// Merges disks into pairwise disjoint groups; each group's disk holds as
/// many roots as it has members.
fn group_disks(disks: &[(Dyadic, Dyadic, Mag)], prec: u32) -> Vec<RootDisk> {
    let n = disks.len();
    let mut dsu = Dsu((0..n).collect());
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&disks[i], &disks[j]);
            if dist_lower(&a.0, &a.1, &b.0, &b.1) <= a.2.add(&b.2).mul_u64(4) {
                dsu.union(i, j);
            }
        }
    }
    loop {
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut root_of = vec![usize::MAX; n];
        for i in 0..n {
            let r = dsu.find(i);
            if root_of[r] == usize::MAX {
                root_of[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[root_of[r]].push(i);
        }
        let encl: Vec<(Dyadic, Dyadic, Mag)> = groups
            .iter()
            .map(|g| {
                let (mut sx, mut sy) = (Dyadic::zero(), Dyadic::zero());
                for &i in g {
                    sx = sx.add(&disks[i].0);
                    sy = sy.add(&disks[i].1);
                }
                let m = Dyadic::from_i64(g.len() as i64);
                let cx = sx.div_trunc(&m, prec + 8).0;
                let cy = sy.div_trunc(&m, prec + 8).0;
                let r = g.iter().fold(Mag::ZERO, |acc, &i| {
                    acc.max(dist_upper(&cx, &cy, &disks[i].0, &disks[i].1).add(&disks[i].2))
                });
                (cx, cy, r)
            })
            .collect();
        let mut merged = false;
        for a in 0..groups.len() {
            for b in a + 1..groups.len() {
                let (x, y) = (&encl[a], &encl[b]);
                if dist_lower(&x.0, &x.1, &y.0, &y.1) <= x.2.add(&y.2) {
                    merged |= dsu.union(groups[a][0], groups[b][0]);
                }
            }
        }
        if merged {
            continue;
        }
        let mut out: Vec<RootDisk> = encl
            .iter()
            .zip(&groups)
            .map(|((cx, cy, r), g)| RootDisk {
                re: cx.clone(),
                im: cy.clone(),
                radius: *r,
                multiplicity: g.len(),
                real: false,
            })
            .collect();
        for a in 0..out.len() {
            let d = &out[a];
            if d.radius.is_zero() && d.im.is_zero() {
                out[a].real = true;
                continue;
            }
            if d.multiplicity != 1 || Mag::from_dyadic_upper(&d.im) > d.radius {
                continue;
            }
            let conj_im = d.im.neg();
            let alone = (0..out.len()).filter(|&b| b != a).all(|b| {
                let o = &out[b];
                dist_lower(&d.re, &conj_im, &o.re, &o.im) > d.radius.add(&o.radius)
            });
            out[a].real = alone;
        }
        out.sort_by(|a, b| a.re.cmp(&b.re).then(a.im.cmp(&b.im)));
        return out;
    }
}

/// Approximates all roots of `P` and wraps them in certified disks.
pub fn all_roots<S: RealScalar>(p: &Poly<S>, prec: u32) -> Result<RootSet> {
    let deg = p.degree()?;
    if deg == 0 {
        return Err(Error::Degree("constant polynomial has no roots".into()));
    }
    let c: Vec<Ball> = p.coeffs().iter().map(|x| x.to_ball(prec)).collect();
    let zeros = c.iter().take_while(|b| b.is_exact_zero()).count();
    let q = &c[zeros..];
    let n = q.len() - 1;
    let mut disks0: Vec<(Dyadic, Dyadic, Mag)> = (0..zeros).map(|_| (Dyadic::zero(), Dyadic::zero(), Mag::ZERO)).collect();
    if n == 0 {
        let disks = group_disks(&disks0, prec);
        return Ok(RootSet { disks, residual: Ball::zero(prec), certified: true, degree: deg, prec });
    }
    let cx: Vec<Xc> = q.iter().map(|b| Xc::from_dyadics(b.mid(), &Dyadic::zero())).collect();
    let mut zx = initial_points(&cx);
    aberth_xc(&cx, &mut zx);
    let mut z: Vec<(Dyadic, Dyadic)> = zx.iter().map(|x| x.to_dyadics()).collect();
    // split exact coincidences
    for i in 0..n {
        for j in 0..i {
            if z[i] == z[j] {
                let bump = Dyadic::one().mul_2exp(z[i].0.top().max(z[i].1.top()) - 30 - i as i64);
                z[i].1 = z[i].1.add(&bump);
            }
        }
    }
    let mut work = prec;
    for attempt in 0..2 {
        let converged = aberth_ball(q, &mut z, work);
        if let Some((d, residual)) = inclusion_disks(q, &z, work) {
            if converged || attempt == 1 {
                disks0.extend(d);
                let disks = group_disks(&disks0, work);
                return Ok(RootSet { disks, residual, certified: true, degree: deg, prec: work });
            }
        }
        work *= 2;
    }
    let disks = z
        .into_iter()
        .map(|(re, im)| RootDisk { re, im, radius: Mag::ZERO, multiplicity: 1, real: false })
        .collect();
    Ok(RootSet { disks, residual: Ball::zero(work), certified: false, degree: deg, prec: work })
}
