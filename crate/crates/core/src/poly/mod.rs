//! Dense univariate polynomials, Taylor jets and the Jensen construction.

mod jet;
pub mod series;

pub use jet::{DecayBound, Parity, TaylorJet};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::numeric::{factorial, Ball, CBall, Rat, RealScalar, Scalar};
use crate::{Error, Result};

/// Polynomial with ascending coefficients.
///
/// The coefficient list is never empty. Trailing coefficients that are
/// exactly zero are stripped, so the zero polynomial is `[0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

/// A real polynomial with either exact or ball coefficients.
#[derive(Clone, Debug, PartialEq)]
pub enum RealPoly {
    Exact(Poly<Rat>),
    Approx(Poly<Ball>),
}

impl<S: Scalar> Poly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Poly<S> {
        while coeffs.len() > 1 && coeffs.last().unwrap().is_exact_zero() {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(S::zero_at(0));
        }
        Poly { coeffs }
    }

    pub fn zero(prec: u32) -> Poly<S> {
        Poly { coeffs: vec![S::zero_at(prec)] }
    }

    pub fn constant(c: S) -> Poly<S> {
        Poly::new(vec![c])
    }

    /// `z^d`.
    pub fn monomial(d: usize, prec: u32) -> Poly<S> {
        let mut c = vec![S::zero_at(prec); d + 1];
        c[d] = S::from_i64(1, prec);
        Poly { coeffs: c }
    }

    pub fn from_rats(c: &[Rat], prec: u32) -> Poly<S> {
        Poly::new(c.iter().map(|r| S::from_rat(r, prec)).collect())
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Option<&S> {
        self.coeffs.get(k)
    }

    /// Index of the last stored coefficient.
    pub fn formal_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_exact_zero()
    }

    pub fn leading(&self) -> &S {
        self.coeffs.last().unwrap()
    }

    /// Degree, provided the leading coefficient is certainly nonzero.
    pub fn degree(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::Degree("zero polynomial has no degree".into()));
        }
        if self.leading().may_be_zero() {
            return Err(Error::AmbiguousDegree);
        }
        Ok(self.formal_degree())
    }

    fn prec(&self) -> u32 {
        self.coeffs.iter().map(|c| c.precision()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(o.coeffs.len());
        let zero = S::zero_at(self.prec().max(o.prec()));
        Poly::new(
            (0..n)
                .map(|k| {
                    let a = self.coeffs.get(k).unwrap_or(&zero);
                    let b = o.coeffs.get(k).unwrap_or(&zero);
                    a.add(b)
                })
                .collect(),
        )
    }

    pub fn sub(&self, o: &Poly<S>) -> Poly<S> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Poly<S> {
        Poly { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn scale(&self, k: &S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(|c| c.mul(k)).collect())
    }

    pub fn mul(&self, o: &Poly<S>) -> Poly<S> {
        let prec = self.prec().max(o.prec());
        let mut out = vec![S::zero_at(prec); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, e: u32) -> Poly<S> {
        let mut acc = Poly::constant(S::from_i64(1, self.prec()));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// n-th derivative.
    pub fn differentiate(&self, n: usize) -> Poly<S> {
        if n == 0 {
            return self.clone();
        }
        if n > self.formal_degree() {
            return Poly::zero(self.prec());
        }
        let c = (n..self.coeffs.len())
            .map(|k| self.coeffs[k].mul_bigint(&falling(k as u64, n as u64)))
            .collect();
        Poly::new(c)
    }

    /// `P(z^k)`.
    pub fn substitute_power(&self, k: usize) -> Poly<S> {
        assert!(k >= 1);
        let zero = S::zero_at(self.prec());
        let mut c = vec![zero; self.formal_degree() * k + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i * k] = a.clone();
        }
        Poly::new(c)
    }

    /// `P(Q(z))`.
    pub fn compose(&self, q: &Poly<S>) -> Poly<S> {
        let mut acc = Poly::constant(self.leading().clone());
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(q).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// `Σ_k p_k Q^(k)`: `P` applied as a differential operator to `Q`.
    pub fn compose_obreschkoff(&self, q: &Poly<S>) -> Poly<S> {
        let mut acc = Poly::zero(self.prec().max(q.prec()));
        for (k, pk) in self.coeffs.iter().enumerate() {
            if pk.is_exact_zero() || k > q.formal_degree() {
                continue;
            }
            acc = acc.add(&q.differentiate(k).scale(pk));
        }
        acc
    }

    /// `z^d P(1/z)`.
    pub fn reverse(&self, d: usize) -> Result<Poly<S>> {
        if d < self.formal_degree() {
            return Err(Error::Degree(format!(
                "cannot reverse degree {} polynomial at d = {d}",
                self.formal_degree()
            )));
        }
        let mut c = vec![S::zero_at(self.prec()); d + 1];
        for (k, a) in self.coeffs.iter().enumerate() {
            c[d - k] = a.clone();
        }
        Ok(Poly::new(c))
    }

    /// Horner evaluation at a scalar.
    pub fn eval_at(&self, z: &S) -> S {
        let mut acc = self.leading().clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(z).add(c);
        }
        acc
    }

    /// Horner evaluation over a complex ball.
    pub fn eval(&self, z: &CBall) -> CBall {
        let prec = z.prec().max(self.prec());
        let mut acc = self.leading().to_cball(prec);
        for c in self.coeffs.iter().rev().skip(1) {
            acc = &(&acc * z) + &c.to_cball(prec);
        }
        acc
    }

    /// Taylor jet `(P(0), P'(0), ..., P^(M)(0))` with `M` the formal degree.
    pub fn jet(&self) -> TaylorJet<S> {
        self.jet_to(self.formal_degree())
    }

    /// Taylor jet up to order `m`, zero-padded beyond the degree.
    pub fn jet_to(&self, m: usize) -> TaylorJet<S> {
        let zero = S::zero_at(self.prec());
        let values = (0..=m)
            .map(|k| self.coeffs.get(k).unwrap_or(&zero).mul_bigint(&factorial(k as u64)))
            .collect();
        TaylorJet::detect_parity(values, "polynomial")
    }
}

impl<S: RealScalar> Poly<S> {
    pub fn to_ball(&self, prec: u32) -> Poly<Ball> {
        Poly::new(self.coeffs.iter().map(|c| c.to_ball(prec)).collect())
    }
}

impl Poly<Rat> {
    /// Polynomial with the given exact roots and leading coefficient 1.
    pub fn from_roots(roots: &[Rat]) -> Poly<Rat> {
        roots.iter().fold(Poly::constant(Rat::one()), |acc, r| {
            acc.mul(&Poly::new(vec![-r.clone(), Rat::one()]))
        })
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly<Rat>) -> (Poly<Rat>, Poly<Rat>) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.formal_degree();
        if self.formal_degree() < dd {
            return (Poly::zero(0), self.clone());
        }
        let lead = d.leading().clone();
        let mut r = self.coeffs.clone();
        let mut q = vec![Rat::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] / &lead;
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &c * dj;
                }
            }
            q[i] = c;
        }
        r.truncate(dd.max(1));
        (Poly::new(q), Poly::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly<Rat>) -> Poly<Rat> {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Poly<Rat> {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading().clone();
        Poly::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    /// Positive rescaling to a primitive integer polynomial (same roots).
    pub fn primitive(&self) -> Poly<Rat> {
        if self.is_zero() {
            return self.clone();
        }
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Rat::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| num_integer::gcd(acc, c.clone()));
        Poly::new(ints.into_iter().map(|c| Rat::from_integer(c / &g)).collect())
    }
}

impl RealPoly {
    pub fn formal_degree(&self) -> usize {
        match self {
            RealPoly::Exact(p) => p.formal_degree(),
            RealPoly::Approx(p) => p.formal_degree(),
        }
    }

    pub fn degree(&self) -> Result<usize> {
        match self {
            RealPoly::Exact(p) => p.degree(),
            RealPoly::Approx(p) => p.degree(),
        }
    }

    pub fn to_ball(&self, prec: u32) -> Poly<Ball> {
        match self {
            RealPoly::Exact(p) => p.to_ball(prec),
            RealPoly::Approx(p) => p.to_ball(prec),
        }
    }

    pub fn eval(&self, z: &CBall) -> CBall {
        match self {
            RealPoly::Exact(p) => p.eval(z),
            RealPoly::Approx(p) => p.eval(z),
        }
    }
}

impl From<Poly<Rat>> for RealPoly {
    fn from(p: Poly<Rat>) -> Self {
        RealPoly::Exact(p)
    }
}

impl From<Poly<Ball>> for RealPoly {
    fn from(p: Poly<Ball>) -> Self {
        RealPoly::Approx(p)
    }
}

/// `k (k-1) ... (k-n+1)`.
pub(crate) fn falling(k: u64, n: u64) -> BigInt {
    (0..n).fold(BigInt::one(), |acc, i| acc * BigInt::from(k - i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat, rat_int};

    fn p(c: &[i64]) -> Poly<Rat> {
        Poly::new(c.iter().map(|&v| rat_int(v)).collect())
    }

    #[test]
    fn derivatives() {
        assert_eq!(p(&[1, 0, 1]).differentiate(1), p(&[0, 2]));
        assert_eq!(p(&[1, 0, 1]).differentiate(0), p(&[1, 0, 1]));
        assert!(p(&[1, 0, 1]).differentiate(3).is_zero());
        assert_eq!(p(&[0, 0, 0, 1]).differentiate(2), p(&[0, 6]));
    }

    #[test]
    fn obreschkoff_small_cases() {
        let q = p(&[5, -1, 3, 2]);
        assert_eq!(p(&[1]).compose_obreschkoff(&q), q);
        assert_eq!(p(&[0, 0, 1]).compose_obreschkoff(&q), q.differentiate(2));
        // (D^2 + 2D + 2) z^2 = 2z^2 + 4z + 2
        assert_eq!(p(&[2, 2, 1]).compose_obreschkoff(&p(&[0, 0, 1])), p(&[2, 4, 2]));
    }

    #[test]
    fn reversal() {
        assert_eq!(p(&[1, 2]).reverse(1).unwrap(), p(&[2, 1]));
        assert_eq!(p(&[0, 0, 0, 1]).reverse(3).unwrap(), p(&[1]));
        assert_eq!(p(&[1, 2]).reverse(3).unwrap(), p(&[0, 0, 2, 1]));
        assert!(matches!(p(&[1, 2, 3]).reverse(1), Err(Error::Degree(_))));
    }

    #[test]
    fn evaluation() {
        let prec = 128;
        let i = CBall::i(prec);
        let v = p(&[1, 0, 1]).eval(&i);
        assert!(v.contains_zero());
        let v = p(&[5]).eval(&CBall::from_rats(&rat(7, 3), &rat(-1, 2), prec));
        assert!(v.re.contains_rat(&rat_int(5)) && v.im.is_exact_zero());
        let w = Poly::from_roots(&[rat_int(1), rat_int(2)]).eval(&CBall::from_rats(&rat_int(3), &rat_int(0), prec));
        assert!(w.re.contains_rat(&rat_int(2)) && w.re.is_exact());
    }

    #[test]
    fn division_and_gcd() {
        let a = Poly::from_roots(&[rat_int(1), rat_int(1), rat_int(-2)]);
        let b = a.differentiate(1);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert_eq!(a.gcd(&b), Poly::from_roots(&[rat_int(1)]));
        assert_eq!(p(&[3, 6, 9]).scale(&rat(1, 7)).primitive(), p(&[1, 2, 3]));
    }

    #[test]
    fn ball_degree_can_be_ambiguous() {
        let prec = 64;
        let fuzzy = Ball::from_i64(0, prec).add_error(crate::numeric::Mag::pow2(-10));
        let q = Poly::new(vec![Ball::one(prec), fuzzy]);
        assert!(matches!(q.degree(), Err(Error::AmbiguousDegree)));
        let q = Poly::new(vec![Ball::one(prec), Ball::zero(prec)]);
        assert_eq!(q.degree().unwrap(), 0);
    }

    #[test]
    fn substitution() {
        let f0 = p(&[1, 2, 3]);
        assert_eq!(f0.substitute_power(2), p(&[1, 0, 2, 0, 3]));
        assert_eq!(f0.compose(&p(&[0, 0, 1])), f0.substitute_power(2));
        assert_eq!(p(&[0, 1]).compose(&f0), f0);
    }
}
