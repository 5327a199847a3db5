use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::Poly;
use crate::numeric::{binomial, elementary, factorial, Ball, Mag, Rat, RealScalar, Scalar};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    None,
}

/// Upper envelope for `|f^(k)(0)|` as a function of `k`.
#[derive(Clone, Debug, PartialEq)]
pub enum DecayBound {
    /// `a (k+1)^p`
    Polynomial { a: Rat, p: u32 },
    /// `a (k+1)^p b^k`
    Exponential { a: Rat, p: u32, b: Rat },
    /// `a (k/w)^k`, with `0^0 = 1`
    Stirling { a: Rat, w: Rat },
}

impl DecayBound {
    /// Rigorous upper bound of the envelope at `k`.
    pub fn at(&self, k: u64, prec: u32) -> Ball {
        match self {
            DecayBound::Polynomial { a, p } => {
                Ball::from_rat(a, prec) * Ball::from_i64(k as i64 + 1, prec).pow_u64(*p as u64)
            }
            DecayBound::Exponential { a, p, b } => {
                Ball::from_rat(a, prec)
                    * Ball::from_i64(k as i64 + 1, prec).pow_u64(*p as u64)
                    * Ball::from_rat(b, prec).pow_u64(k)
            }
            DecayBound::Stirling { a, w } => {
                let base = Rat::from_integer(BigInt::from(k)) / w;
                Ball::from_rat(a, prec) * Ball::from_rat(&base, prec).pow_u64(k)
            }
        }
    }

    /// Envelope for the half-form values `k!/(2k)! f^(2k)(0)`.
    pub fn half_form(&self) -> DecayBound {
        let two_p = |p: u32| Rat::from_integer(BigInt::one() << p as usize);
        match self {
            DecayBound::Polynomial { a, p } => DecayBound::Polynomial { a: a * two_p(*p), p: *p },
            DecayBound::Exponential { a, p, b } => {
                DecayBound::Exponential { a: a * two_p(*p), p: *p, b: b * b }
            }
            // (2k)! >= k! k^k, so k!/(2k)! (2k/w)^(2k) <= (4k/w^2)^k
            DecayBound::Stirling { a, w } => DecayBound::Stirling {
                a: a.clone(),
                w: w * w / Rat::from_integer(BigInt::from(4)),
            },
        }
    }

    /// Upper bound for the ratio of consecutive tail terms
    /// `B(n+k+1) R^(k+1)/(k+1)!` over `B(n+k) R^k/k!`, valid for all `k >= k0`.
    fn ratio_from(&self, n: u64, k0: u64, r: &Ball, prec: u32) -> Ball {
        let k1 = Ball::from_i64(k0 as i64 + 1, prec);
        match self {
            DecayBound::Polynomial { p, .. } => {
                let m = Ball::from_i64((n + k0) as i64 + 1, prec);
                let g = (&m + &Ball::one(prec)).try_div(&m).unwrap().pow_u64(*p as u64);
                (g * r).try_div(&k1).unwrap()
            }
            DecayBound::Exponential { p, b, .. } => {
                let m = Ball::from_i64((n + k0) as i64 + 1, prec);
                let g = (&m + &Ball::one(prec)).try_div(&m).unwrap().pow_u64(*p as u64);
                (g * r * Ball::from_rat(b, prec)).try_div(&k1).unwrap()
            }
            // (1+1/m)^m <= e
            DecayBound::Stirling { w, .. } => {
                let e = elementary::exp(&Ball::one(prec)).unwrap();
                let m1 = Ball::from_i64((n + k0) as i64 + 1, prec);
                (e * m1 * r).try_div(&(k1 * Ball::from_rat(w, prec))).unwrap()
            }
        }
    }

    /// Upper bound for `Σ_{k >= start} B(n+k) R^k / k!`, the tail of the
    /// Taylor series of `f^(n)` on `|z| <= R`. `None` if the series cannot be
    /// shown to converge fast enough.
    pub fn tail_bound(&self, n: u64, start: u64, r: &Ball, prec: u32) -> Option<Mag> {
        let three_quarters = Ball::from_rat(&Rat::new(BigInt::from(3), BigInt::from(4)), prec);
        if let DecayBound::Stirling { w, .. } = self {
            // consecutive ratios tend to e R / w
            let e = elementary::exp(&Ball::one(prec)).ok()?;
            let lim = (e * r).try_div(&Ball::from_rat(w, prec)).ok()?;
            if !(&three_quarters - &lim).is_positive() {
                return None;
            }
        }
        let mut acc = Mag::ZERO;
        for k in start..start + 4000 {
            let term = (self.at(n + k, prec) * r.pow_u64(k))
                .try_div(&Ball::from_bigint(&factorial(k), prec))
                .ok()?;
            let rho = self.ratio_from(n, k, r, prec);
            if (&three_quarters - &rho).is_positive() {
                let geo = term.abs().try_div(&(&Ball::one(prec) - &rho)).ok()?;
                return Some(acc.add(&geo.mag_upper()));
            }
            acc = acc.add(&term.mag_upper());
        }
        None
    }
}

/// Finite jet `f(0), f'(0), ..., f^(M)(0)` standing in for an entire function.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorJet<S> {
    values: Vec<S>,
    parity: Parity,
    order_hint: Option<f64>,
    label: String,
    decay: Option<DecayBound>,
    decay_shift: u64,
}

impl<S: Scalar> TaylorJet<S> {
    pub fn new(values: Vec<S>, parity: Parity, label: &str) -> Result<TaylorJet<S>> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("empty jet".into()));
        }
        if parity == Parity::Even {
            if let Some(k) = (1..values.len()).step_by(2).find(|&k| !values[k].may_be_zero()) {
                return Err(Error::Parity(format!("odd entry {k} of an even jet is nonzero")));
            }
        }
        Ok(TaylorJet { values, parity, order_hint: None, label: label.into(), decay: None, decay_shift: 0 })
    }

    /// Flags the jet even when every odd entry is exactly zero.
    pub fn detect_parity(values: Vec<S>, label: &str) -> TaylorJet<S> {
        let even = (1..values.len()).step_by(2).all(|k| values[k].is_exact_zero());
        let parity = if even { Parity::Even } else { Parity::None };
        TaylorJet::new(values, parity, label).expect("parity checked")
    }

    /// Jet from Taylor coefficients `c_k`, i.e. values `k! c_k`.
    pub fn from_taylor_coeffs(c: Vec<S>, label: &str) -> TaylorJet<S> {
        let values = c.iter().enumerate().map(|(k, v)| v.mul_bigint(&factorial(k as u64))).collect();
        TaylorJet::detect_parity(values, label)
    }

    pub fn with_order_hint(mut self, rho: f64) -> Self {
        self.order_hint = Some(rho);
        self
    }

    pub fn with_decay(mut self, d: DecayBound) -> Self {
        self.decay = Some(d);
        self.decay_shift = 0;
        self
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.into();
        self
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn value(&self, k: usize) -> &S {
        &self.values[k]
    }

    /// Highest available derivative order.
    pub fn max_order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn order_hint(&self) -> Option<f64> {
        self.order_hint
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Decay envelope and the index offset it must be evaluated at.
    pub fn decay(&self) -> Option<(&DecayBound, u64)> {
        self.decay.as_ref().map(|d| (d, self.decay_shift))
    }

    /// Jet of `f^(n)`.
    pub fn shifted(&self, n: usize) -> Result<TaylorJet<S>> {
        if n > self.max_order() {
            return Err(Error::JetTooShort { needed: n, available: self.max_order() });
        }
        let parity = if self.parity == Parity::Even && n % 2 == 0 { Parity::Even } else { Parity::None };
        Ok(TaylorJet {
            values: self.values[n..].to_vec(),
            parity,
            order_hint: self.order_hint,
            label: format!("{}^({n})", self.label),
            decay: self.decay.clone(),
            decay_shift: self.decay_shift + n as u64,
        })
    }

    /// Jensen polynomial of degree `d` attached to `f^(n)`.
    pub fn jensen(&self, n: usize, d: usize) -> Result<Poly<S>> {
        if n + d > self.max_order() {
            return Err(Error::JetTooShort { needed: n + d, available: self.max_order() });
        }
        let c = (0..=d)
            .map(|k| self.values[n + k].mul_bigint(&binomial(d as u64, k as u64)))
            .collect();
        Ok(Poly::new(c))
    }

    /// Jet of `f0` where `f(z) = f0(z^2)`.
    pub fn half_form(&self) -> Result<TaylorJet<S>> {
        if self.parity != Parity::Even {
            return Err(Error::Parity("half form needs an even jet".into()));
        }
        if let Some(k) = (1..self.values.len()).step_by(2).find(|&k| !self.values[k].may_be_zero()) {
            return Err(Error::Parity(format!("odd entry {k} is nonzero")));
        }
        let m = self.max_order() / 2;
        let mut values = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let num = self.values[2 * k].mul_bigint(&factorial(k as u64));
            let den = S::from_bigint(&factorial(2 * k as u64), num.precision());
            values.push(num.try_div(&den)?);
        }
        Ok(TaylorJet {
            values,
            parity: Parity::None,
            order_hint: self.order_hint.map(|r| r / 2.0),
            label: format!("{}_0", self.label),
            decay: if self.decay_shift == 0 { self.decay.as_ref().map(|d| d.half_form()) } else { None },
            decay_shift: 0,
        })
    }

    /// Taylor section `Σ_{k<=m} f^(k)(0)/k! z^k`.
    pub fn truncate_taylor(&self, m: usize) -> Result<Poly<S>> {
        if m > self.max_order() {
            return Err(Error::JetTooShort { needed: m, available: self.max_order() });
        }
        let mut c = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let v = &self.values[k];
            let f = S::from_bigint(&factorial(k as u64), v.precision());
            c.push(v.try_div(&f)?);
        }
        Ok(Poly::new(c))
    }

    /// Jet of `g f` for a polynomial `g`, by Leibniz' rule. The decay
    /// envelope is dropped.
    pub fn times_poly(&self, g: &Poly<S>) -> TaylorJet<S> {
        let gv = g.jet_to(self.max_order());
        let values: Vec<S> = (0..=self.max_order())
            .map(|k| {
                let mut acc = S::zero_at(self.values[0].precision());
                for j in 0..=k.min(g.formal_degree()) {
                    let t = gv.values[j].mul(&self.values[k - j]).mul_bigint(&binomial(k as u64, j as u64));
                    acc = acc.add(&t);
                }
                acc
            })
            .collect();
        let mut out = TaylorJet::detect_parity(values, &self.label);
        out.order_hint = self.order_hint;
        out
    }

    /// All values multiplied by `c`.
    pub fn scale(&self, c: &S) -> TaylorJet<S> {
        let mut out = self.clone();
        out.values = self.values.iter().map(|v| v.mul(c)).collect();
        out.decay = None;
        out
    }
}

impl<S: RealScalar> TaylorJet<S> {
    pub fn to_ball(&self, prec: u32) -> TaylorJet<Ball> {
        TaylorJet {
            values: self.values.iter().map(|v| v.to_ball(prec)).collect(),
            parity: self.parity,
            order_hint: self.order_hint,
            label: self.label.clone(),
            decay: self.decay.clone(),
            decay_shift: self.decay_shift,
        }
    }
}

impl TaylorJet<Rat> {
    /// Jet of `e^z`: all ones.
    pub fn exp(m: usize) -> TaylorJet<Rat> {
        TaylorJet::new(vec![Rat::one(); m + 1], Parity::None, "exp")
            .unwrap()
            .with_order_hint(1.0)
            .with_decay(DecayBound::Polynomial { a: Rat::one(), p: 0 })
    }

    /// Jet of `cos z`.
    pub fn cos(m: usize) -> TaylorJet<Rat> {
        let values = (0..=m)
            .map(|k| match k % 4 {
                0 => Rat::one(),
                2 => -Rat::one(),
                _ => Rat::zero(),
            })
            .collect();
        TaylorJet::new(values, Parity::Even, "cos")
            .unwrap()
            .with_order_hint(1.0)
            .with_decay(DecayBound::Polynomial { a: Rat::one(), p: 0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat, rat_int};

    fn p(c: &[i64]) -> Poly<Rat> {
        Poly::new(c.iter().map(|&v| rat_int(v)).collect())
    }

    #[test]
    fn product_with_polynomial() {
        // (1 + z) e^z has values k + 1
        let jet = TaylorJet::exp(6).times_poly(&p(&[1, 1]));
        assert_eq!(jet.values(), (1..=7).map(rat_int).collect::<Vec<_>>().as_slice());
        let q = p(&[2, 0, -3, 1]);
        assert_eq!(TaylorJet::exp(0).times_poly(&q).values()[0], rat_int(2));
        assert_eq!(q.jet_to(5).times_poly(&p(&[0, 1])), q.mul(&p(&[0, 1])).jet_to(5));
    }

    #[test]
    fn jensen_from_definition() {
        let jet = TaylorJet::new(vec![rat_int(3), rat_int(5), rat_int(7)], Parity::None, "abc").unwrap();
        assert_eq!(jet.jensen(0, 1).unwrap(), p(&[3, 5]));
        assert_eq!(jet.jensen(0, 2).unwrap(), p(&[3, 10, 7]));
        assert!(matches!(jet.jensen(1, 2), Err(Error::JetTooShort { .. })));
        // e^z, n = 3, d = 2 -> (1+z)^2
        assert_eq!(TaylorJet::exp(8).jensen(3, 2).unwrap(), p(&[1, 2, 1]));
    }

    #[test]
    fn half_form_examples() {
        let sq = p(&[0, 0, 1]).jet();
        assert_eq!(sq.parity(), Parity::Even);
        assert_eq!(sq.half_form().unwrap().values(), &[rat_int(0), rat_int(1)]);
        let one = p(&[1]).jet();
        assert_eq!(one.half_form().unwrap().values(), &[rat_int(1)]);
        assert!(matches!(p(&[0, 1]).jet().half_form(), Err(Error::Parity(_))));
        // cos(sqrt(w)) = Σ (-1)^k w^k/(2k)!
        let h = TaylorJet::cos(12).half_form().unwrap();
        for k in 0..=6u64 {
            let sign = if k % 2 == 0 { rat_int(1) } else { rat_int(-1) };
            let coeff = sign / Rat::from_integer(factorial(2 * k));
            assert_eq!(h.value(k as usize), &(coeff * Rat::from_integer(factorial(k))));
        }
    }

    #[test]
    fn even_jet_rejects_odd_entries() {
        assert!(TaylorJet::new(vec![rat_int(1), rat_int(1)], Parity::Even, "x").is_err());
    }

    #[test]
    fn truncations() {
        assert_eq!(TaylorJet::exp(5).truncate_taylor(2).unwrap(), Poly::new(vec![rat_int(1), rat_int(1), rat(1, 2)]));
        assert_eq!(
            TaylorJet::cos(5).truncate_taylor(4).unwrap(),
            Poly::new(vec![rat_int(1), rat_int(0), rat(-1, 2), rat_int(0), rat(1, 24)])
        );
        assert_eq!(TaylorJet::cos(5).truncate_taylor(0).unwrap(), p(&[1]));
    }

    #[test]
    fn tail_bound_of_exponential_series() {
        // Σ_{k>=10} 2^k/k! = e^2 - Σ_{k<10} 2^k/k!
        let prec = 128;
        let d = DecayBound::Polynomial { a: rat_int(1), p: 0 };
        let t = d.tail_bound(0, 10, &Ball::from_i64(2, prec), prec).unwrap().to_f64();
        let exact: f64 = 2f64.exp() - (0..10).map(|k| 2f64.powi(k) / (1..=k).product::<i32>().max(1) as f64).sum::<f64>();
        assert!(t >= exact && t < 1.5 * exact, "{t} vs {exact}");
        let s = DecayBound::Stirling { a: rat_int(1), w: rat_int(40) };
        assert!(s.tail_bound(3, 20, &Ball::from_i64(5, prec), prec).is_some());
        assert!(s.tail_bound(3, 20, &Ball::from_i64(50, prec), prec).is_none());
    }

    #[test]
    fn stirling_half_form_dominates() {
        let prec = 128;
        let d = DecayBound::Stirling { a: rat_int(3), w: rat_int(7) };
        let h = d.half_form();
        for k in 1..30u64 {
            let exact = d.at(2 * k, prec) * Ball::from_bigint(&factorial(k), prec);
            let exact = exact.try_div(&Ball::from_bigint(&factorial(2 * k), prec)).unwrap();
            assert!(exact.upper() <= h.at(k, prec).lower());
        }
    }
}
