use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::elementary;
use super::{Ball, Mag, NumericError, Rat};

/// Complex ball with rectangular enclosure semantics.
#[derive(Clone, PartialEq, Eq)]
pub struct CBall {
    pub re: Ball,
    pub im: Ball,
}

impl CBall {
    pub fn new(re: Ball, im: Ball) -> CBall {
        CBall { re, im }
    }

    pub fn from_real(re: Ball) -> CBall {
        let im = Ball::zero(re.prec());
        CBall { re, im }
    }

    pub fn from_rats(re: &Rat, im: &Rat, prec: u32) -> CBall {
        CBall { re: Ball::from_rat(re, prec), im: Ball::from_rat(im, prec) }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Result<CBall, NumericError> {
        Ok(CBall { re: Ball::from_f64(re, prec)?, im: Ball::from_f64(im, prec)? })
    }

    pub fn zero(prec: u32) -> CBall {
        CBall::from_real(Ball::zero(prec))
    }

    pub fn one(prec: u32) -> CBall {
        CBall::from_real(Ball::one(prec))
    }

    /// The imaginary unit.
    pub fn i(prec: u32) -> CBall {
        CBall { re: Ball::zero(prec), im: Ball::one(prec) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn conj(&self) -> CBall {
        CBall { re: self.re.clone(), im: -&self.im }
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> CBall {
        CBall { re: -&self.im, im: self.re.clone() }
    }

    pub fn mul_real(&self, k: &Ball) -> CBall {
        CBall { re: &self.re * k, im: &self.im * k }
    }

    pub fn mul_2exp(&self, k: i64) -> CBall {
        CBall { re: self.re.mul_2exp(k), im: self.im.mul_2exp(k) }
    }

    pub fn sqr(&self) -> CBall {
        let re = self.re.sqr() - self.im.sqr();
        let im = (&self.re * &self.im).mul_2exp(1);
        CBall { re, im }
    }

    /// `|z|^2` as a real ball.
    pub fn norm_sqr(&self) -> Ball {
        self.re.sqr() + self.im.sqr()
    }

    pub fn abs(&self) -> Ball {
        let n = self.norm_sqr();
        if n.is_positive() {
            n.sqrt().expect("positive")
        } else {
            let hi = n.mag_upper().sqrt_upper();
            Ball::from_endpoints(&super::Dyadic::zero(), &hi.to_dyadic(), self.prec())
        }
    }

    /// Upper bound of `|z|` over the box.
    pub fn mag_upper(&self) -> Mag {
        let a = self.re.mag_upper();
        let b = self.im.mag_upper();
        a.mul(&a).add(&b.mul(&b)).sqrt_upper()
    }

    pub fn add_error(&self, err: Mag) -> CBall {
        CBall { re: self.re.add_error(err), im: self.im.add_error(err) }
    }

    pub fn set_prec(&self, prec: u32) -> CBall {
        CBall { re: self.re.set_prec(prec), im: self.im.set_prec(prec) }
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn overlaps(&self, o: &CBall) -> bool {
        self.re.overlaps(&o.re) && self.im.overlaps(&o.im)
    }

    pub fn intersect(&self, o: &CBall) -> Option<CBall> {
        Some(CBall { re: self.re.intersect(&o.re)?, im: self.im.intersect(&o.im)? })
    }

    pub fn try_div(&self, o: &CBall) -> Result<CBall, NumericError> {
        if o.im.is_exact_zero() {
            return Ok(CBall { re: self.re.try_div(&o.re)?, im: self.im.try_div(&o.re)? });
        }
        let den = o.norm_sqr();
        let num = self * &o.conj();
        Ok(CBall { re: num.re.try_div(&den)?, im: num.im.try_div(&den)? })
    }

    pub fn inv(&self) -> Result<CBall, NumericError> {
        CBall::one(self.prec()).try_div(self)
    }

    pub fn exp(&self) -> Result<CBall, NumericError> {
        let m = elementary::exp(&self.re)?;
        if self.im.is_exact_zero() {
            return Ok(CBall::from_real(m));
        }
        let (s, c) = elementary::sin_cos(&self.im)?;
        Ok(CBall { re: &m * &c, im: &m * &s })
    }

    /// Principal logarithm; the box must avoid the origin and the negative
    /// real axis.
    pub fn log(&self) -> Result<CBall, NumericError> {
        if self.im.is_exact_zero() && self.re.is_positive() {
            return Ok(CBall::from_real(elementary::log(&self.re)?));
        }
        let re = elementary::log(&self.norm_sqr())?.mul_2exp(-1);
        let im = elementary::atan2(&self.im, &self.re)?;
        Ok(CBall { re, im })
    }

    /// `self^w = exp(w log self)` (principal branch).
    pub fn pow(&self, w: &CBall) -> Result<CBall, NumericError> {
        (w * &self.log()?).exp()
    }

    pub fn pow_u64(&self, mut n: u64) -> CBall {
        let mut base = self.clone();
        let mut acc = CBall::one(self.prec());
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for CBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + i{:?})", self.re, self.im)
    }
}

impl Add<&CBall> for &CBall {
    type Output = CBall;
    fn add(self, o: &CBall) -> CBall {
        CBall { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub<&CBall> for &CBall {
    type Output = CBall;
    fn sub(self, o: &CBall) -> CBall {
        CBall { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul<&CBall> for &CBall {
    type Output = CBall;
    fn mul(self, o: &CBall) -> CBall {
        if o.im.is_exact_zero() {
            return self.mul_real(&o.re);
        }
        if self.im.is_exact_zero() {
            return o.mul_real(&self.re);
        }
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        CBall { re, im }
    }
}

impl Neg for &CBall {
    type Output = CBall;
    fn neg(self) -> CBall {
        CBall { re: -&self.re, im: -&self.im }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<CBall> for CBall {
            type Output = CBall;
            fn $m(self, o: CBall) -> CBall {
                (&self).$m(&o)
            }
        }
        impl $tr<&CBall> for CBall {
            type Output = CBall;
            fn $m(self, o: &CBall) -> CBall {
                (&self).$m(o)
            }
        }
        impl $tr<CBall> for &CBall {
            type Output = CBall;
            fn $m(self, o: CBall) -> CBall {
                self.$m(&o)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for CBall {
    type Output = CBall;
    fn neg(self) -> CBall {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{elementary::pi, rat, Dyadic};

    const P: u32 = 160;

    #[test]
    fn i_squared_is_minus_one() {
        let i = CBall::i(P);
        let m = &i * &i;
        assert!(m.re.contains(&Dyadic::from_i64(-1)));
        assert!(m.im.contains(&Dyadic::zero()));
    }

    #[test]
    fn exp_of_i_pi_is_minus_one() {
        let z = CBall::new(Ball::zero(P), pi(P));
        let e = z.exp().unwrap();
        assert!(e.re.contains(&Dyadic::from_i64(-1)));
        assert!(e.im.contains(&Dyadic::zero()));
        assert!(e.im.rad() < Mag::pow2(-140));
    }

    #[test]
    fn log_inverts_exp() {
        let z = CBall::from_rats(&rat(1, 3), &rat(-5, 4), P);
        let back = z.exp().unwrap().log().unwrap();
        assert!(back.re.contains_rat(&rat(1, 3)));
        assert!(back.im.contains_rat(&rat(-5, 4)));
    }

    #[test]
    fn division() {
        let a = CBall::from_rats(&rat(1, 1), &rat(2, 1), P);
        let b = CBall::from_rats(&rat(3, 1), &rat(-1, 1), P);
        let q = a.try_div(&b).unwrap();
        // (1+2i)/(3-i) = (1+7i)/10
        assert!(q.re.contains_rat(&rat(1, 10)));
        assert!(q.im.contains_rat(&rat(7, 10)));
        assert!(a.try_div(&CBall::zero(P)).is_err());
    }
}
