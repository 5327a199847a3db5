use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{ToPrimitive, Zero};

use super::dyadic::{Dyadic, Round};

const MAG_BITS: u32 = 30;

/// Non-negative magnitude `man * 2^exp` with a short mantissa.
///
/// Every operation rounds upward, so a `Mag` is always a valid upper bound
/// for the quantity it was computed from. Used for ball radii.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mag {
    man: u64,
    exp: i64,
}

impl Mag {
    pub const ZERO: Mag = Mag { man: 0, exp: 0 };

    pub fn is_zero(&self) -> bool {
        self.man == 0
    }

    fn from_u128_up(mut man: u128, mut exp: i64) -> Mag {
        if man == 0 {
            return Mag::ZERO;
        }
        while man >= (1u128 << MAG_BITS) {
            let lost = man & 1;
            man >>= 1;
            exp += 1;
            if lost != 0 {
                man += 1;
            }
        }
        Mag { man: man as u64, exp }
    }

    fn from_u128_down(mut man: u128, mut exp: i64) -> Mag {
        if man == 0 {
            return Mag::ZERO;
        }
        let bits = 128 - man.leading_zeros();
        if bits > MAG_BITS {
            let s = bits - MAG_BITS;
            man >>= s;
            exp += s as i64;
        }
        Mag { man: man as u64, exp }
    }

    /// Rebuilds a magnitude from [`Mag::raw`] parts (rounding upward if the
    /// mantissa is oversized).
    pub fn from_raw(man: u64, exp: i64) -> Mag {
        Mag::from_u128_up(man as u128, exp)
    }

    /// `(mantissa, exponent)` with value `mantissa * 2^exponent`.
    pub fn raw(&self) -> (u64, i64) {
        (self.man, self.exp)
    }

    pub fn from_u64(v: u64) -> Mag {
        Mag::from_u128_up(v as u128, 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Mag {
        Mag { man: 1, exp: e }
    }

    /// Upper bound for `|d|`.
    pub fn from_dyadic_upper(d: &Dyadic) -> Mag {
        Mag::from_bigint_upper(d.mantissa(), d.exponent())
    }

    /// Lower bound for `|d|`.
    pub fn from_dyadic_lower(d: &Dyadic) -> Mag {
        if d.is_zero() {
            return Mag::ZERO;
        }
        let m = d.mantissa().magnitude();
        let bits = m.bits();
        if bits <= 64 {
            return Mag::from_u128_down(m.to_u64().unwrap() as u128, d.exponent());
        }
        let s = bits - 64;
        let top: u64 = (m >> s as usize).to_u64().unwrap();
        Mag::from_u128_down(top as u128, d.exponent() + s as i64)
    }

    fn from_bigint_upper(man: &BigInt, exp: i64) -> Mag {
        if man.is_zero() {
            return Mag::ZERO;
        }
        let m = man.magnitude();
        let bits = m.bits();
        if bits <= 64 {
            return Mag::from_u128_up(m.to_u64().unwrap() as u128, exp);
        }
        let s = bits - 64;
        let top: u64 = (m >> s as usize).to_u64().unwrap();
        // mantissa is normalized odd, so the dropped bits are nonzero
        Mag::from_u128_up(top as u128 + 1, exp + s as i64)
    }

    /// Upper bound for a non-negative `f64`.
    pub fn from_f64_upper(v: f64) -> Mag {
        assert!(v >= 0.0 && v.is_finite());
        Mag::from_dyadic_upper(&Dyadic::from_f64(v).unwrap())
    }

    pub fn to_dyadic(&self) -> Dyadic {
        Dyadic::new(BigInt::from(self.man), self.exp)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_dyadic().to_f64()
    }

    /// Smallest `e` with `self < 2^e` (`i64::MIN` for zero).
    pub fn top(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + (64 - self.man.leading_zeros()) as i64
        }
    }

    pub fn add(&self, o: &Mag) -> Mag {
        if self.is_zero() {
            return *o;
        }
        if o.is_zero() {
            return *self;
        }
        let (hi, lo) = if self.exp >= o.exp { (self, o) } else { (o, self) };
        let shift = hi.exp - lo.exp;
        if shift >= 90 {
            // lo < 2^(hi.exp - 60)
            return Mag::from_u128_up(((hi.man as u128) << 60) + 1, hi.exp - 60);
        }
        let m = ((hi.man as u128) << shift) + lo.man as u128;
        Mag::from_u128_up(m, lo.exp)
    }

    pub fn mul(&self, o: &Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::ZERO;
        }
        Mag::from_u128_up(self.man as u128 * o.man as u128, self.exp + o.exp)
    }

    /// Upper bound of `self / o`; `o` must be nonzero.
    pub fn div(&self, o: &Mag) -> Mag {
        assert!(!o.is_zero(), "Mag division by zero");
        if self.is_zero() {
            return Mag::ZERO;
        }
        let num = (self.man as u128) << 64;
        let q = num.div_ceil(o.man as u128);
        Mag::from_u128_up(q, self.exp - o.exp - 64)
    }

    pub fn mul_2exp(&self, k: i64) -> Mag {
        if self.is_zero() {
            *self
        } else {
            Mag { man: self.man, exp: self.exp + k }
        }
    }

    pub fn mul_u64(&self, k: u64) -> Mag {
        self.mul(&Mag::from_u64(k))
    }

    /// Upper bound of `sqrt(self)`.
    pub fn sqrt_upper(&self) -> Mag {
        if self.is_zero() {
            return *self;
        }
        let (m, e) = self.even_scaled();
        let s = m.sqrt();
        let s = if s * s < m { s + 1 } else { s };
        Mag::from_u128_up(s, e / 2)
    }

    /// Lower bound of `sqrt(self)`.
    pub fn sqrt_lower(&self) -> Mag {
        if self.is_zero() {
            return *self;
        }
        let (m, e) = self.even_scaled();
        Mag::from_u128_down(m.sqrt(), e / 2)
    }

    fn even_scaled(&self) -> (u128, i64) {
        let mut m = (self.man as u128) << 64;
        let mut e = self.exp - 64;
        if e % 2 != 0 {
            m <<= 1;
            e -= 1;
        }
        (m, e)
    }

    pub fn max(self, o: Mag) -> Mag {
        if self >= o {
            self
        } else {
            o
        }
    }

    /// Upper bound for `e^self - 1`.
    pub fn expm1_upper(&self) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        if self.top() <= 0 {
            // x < 1: e^x - 1 <= x + x^2
            return self.add(&self.mul(self));
        }
        let x = self.to_dyadic().round(64, Round::Up).0;
        match super::elementary::exp_upper_bound(&x) {
            Some(m) => m,
            None => Mag { man: (1 << MAG_BITS) - 1, exp: i64::MAX / 4 },
        }
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mag {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self.to_dyadic().cmp(&other.to_dyadic()),
        }
    }
}

impl fmt::Debug for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}
