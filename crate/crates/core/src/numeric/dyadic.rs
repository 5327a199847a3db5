use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rat;

/// Exact binary floating-point value `man * 2^exp`.
///
/// Kept normalized: the mantissa is odd, or the value is zero with `exp == 0`,
/// so structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

/// Rounding direction for [`Dyadic::round`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Nearest,
    Floor,
    Ceil,
    Down,
    Up,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { man: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic::from_i64(1)
    }

    pub fn new(man: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { man, exp };
        d.normalize();
        d
    }

    pub fn from_i64(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    /// Exact conversion; `None` for NaN and infinities.
    pub fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = (bits & ((1u64 << 52) - 1)) as i64;
        let (man, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1i64 << 52), raw_exp - 1075)
        };
        Some(Dyadic::new(BigInt::from(sign * man), exp))
    }

    fn normalize(&mut self) {
        if self.man.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.man.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.man >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.man.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.man.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Number of significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// Smallest `e` with `|self| < 2^e`; `i64::MIN` for zero.
    pub fn top(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.man.bits() as i64
        }
    }

    pub fn is_integer(&self) -> bool {
        self.is_zero() || self.exp >= 0
    }

    pub fn neg(&self) -> Self {
        Dyadic { man: -&self.man, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        Dyadic { man: self.man.abs(), exp: self.exp }
    }

    pub fn mul_2exp(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { man: self.man.clone(), exp: self.exp + k }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << (self.exp - e) as usize;
        let b = &other.man << (other.exp - e) as usize;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { man: &self.man * &other.man, exp: self.exp + other.exp }
    }

    /// Rounds to at most `prec` significant bits. The flag reports whether
    /// the result differs from `self`.
    pub fn round(&self, prec: u32, mode: Round) -> (Dyadic, bool) {
        let bits = self.man.bits();
        if bits <= prec as u64 {
            return (self.clone(), false);
        }
        let shift = bits - prec as u64;
        let neg = self.man.is_negative();
        let mag = self.man.abs();
        let q: BigInt = &mag >> shift as usize;
        // self is normalized (odd mantissa), so the truncation is inexact.
        let up = match mode {
            Round::Down => false,
            Round::Up => true,
            Round::Floor => neg,
            Round::Ceil => !neg,
            Round::Nearest => {
                let half_bit = (&mag >> (shift as usize - 1)) & BigInt::one();
                if half_bit.is_zero() {
                    false
                } else {
                    let below_mask: BigInt = (BigInt::one() << (shift as usize - 1)) - 1;
                    let sticky = !(&mag & &below_mask).is_zero();
                    sticky || q.is_odd()
                }
            }
        };
        let q = if up { q + 1 } else { q };
        let man = if neg { -q } else { q };
        (Dyadic::new(man, self.exp + shift as i64), true)
    }

    /// Quotient truncated toward zero with `prec + 2` significant bits.
    /// Returns the quotient and whether it is inexact.
    pub fn div_trunc(&self, other: &Dyadic, prec: u32) -> (Dyadic, bool) {
        assert!(!other.is_zero(), "division by zero dyadic");
        if self.is_zero() {
            return (Dyadic::zero(), false);
        }
        let target = prec as i64 + 2;
        let shift = (target + other.man.bits() as i64 - self.man.bits() as i64).max(0);
        let num = &self.man << shift as usize;
        let (q, r) = num.div_rem(&other.man);
        (Dyadic::new(q, self.exp - other.exp - shift), !r.is_zero())
    }

    /// Floor of the square root with `prec + 2` significant bits.
    pub fn sqrt_floor(&self, prec: u32) -> (Dyadic, bool) {
        assert!(!self.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return (Dyadic::zero(), false);
        }
        let target = 2 * (prec as i64 + 2);
        let mut shift = (target - self.man.bits() as i64).max(0);
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let n = &self.man << shift as usize;
        let s = n.sqrt();
        let exact = &s * &s == n;
        (Dyadic::new(s, (self.exp - shift) / 2), !exact)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as usize
        } else {
            self.man.div_floor(&(BigInt::one() << (-self.exp) as usize))
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(self.neg().floor())
    }

    pub fn to_rat(&self) -> Rat {
        if self.exp >= 0 {
            Rat::from_integer(&self.man << self.exp as usize)
        } else {
            Rat::new(self.man.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    /// Rounds a rational to `prec` bits in the given direction.
    pub fn from_rat(r: &Rat, prec: u32, mode: Round) -> (Dyadic, bool) {
        let num = Dyadic::from_bigint(r.numer().clone());
        let den = Dyadic::from_bigint(r.denom().clone());
        let (q, inexact) = num.div_trunc(&den, prec + 8);
        // q carries normalized trailing zeros stripped; restore a wide mantissa
        let q = if q.bits() < prec as u64 + 8 && inexact {
            let pad = prec as i64 + 8 - q.bits() as i64;
            Dyadic { man: &q.man << pad as usize, exp: q.exp - pad }
        } else {
            q
        };
        if !inexact {
            let (d, rounded) = q.round(prec, mode);
            return (d, rounded);
        }
        // sticky bit: the exact value lies strictly between q and the next
        // representable value away from zero
        let sticky = Dyadic::new(
            (&q.man << 1usize) + BigInt::from(r.numer().signum() * r.denom().signum()),
            q.exp - 1,
        );
        let (d, _) = sticky.round(prec, mode);
        (d, true)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits() as i64;
        let keep = 60i64;
        let (m, e) = if bits > keep {
            (&self.man >> (bits - keep) as usize, self.exp + bits - keep)
        } else {
            (self.man.clone(), self.exp)
        };
        let m = m.to_f64().unwrap_or(0.0);
        if e > 2000 {
            return m.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        // split scaling to avoid intermediate overflow/underflow
        let half = (e / 2) as i32;
        m * 2f64.powi(half) * 2f64.powi(e as i32 - half)
    }

    /// Decimal scientific representation with `digits` significant digits,
    /// rounded to nearest.
    pub fn to_decimal(&self, digits: usize) -> String {
        decimal_string(&self.to_rat(), digits, Round::Nearest)
    }

    /// Parses a decimal literal (`-1.25e-3`, `42`, `0x` not supported) exactly.
    pub fn parse_rat(s: &str) -> Option<Rat> {
        parse_decimal_rat(s)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.sub(other);
        d.man.sign().cmp(&Sign::NoSign)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(f.precision().unwrap_or(20)))
    }
}

/// Scientific decimal of an exact rational, `digits` significant digits.
pub(crate) fn decimal_string(r: &Rat, digits: usize, mode: Round) -> String {
    let digits = digits.max(1);
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let a = r.abs();
    // estimate decimal exponent e10 with 10^e10 <= a < 10^(e10+1)
    let num_len = a.numer().to_string().len() as i64;
    let den_len = a.denom().to_string().len() as i64;
    let mut e10 = num_len - den_len;
    let ten = BigInt::from(10);
    let pow10 = |k: i64| -> Rat {
        if k >= 0 {
            Rat::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            Rat::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    while a < pow10(e10) {
        e10 -= 1;
    }
    while a >= pow10(e10 + 1) {
        e10 += 1;
    }
    // scaled = a * 10^(digits-1-e10) in [10^(digits-1), 10^digits)
    let scaled = &a * pow10(digits as i64 - 1 - e10);
    let fl = scaled.floor().to_integer();
    let frac = &scaled - Rat::from_integer(fl.clone());
    let up = match mode {
        Round::Nearest => {
            let half = Rat::new(BigInt::one(), BigInt::from(2));
            frac > half || (frac == half && fl.is_odd())
        }
        Round::Up => !frac.is_zero(),
        Round::Down => false,
        Round::Ceil => !neg && !frac.is_zero(),
        Round::Floor => neg && !frac.is_zero(),
    };
    let mut m = if up { fl + 1 } else { fl };
    if m.to_string().len() > digits {
        m /= 10;
        e10 += 1;
    }
    let s = m.to_string();
    let (head, tail) = s.split_at(1);
    let tail = tail.trim_end_matches('0');
    let sign = if neg { "-" } else { "" };
    let mut out = format!("{sign}{head}");
    if !tail.is_empty() {
        out.push('.');
        out.push_str(tail);
    }
    if e10 != 0 {
        out.push_str(&format!("e{e10}"));
    }
    out
}

fn parse_decimal_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = match mant.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    if neg {
        n = -n;
    }
    let e = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    Some(if e >= 0 {
        Rat::from_integer(n * num_traits::pow(ten, e as usize))
    } else {
        Rat::new(n, num_traits::pow(ten, (-e) as usize))
    })
}
