use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::numeric::{binomial, Rat};

static TABLE: Mutex<Vec<Rat>> = Mutex::new(Vec::new());

/// Bernoulli number `B_n` (with `B_1 = -1/2`).
pub fn bernoulli(n: usize) -> Rat {
    let mut t = TABLE.lock().unwrap_or_else(|e| e.into_inner());
    while t.len() <= n {
        let m = t.len();
        let b = if m == 0 {
            Rat::from_integer(BigInt::from(1))
        } else if m > 1 && m % 2 == 1 {
            Rat::zero()
        } else {
            // Σ_{k<=m} C(m+1, k) B_k = 0
            let mut s = Rat::zero();
            for (k, bk) in t.iter().enumerate() {
                if !bk.is_zero() {
                    s += Rat::from_integer(binomial(m as u64 + 1, k as u64)) * bk;
                }
            }
            -s / Rat::from_integer(BigInt::from(m + 1))
        };
        t.push(b);
    }
    t[n].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn small_values() {
        assert_eq!(bernoulli(0), rat(1, 1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(12), rat(-691, 2730));
        assert!(bernoulli(13).is_zero());
        assert_eq!(bernoulli(20), rat(-174611, 330));
    }
}
