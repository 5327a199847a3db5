//! Truncated power series `Σ c_k t^k`, stored as coefficient vectors.

use crate::numeric::{Analytic, NumericError, Scalar};

/// Product truncated to `n` terms.
pub fn mul<S: Scalar>(a: &[S], b: &[S], n: usize) -> Vec<S> {
    let prec = a.iter().chain(b).map(|c| c.precision()).max().unwrap_or(0);
    let mut out = vec![S::zero_at(prec); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_exact_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// `exp(a)` truncated to `n` terms, from `g' = a' g`.
pub fn exp<S: Analytic>(a: &[S], n: usize) -> Result<Vec<S>, NumericError> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let prec = a.iter().map(|c| c.precision()).max().unwrap_or(0);
    let zero = S::zero_at(prec);
    let coef = |k: usize| a.get(k).unwrap_or(&zero).clone();
    let mut g = Vec::with_capacity(n);
    g.push(coef(0).exp()?);
    for k in 1..n {
        let mut s = S::zero_at(prec);
        for j in 1..=k {
            let aj = coef(j);
            if aj.is_exact_zero() {
                continue;
            }
            s = s.add(&aj.mul(&g[k - j]).mul_bigint(&j.into()));
        }
        g.push(s.try_div(&S::from_i64(k as i64, prec))?);
    }
    Ok(g)
}

/// Reciprocal series truncated to `n` terms; `a[0]` must exclude zero.
pub fn inv<S: Scalar>(a: &[S], n: usize) -> Result<Vec<S>, NumericError> {
    let prec = a.iter().map(|c| c.precision()).max().unwrap_or(0);
    let a0 = &a[0];
    let mut g: Vec<S> = Vec::with_capacity(n);
    for k in 0..n {
        let mut s = if k == 0 { S::from_i64(1, prec) } else { S::zero_at(prec) };
        for j in 1..=k.min(a.len() - 1) {
            s = s.sub(&a[j].mul(&g[k - j]));
        }
        g.push(s.try_div(a0)?);
    }
    Ok(g)
}

/// Coefficients of `a(c t)`.
pub fn rescale<S: Scalar>(a: &[S], c: &S) -> Vec<S> {
    let mut pw = S::from_i64(1, c.precision());
    a.iter()
        .map(|x| {
            let v = x.mul(&pw);
            pw = pw.mul(c);
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{factorial, rat_int, Ball, Rat};

    #[test]
    fn exp_of_linear_is_exponential_series() {
        let prec = 128;
        let a = vec![Ball::zero(prec), Ball::from_i64(2, prec)];
        let g = exp(&a, 8).unwrap();
        for (k, v) in g.iter().enumerate() {
            let want = Rat::new(num_bigint::BigInt::from(1u32 << k), factorial(k as u64));
            assert!(v.contains_rat(&want), "k={k}");
        }
    }

    #[test]
    fn inverse_times_series_is_one() {
        let a: Vec<Rat> = vec![rat_int(2), rat_int(-1), rat_int(3)];
        let g = inv(&a, 6).unwrap();
        let p = mul(&a, &g, 6);
        assert_eq!(p[0], rat_int(1));
        assert!(p[1..].iter().all(|c| *c == rat_int(0)));
    }
}
