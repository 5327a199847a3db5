use num_traits::{Signed, Zero};

use crate::numeric::Rat;
use crate::poly::Poly;

/// Interval endpoint for root counting.
#[derive(Clone, Debug, PartialEq)]
pub enum Endpoint {
    NegInf,
    At(Rat),
    PosInf,
}

/// `P / gcd(P, P')`, normalized to a primitive integer polynomial with
/// positive leading coefficient.
pub fn squarefree_part(p: &Poly<Rat>) -> Poly<Rat> {
    if p.is_zero() || p.formal_degree() == 0 {
        return p.clone();
    }
    let g = p.gcd(&p.differentiate(1));
    let q = p.div_rem(&g).0.primitive();
    if q.leading().is_negative() {
        q.neg()
    } else {
        q
    }
}

/// Sturm chain `p0 = P, p1 = P', p_{k+1} = -rem(p_{k-1}, p_k)`, each member
/// rescaled by a positive constant to keep coefficients small.
pub fn sturm_chain(p: &Poly<Rat>) -> Vec<Poly<Rat>> {
    let mut chain = vec![p.primitive(), p.differentiate(1).primitive()];
    if chain[1].is_zero() {
        chain.pop();
        return chain;
    }
    loop {
        let n = chain.len();
        let r = chain[n - 2].div_rem(&chain[n - 1]).1;
        if r.is_zero() {
            break;
        }
        chain.push(r.neg().primitive());
    }
    chain
}

fn sign_at(p: &Poly<Rat>, x: &Endpoint) -> i32 {
    let lead = if p.leading().is_positive() { 1 } else if p.leading().is_negative() { -1 } else { 0 };
    match x {
        Endpoint::PosInf => lead,
        Endpoint::NegInf => {
            if p.formal_degree() % 2 == 0 {
                lead
            } else {
                -lead
            }
        }
        Endpoint::At(v) => {
            let y = p.eval_at(v);
            if y.is_zero() {
                0
            } else if y.is_positive() {
                1
            } else {
                -1
            }
        }
    }
}

fn variations(chain: &[Poly<Rat>], x: &Endpoint) -> usize {
    let mut last = 0;
    let mut v = 0;
    for p in chain {
        let s = sign_at(p, x);
        if s != 0 {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
    }
    v
}

/// Number of distinct real roots in `(a, b]` of a square-free `P`.
pub fn sturm_count(p: &Poly<Rat>, a: &Endpoint, b: &Endpoint) -> usize {
    if p.is_zero() || p.formal_degree() == 0 {
        return 0;
    }
    let chain = sturm_chain(p);
    variations(&chain, a).saturating_sub(variations(&chain, b))
}
