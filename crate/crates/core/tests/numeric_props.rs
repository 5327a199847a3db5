use jensenlab::numeric::{elementary, Ball, Dyadic, Mag, Rat};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

const LO: u32 = 64;
const HI: u32 = 512;

fn ball_strategy() -> impl Strategy<Value = (Ball, Vec<Rat>)> {
    (-10_000i64..10_000, 1i64..500, 0u32..20, prop::collection::vec(-100i64..=100, 3)).prop_map(
        |(n, d, radexp, ts)| {
            let mid = Dyadic::from_rat(&Rat::new(n.into(), d.into()), LO, jensenlab::numeric::Round::Nearest).0;
            let rad = Mag::pow2(-(radexp as i64) - 4);
            let b = Ball::with_rad(mid.clone(), rad, LO);
            let r = rad.to_dyadic().to_rat();
            let pts = ts.into_iter().map(|t| mid.to_rat() + Rat::new(t.into(), 100.into()) * &r).collect();
            (b, pts)
        },
    )
}

fn point(r: &Rat) -> Ball {
    Ball::from_rat(r, HI)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn arithmetic_is_inclusion_isotone((a, xs) in ball_strategy(), (b, ys) in ball_strategy()) {
        for x in &xs {
            for y in &ys {
                prop_assert!((&a + &b).contains_rat(&(x + y)));
                prop_assert!((&a - &b).contains_rat(&(x - y)));
                prop_assert!((&a * &b).contains_rat(&(x * y)));
                if let Ok(q) = a.try_div(&b) {
                    prop_assert!(!y.is_zero());
                    prop_assert!(q.contains_rat(&(x / y)));
                }
            }
        }
    }

    #[test]
    fn elementary_is_inclusion_isotone((a, xs) in ball_strategy()) {
        let small = a.mul_2exp(-12);
        for x in &xs {
            let xs_small = x / Rat::from_integer(BigInt::from(4096));
            let e = elementary::exp(&small).unwrap();
            prop_assert!(e.contains_ball(&elementary::exp(&point(&xs_small)).unwrap()));
            let c = elementary::cos(&a).unwrap();
            prop_assert!(c.contains_ball(&elementary::cos(&point(x)).unwrap()));
            if a.is_positive() {
                let l = elementary::log(&a).unwrap();
                prop_assert!(l.contains_ball(&elementary::log(&point(x)).unwrap()));
                let s = a.sqrt().unwrap();
                let lo = s.lower().to_rat();
                let hi = s.upper().to_rat();
                prop_assert!(lo.is_negative() || &lo * &lo <= *x);
                prop_assert!(&hi * &hi >= *x);
                let p = elementary::pow(&a, &Ball::from_rat(&Rat::new(7.into(), 3.into()), LO)).unwrap();
                prop_assert!(p.contains_ball(&elementary::pow(&point(x), &Ball::from_rat(&Rat::new(7.into(), 3.into()), HI)).unwrap()));
            }
        }
    }

    #[test]
    fn more_precision_never_loosens(n in -1_000_000i64..1_000_000, d in 1i64..100_000, p in 64u32..300) {
        let x = Rat::new(n.into(), d.into());
        for f in [elementary::exp as fn(&Ball) -> _, elementary::cos, elementary::sin] {
            let lo = f(&Ball::from_rat(&(&x / Rat::from_integer(1000.into())), p)).unwrap();
            let hi = f(&Ball::from_rat(&(&x / Rat::from_integer(1000.into())), p + 64)).unwrap();
            let slack = lo.rad().add(&Mag::pow2(lo.mid().top() - p as i64));
            prop_assert!(hi.rad() <= slack);
        }
    }
}

/// Rationals agree with schoolbook integer fraction arithmetic.
#[test]
fn rational_arithmetic_matches_integer_reference() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let big = |rng: &mut rand_chacha::ChaCha8Rng| -> BigInt {
        let hi: i64 = rng.gen();
        let lo: u64 = rng.gen();
        (BigInt::from(hi) << 64) + BigInt::from(lo)
    };
    for _ in 0..10_000 {
        let (a, b, c, d) = (big(&mut rng), big(&mut rng), big(&mut rng), big(&mut rng));
        if b.is_zero() || d.is_zero() || c.is_zero() {
            continue;
        }
        let x = Rat::new(a.clone(), b.clone());
        let y = Rat::new(c.clone(), d.clone());
        let same = |r: &Rat, num: BigInt, den: BigInt| r.numer() * &den == num * r.denom();
        assert!(same(&(&x + &y), &a * &d + &c * &b, &b * &d));
        assert!(same(&(&x - &y), &a * &d - &c * &b, &b * &d));
        assert!(same(&(&x * &y), &a * &c, &b * &d));
        assert!(same(&(&x / &y), &a * &d, &b * &c));
        assert!(x.denom().is_positive());
        assert!(num_integer::gcd(x.numer().clone(), x.denom().clone()) == BigInt::from(1) || x.numer().is_zero());
    }
}
