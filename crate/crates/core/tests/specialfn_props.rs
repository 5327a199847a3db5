use jensenlab::numeric::{rat, Ball, CBall, Rat};
use jensenlab::specialfn::{
    gamma_ball, hurwitz_zeta, phi_moments, sm1_zeta, xi_at_zero_direct, xi_eval, xi_taylor, zeta_ball, QuadratureSpec,
    XiJetRequest, XiMethod,
};
use num_bigint::BigInt;
use proptest::prelude::*;

const P: u32 = 96;

fn small_rat(lim: i64) -> impl Strategy<Value = Rat> {
    (-lim * 8..=lim * 8).prop_map(|n| Rat::new(BigInt::from(n), BigInt::from(8)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn xi_is_even_and_real_on_the_axis(x in small_rat(20), y in small_rat(2)) {
        let z = CBall::from_rats(&x, &y, P);
        let a = xi_eval(&z, P).unwrap();
        let b = xi_eval(&-&z, P).unwrap();
        prop_assert!(a.overlaps(&b));
        let t = xi_eval(&CBall::from_rats(&x, &rat(0, 1), P), P).unwrap();
        prop_assert!(t.im.contains_zero());
    }

    #[test]
    fn gamma_recurrence(x in small_rat(6), y in small_rat(6)) {
        let z = CBall::from_rats(&x, &y, P);
        prop_assume!(!(y == rat(0, 1) && x <= rat(0, 1) && x.is_integer()));
        let g = gamma_ball(&z, P).unwrap();
        let g1 = gamma_ball(&(&z + &CBall::one(P)), P).unwrap();
        prop_assert!((&z * &g).overlaps(&g1));
    }

    #[test]
    fn zeta_two_routes(x in small_rat(4), y in small_rat(10)) {
        let s = CBall::from_rats(&x, &y, P);
        prop_assume!(!(x == rat(1, 1) && y == rat(0, 1)));
        // Riemann ζ against the Hurwitz form at a = 1/2: ζ(s, 1/2) = (2^s - 1) ζ(s)
        let z = zeta_ball(&s, P).unwrap();
        let h = hurwitz_zeta(&s, &Ball::from_rat(&rat(1, 2), P), P).unwrap();
        let ln2 = jensenlab::numeric::elementary::ln2(P);
        let two_s = s.mul_real(&ln2).exp().unwrap();
        prop_assert!(h.overlaps(&(&(&two_s - &CBall::one(P)) * &z)));
        let pf = sm1_zeta(&s, P).unwrap();
        prop_assert!(pf.overlaps(&(&(&s - &CBall::one(P)) * &z)));
    }
}

#[test]
fn quadrature_refinement_keeps_enclosures_overlapping() {
    let a = phi_moments(10, 128, &QuadratureSpec { pieces_per_unit: 16, u_max: None }).unwrap();
    let b = phi_moments(10, 128, &QuadratureSpec { pieces_per_unit: 32, u_max: None }).unwrap();
    for (m, (x, y)) in a.iter().zip(&b).enumerate() {
        assert!(x.overlaps(y), "moment {m}: {x} vs {y}");
        let diff = (x - y).abs();
        assert!(diff.upper() <= x.rad().to_dyadic().add(&y.rad().to_dyadic()));
    }
}

#[test]
fn cross_method_agreement_at_two_precisions() {
    for prec in [128, 192] {
        let phi = xi_taylor(&XiJetRequest::new(24, prec, XiMethod::PhiMoments)).unwrap();
        let fac = xi_taylor(&XiJetRequest::new(24, prec, XiMethod::DirectFactors)).unwrap();
        for k in 0..=24 {
            assert!(phi.value(k).overlaps(fac.value(k)), "order {k} at {prec} bits");
        }
        assert!(phi.value(0).overlaps(&xi_at_zero_direct(prec).unwrap()));
    }
}

#[test]
fn half_form_first_jensen_polynomial() {
    let jet = xi_taylor(&XiJetRequest::new(10, 128, XiMethod::DirectFactors)).unwrap();
    let half = jet.half_form().unwrap();
    let j1 = half.jensen(0, 1).unwrap();
    // J(Ξ0; 1)(z) = Ξ(0) + Ξ''(0)/2 z
    assert!(j1.coeffs()[0].overlaps(jet.value(0)));
    assert!(j1.coeffs()[1].overlaps(&jet.value(2).mul_2exp(-1)));
    for k in 0..=5 {
        let want = half_scale(jet.value(2 * k), k);
        assert!(half.value(k).overlaps(&want));
    }
}

/// `v k!/(2k)!`
fn half_scale(v: &Ball, k: usize) -> Ball {
    let num = jensenlab::numeric::factorial(k as u64);
    let den = jensenlab::numeric::factorial(2 * k as u64);
    (v * &Ball::from_bigint(&num, v.prec())).try_div(&Ball::from_bigint(&den, v.prec())).unwrap()
}

#[test]
fn xi_first_zero_bracket() {
    let at = |t: Rat| xi_eval(&CBall::from_rats(&t, &rat(0, 1), 96), 96).unwrap().re;
    let (mut lo, mut hi) = (rat(14, 1), rat(142, 10));
    assert!(at(lo.clone()).is_positive() && at(hi.clone()).is_negative());
    for _ in 0..20 {
        let mid = (&lo + &hi) / rat(2, 1);
        if at(mid.clone()).is_positive() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let z = (lo + hi) / rat(2, 1);
    let z: f64 = num_traits::ToPrimitive::to_f64(&z).unwrap();
    assert!((z - 14.134725141734693).abs() < 1e-5);
}
