use jensenlab::numeric::{rat, Ball, CBall, Rat};
use jensenlab::poly::{Poly, TaylorJet};
use jensenlab::roots::{
    all_roots, region_contains, sector_square_member, sector_square_member_exact, Agreement, RegionSpec,
    RegionVerdict,
};
use jensenlab::theorems::{
    check_even_instance, random_sector_poly, scan_jensen_grid, verify_corollary, verify_sector_squaring,
    verify_theorem3, EvenStripPoly, Mode, TrialConfig,
};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-30i64..=30, 1i64..=5).prop_map(|(n, d)| Rat::new(BigInt::from(n), BigInt::from(d)))
}

fn positive_rat() -> impl Strategy<Value = Rat> {
    (1i64..=40, 1i64..=7).prop_map(|(n, d)| rat(n, d))
}

fn deltas_sq() -> impl Strategy<Value = Rat> {
    prop::sample::select(vec![rat(1, 100), rat(1, 4), rat(1, 2), rat(1, 9)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Term-by-term oracle: coefficient k of J(P; d) is C(d,k) P^(k)(0), which
    // is also coefficient d-k of P(D) z^d.
    #[test]
    fn reversal_identity(coeffs in prop::collection::vec(small_rat(), 1..8), extra in 0usize..5) {
        let p = Poly::new(coeffs);
        let d = p.formal_degree() + extra;
        let r = verify_corollary(&p, d, None, 128).unwrap();
        prop_assert!(r.identity);
        prop_assert_eq!(r.jensen.len() <= d + 1, true);
    }

    #[test]
    fn corollary_below_degree_still_matches(coeffs in prop::collection::vec(small_rat(), 2..8), d in 0usize..4) {
        let p = Poly::new(coeffs);
        prop_assert!(verify_corollary(&p, d, None, 128).unwrap().identity);
    }

    #[test]
    fn grid_verdicts_scale_invariant(seed in any::<u64>(), deg in 2usize..7, k in positive_rat()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sp = random_sector_poly(deg, &rat(1, 4), &mut rng);
        let jet: TaylorJet<Rat> = sp.poly.jet_to(deg + 5);
        let scaled = jet.scale(&k);
        let a = scan_jensen_grid(&jet, "p", (1, 5), (0, deg)).unwrap();
        let b = scan_jensen_grid(&scaled, "kp", (1, 5), (0, deg)).unwrap();
        let sa: Vec<_> = a.cells.iter().map(|c| c.status).collect();
        let sb: Vec<_> = b.cells.iter().map(|c| c.status).collect();
        prop_assert_eq!(sa, sb);
    }

    #[test]
    fn sector_poly_zeros_certified_in_sector(seed in any::<u64>(), deg in 1usize..7, d2 in deltas_sq()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sp = random_sector_poly(deg, &d2, &mut rng);
        prop_assert!(sp.in_sector_exact(&d2));
        prop_assert_eq!(sp.poly.formal_degree(), deg);
        // repeated zeros can defeat certification; the generator's distinct
        // zeros never can
        let distinct = {
            let mut z: Vec<(Rat, Rat)> = sp.real_roots.iter().map(|r| (r.clone(), rat(0, 1))).collect();
            z.extend(sp.pairs.iter().cloned());
            let n = z.len();
            z.sort();
            z.dedup();
            z.len() == n && sp.pairs.iter().all(|(_, y)| *y != rat(0, 1))
        };
        prop_assume!(distinct);
        let delta = Ball::from_rat(&d2, 128).sqrt().unwrap();
        let v = region_contains(&all_roots(&sp.poly, 128).unwrap(), &RegionSpec::Sector(delta));
        prop_assert!(matches!(v, RegionVerdict::Yes), "{:?}", sp);
    }

    #[test]
    fn sector_square_routes_agree(x in small_rat(), y in small_rat(), d2 in prop::sample::select(vec![rat(1, 100), rat(1, 4), rat(1, 2)])) {
        let exact = sector_square_member_exact(&x, &y, &d2).unwrap();
        prop_assert_eq!(exact.agreement, Agreement::Agree);
        let z = CBall::from_rats(&x, &y, 128);
        let ball = sector_square_member(&z, &Ball::from_rat(&d2, 128).sqrt().unwrap()).unwrap();
        prop_assert_ne!(ball.agreement, Agreement::Disagree);
        if ball.in_sector != jensenlab::roots::Membership::Indeterminate {
            prop_assert_eq!(ball.in_sector, exact.in_sector);
        }
    }

    #[test]
    fn even_real_rooted_steps_pass(
        zeros in prop::collection::btree_set((1i64..=40, 1i64..=4), 1..5),
        t in prop::sample::select(vec![rat(1, 2), rat(1, 1), rat(3, 2)]),
    ) {
        // distinct positive zeros r, so f0 has distinct zeros r^2
        let mut rs: Vec<Rat> = zeros.into_iter().map(|(n, d)| rat(n, d)).collect();
        rs.sort();
        rs.dedup();
        let inst = EvenStripPoly::from_parts(rat(1, 1), rs, vec![]);
        let r = check_even_instance(&inst, &t, Mode::Exact, 128).unwrap();
        prop_assert!(r.is_clean(), "{:?}", r);
        prop_assert_eq!(r.identities_exact, inst.f0.formal_degree() + 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn theorem3_clean_across_seeds(seed in any::<u64>(), d2 in prop::sample::select(vec![rat(1, 4), rat(1, 2), rat(1, 5)])) {
        let cfg = TrialConfig { seed, trials: 12, delta_sq: d2, ..Default::default() };
        let cfg = TrialConfig { deg_q: (1, jensenlab::numeric::rat_floor(&(rat(1, 1) / &cfg.delta_sq)).try_into().unwrap()), ..cfg };
        let r = verify_theorem3(&cfg).unwrap();
        prop_assert!(r.counterexamples.is_empty(), "{:?}", r.counterexamples);
        prop_assert_eq!(r.passed + r.indeterminate, r.trials);
    }
}

#[test]
fn suites_are_deterministic() {
    let cfg = TrialConfig { seed: 11, trials: 20, ..Default::default() };
    let a = verify_theorem3(&cfg).unwrap();
    let b = verify_theorem3(&cfg).unwrap();
    assert_eq!(format!("{a:?}"), format!("{b:?}"));
    let ds = [rat(1, 100), rat(1, 2)];
    let a = verify_sector_squaring(3, 200, &ds, 128).unwrap();
    let b = verify_sector_squaring(3, 200, &ds, 128).unwrap();
    assert_eq!(format!("{a:?}"), format!("{b:?}"));
    assert!(a.counterexamples.is_empty());
}
