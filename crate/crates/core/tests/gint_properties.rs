use hecke_core::gint::{
    self, divrem, factor, gcd_with_steps, is_primary, is_primary_by_division, residues, to_primary, GaussianInt, Unit,
};
use hecke_core::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small() -> impl Strategy<Value = GaussianInt> {
    (-3000i64..3000, -3000i64..3000).prop_map(|(a, b)| GaussianInt::new(a, b))
}

proptest! {
    #[test]
    fn norm_is_multiplicative(z in small(), w in small()) {
        prop_assert_eq!((z * w).norm().unwrap(), z.norm().unwrap() * w.norm().unwrap());
    }

    #[test]
    fn divrem_is_euclidean(a in small(), b in small()) {
        prop_assume!(!b.is_zero());
        let (q, r) = divrem(a, b).unwrap();
        prop_assert_eq!(q * b + r, a);
        prop_assert!(2 * r.norm().unwrap() <= b.norm().unwrap());
    }
}

#[test]
fn overflow_is_reported_not_wrapped() {
    let big = GaussianInt::new(1 << 40, 1 << 40);
    assert_eq!(big.checked_mul(big).and_then(|x| x.checked_mul(big)), None);
    assert_eq!(GaussianInt::new(i64::MAX, 1).norm(), Err(Error::Overflow));
}

#[test]
fn fast_primary_test_matches_definition_up_to_1e5() {
    let mut odd = 0;
    for z in gint::elements_up_to_norm(100_000).filter(|z| z.is_odd()) {
        assert_eq!(is_primary(z), is_primary_by_division(z), "{z}");
        odd += 1;
    }
    assert!(odd > 150_000);
}

#[test]
fn exactly_one_associate_is_primary() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut seen = 0;
    while seen < 1000 {
        let z = GaussianInt::new(rng.gen_range(-10_000..10_000), rng.gen_range(-10_000..10_000));
        if !z.is_odd() {
            continue;
        }
        seen += 1;
        let hits = Unit::ALL.iter().filter(|&&u| is_primary_by_division(z.mul_unit(u))).count();
        assert_eq!(hits, 1, "{z}");
        let (u, p) = to_primary(z).unwrap();
        assert_eq!(p.mul_unit(u), z);
    }
}

#[test]
fn factorization_round_trips_up_to_1e5() {
    for z in gint::elements_up_to_norm(100_000).filter(|z| !z.is_zero()) {
        let f = factor(z).unwrap();
        assert_eq!(f.expand().unwrap(), z);
        for &(p, e) in &f.factors {
            assert!(e > 0 && is_primary(p));
        }
        let norms: Vec<_> = f.factors.iter().map(|(p, _)| (p.norm().unwrap(), p.re, p.im)).collect();
        assert!(norms.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn gcd_descent_is_logarithmic() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2000 {
        let a = GaussianInt::new(rng.gen_range(-1_000_000..1_000_000), rng.gen_range(-1_000_000..1_000_000));
        let b = GaussianInt::new(rng.gen_range(-1_000_000..1_000_000), rng.gen_range(-1_000_000..1_000_000));
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let (g, steps) = gcd_with_steps(a, b).unwrap();
        let bound = 4.0 * ((a.norm().unwrap() as f64) * (b.norm().unwrap() as f64)).log2();
        assert!(f64::from(steps) <= bound);
        assert!(g.divides(a) && g.divides(b));
    }
}

#[test]
fn residue_systems_are_complete_up_to_500() {
    for n in gint::elements_up_to_norm(500).filter(|z| !z.is_zero() && (z.re >= 0 && z.im >= 0)) {
        let rs = residues(n).unwrap();
        assert_eq!(rs.len() as u64, n.norm().unwrap());
        for (i, &x) in rs.iter().enumerate() {
            assert_eq!(gint::reduce(x, n).unwrap(), x);
            for &y in &rs[i + 1..] {
                assert!(!n.divides(x - y), "{x} = {y} mod {n}");
            }
        }
    }
}

#[test]
fn residue_map_indexes_every_class() {
    let n = GaussianInt::new(-7, 12);
    let map = gint::ResidueMap::new(n).unwrap();
    for z in gint::elements_up_to_norm(2000) {
        let idx = map.index_of(z);
        assert!(n.divides(z - map.residues()[idx]));
    }
}
