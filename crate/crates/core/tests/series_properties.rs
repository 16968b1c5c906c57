use hecke_core::charsum::zeta_k;
use hecke_core::gint::GeneratorChoice;
use hecke_core::series::{
    chi_ik1, j2, j_local, j_truncated, l_hecke_truncated, verify_factorization, ExponentConvention, SeriesCaps,
    SeriesPoint, VERIFICATION_K1,
};
use hecke_core::{gint, Error, GaussianInt};
use num_complex::Complex64;

fn small(k1: GaussianInt, v: f64, w: f64) -> SeriesPoint {
    SeriesPoint { caps: SeriesCaps { n_norm_cap: 600, k2_norm_cap: 300, prime_norm_cap: 100_000 }, ..SeriesPoint::new(k1, v, w) }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[test]
fn generator_choice_does_not_matter() {
    for k1 in [GaussianInt::new(1, 0), GaussianInt::new(-1, 2)] {
        let a = j_truncated(&small(k1, 2.0, 2.0)).unwrap().value;
        let rotated = SeriesPoint { generators: GeneratorChoice::Rotated, ..small(k1, 2.0, 2.0) };
        let b = j_truncated(&rotated).unwrap().value;
        assert!((a - b).norm() <= 1e-12 * a.norm(), "{a} vs {b}");
    }
}

#[test]
fn truncation_within_tail_bound() {
    let p = small(GaussianInt::new(-3, 0), 1.5, 1.5);
    let coarse = j_truncated(&p).unwrap();
    let fine = j_truncated(&SeriesPoint { caps: p.caps.doubled(), ..p }).unwrap();
    assert!((coarse.value - fine.value).norm() <= coarse.tail_bound);
    assert!(fine.tail_bound < coarse.tail_bound);
    assert!(fine.terms > coarse.terms);
}

#[test]
fn domain_checks() {
    let p = small(GaussianInt::new(1, 0), 1.0, 2.0);
    assert!(matches!(j_truncated(&p), Err(Error::Domain(_))));
    let p = small(GaussianInt::new(-9, 0), 2.0, 2.0);
    assert!(matches!(j_truncated(&p), Err(Error::Domain(_))));
    assert!(j2(GaussianInt::new(1, 0), c(0.5), c(1.0), 100, ExponentConvention::Double).is_err());
}

#[test]
fn principal_characters() {
    // i * i = -1 and i * i^3 = 1 are both squares.
    for n in gint::primaries_up_to_norm(500) {
        assert_eq!(chi_ik1(GaussianInt::new(0, 1), n).unwrap(), 1.0);
        assert_eq!(chi_ik1(GaussianInt::new(0, -1), n).unwrap(), 1.0);
    }
    let l = l_hecke_truncated(c(2.0), GaussianInt::new(0, 1), 20_000).unwrap();
    // Primary n run over the odd ideals: zeta_K(s) (1 - 2^-s).
    let oracle = zeta_k(2.0).unwrap() * 0.75;
    assert!((l.value.re - oracle).abs() <= l.tail_bound, "{} vs {oracle}", l.value.re);
    assert!(l.value.im == 0.0);
}

#[test]
fn factorization_at_reduced_caps() {
    for k1 in VERIFICATION_K1 {
        let r = verify_factorization(&small(k1, 2.0, 2.0)).unwrap();
        assert!(r.passed, "k1={k1:?}: {r:?}");
    }
    let single = SeriesPoint { convention: ExponentConvention::Single, ..small(GaussianInt::new(-1, 2), 2.0, 2.0) };
    assert!(verify_factorization(&single).unwrap().passed);
}

#[test]
fn ramified_factor_is_not_one() {
    // Setting the factor at 1 + i to 1 leaves a mismatch of 1/(1 - 4^-v).
    let k1 = GaussianInt::new(-3, 0);
    let v = 2.0;
    let ramified = j_local(GaussianInt::ONE_PLUS_I, k1, c(v), c(2.0), ExponentConvention::Double).unwrap();
    assert!((ramified.re - 1.0 / (1.0 - 4f64.powf(-v))).abs() < 1e-15);
    let r = verify_factorization(&small(k1, v, 2.0)).unwrap();
    let without = r.l.value * r.j2.value / ramified;
    let rel = (r.j.value - without).norm() / r.j.value.norm();
    assert!(rel > 1e-2, "{rel}");
    assert!(r.relative < 1e-4);
}

#[test]
fn j2_is_tame_across_k1() {
    let mut values = Vec::new();
    for k1 in VERIFICATION_K1 {
        let t = j2(k1, c(1.0), c(0.5), 100_000, ExponentConvention::Double).unwrap();
        assert!(t.value.norm().is_finite() && t.value.norm() > 0.0);
        values.push(t.value.norm());
    }
    let (lo, hi) = values.iter().fold((f64::MAX, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    assert!(hi / lo < 10.0, "{values:?}");
}
