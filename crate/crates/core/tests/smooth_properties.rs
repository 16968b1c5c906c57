use std::f64::consts::{PI, TAU};

use hecke_core::smooth::{decay_threshold, mellin, w_tilde, SmoothWeight, TransformTable, WeightKind};
use num_complex::Complex64;

/// Composite Simpson rule with `2m` intervals.
fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / (2 * m) as f64;
    let mut s = f(a) + f(b);
    for j in 1..2 * m {
        s += f(a + j as f64 * h) * if j % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// `int int W(x^2 + y^2) exp(-2 pi i t y) dx dy` by the tensor trapezoid rule
/// on a square containing the support.
fn cartesian_transform(w: &SmoothWeight, t: f64, m: usize) -> Complex64 {
    let r = w.support().1.sqrt() * 1.01;
    let h = 2.0 * r / m as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..=m {
        let x = -r + i as f64 * h;
        for j in 0..=m {
            let y = -r + j as f64 * h;
            let v = w.eval(x * x + y * y);
            if v != 0.0 {
                acc += v * Complex64::from_polar(1.0, -TAU * t * y);
            }
        }
    }
    acc * h * h
}

#[test]
fn integral_matches_simpson() {
    let w = SmoothWeight::default();
    let v = w.integral().unwrap();
    let oracle = simpson(|t| w.eval(t), 0.0, 1.0, 20_000);
    assert!((v - oracle).abs() < 1e-12, "{v} vs {oracle}");
    assert_eq!(v, w.integral().unwrap());
    let doubled = w.with_amplitude(2.0).unwrap().integral().unwrap();
    assert!((doubled - 2.0 * v).abs() < 1e-15);
    let narrow = SmoothWeight::new(WeightKind::Bump, 0.5, 0.5 + 1e-9, 1.0).unwrap();
    assert!(narrow.integral().unwrap().abs() < 1e-10);
}

#[test]
fn mellin_matches_simpson() {
    let phi = SmoothWeight::default();
    let one = mellin(&phi, Complex64::new(1.0, 0.0)).unwrap();
    assert!((one.re - phi.integral().unwrap()).abs() < 1e-12 && one.im == 0.0);
    let half = mellin(&phi, Complex64::new(0.5, 0.0)).unwrap();
    let oracle = simpson(|t| if t > 0.0 { phi.eval(t) / t.sqrt() } else { 0.0 }, 0.0, 1.0, 20_000);
    assert!((half.re - oracle).abs() < 1e-12, "{} vs {oracle}", half.re);
    let scaled = mellin(&phi.with_amplitude(3.0).unwrap(), Complex64::new(0.5, 0.0)).unwrap();
    assert!((scaled.re - 3.0 * half.re).abs() < 1e-14);
    let shifted = SmoothWeight::bump(1.0, 2.0);
    let z = mellin(&shifted, Complex64::new(0.5, 2.0)).unwrap();
    let re = simpson(|t| shifted.eval(t) * (Complex64::new(-0.5, 2.0) * t.ln()).exp().re, 1.0, 2.0, 20_000);
    assert!((z.re - re).abs() < 1e-12);
    assert!(mellin(&phi, Complex64::new(0.0, 1.0)).is_err());
}

#[test]
fn transform_matches_cartesian_quadrature() {
    let w = SmoothWeight::default();
    for t in [0.0, 0.5, 1.0, 2.0, 5.0] {
        let polar = w_tilde(&w, t).unwrap();
        let direct = cartesian_transform(&w, t, 1200);
        assert!((polar - direct.re).abs() < 1e-8, "t={t}: {polar} vs {}", direct.re);
        assert!(direct.im.abs() < 1e-10, "t={t}: imaginary part {}", direct.im);
    }
    let w0 = w_tilde(&w, 0.0).unwrap();
    assert!((w0 - PI * w.integral().unwrap()).abs() < 1e-9);
    assert!(w_tilde(&w, 1.0).unwrap().abs() < w0);
}

#[test]
fn transform_of_shifted_support() {
    let w = SmoothWeight::bump(0.5, 2.0);
    for t in [0.0, 0.7, 3.0] {
        let direct = cartesian_transform(&w, t, 1200);
        assert!((w_tilde(&w, t).unwrap() - direct.re).abs() < 1e-8, "t={t}");
    }
}

#[test]
fn decay_thresholds_are_monotone() {
    let w = SmoothWeight::default();
    assert_eq!(decay_threshold(&w, 1.0).unwrap(), 1.0);
    let epss = [1e-4, 1e-6, 1e-8, 1e-10, 1e-12];
    let ts: Vec<f64> = epss.iter().map(|&e| decay_threshold(&w, e).unwrap()).collect();
    assert!(ts.windows(2).all(|p| p[0] <= p[1]), "{ts:?}");
    // Recorded fixture for the unit bump on (0, 1).
    assert!((ts[4] - 69.792_494_890_576_49).abs() < 1e-9, "{}", ts[4]);
    for t in [ts[4], 1.3 * ts[4], 2.0 * ts[4]] {
        assert!(w_tilde(&w, t).unwrap().abs() <= 1e-12, "t={t}");
    }
    assert!(decay_threshold(&w, 1e-15).is_err());
}

#[test]
fn table_agrees_with_direct_transform() {
    let w = SmoothWeight::bump(0.25, 1.5);
    let table = TransformTable::build(w, 1e-10, 1.0).unwrap();
    assert!(table.t_max() >= table.threshold());
    let mut worst: f64 = 0.0;
    for i in 0..400 {
        let t = i as f64 * table.t_max() / 400.0 + 0.0137;
        if t <= table.t_max() {
            worst = worst.max((table.eval(t) - w_tilde(&w, t).unwrap()).abs());
        }
    }
    assert!(worst < 1e-15, "{worst}");
    assert_eq!(table.eval(0.0), table.grid().find(|p| p.0 == 0.0).unwrap().1);
}
