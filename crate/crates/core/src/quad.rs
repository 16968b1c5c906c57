//! Adaptive Gauss-Kronrod quadrature and order-fixed summation.

use alloc::vec::Vec;
use core::ops::Add;

use crate::{Error, Result};

/// Kronrod abscissae on `[-1, 1]` (non-negative half, descending).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// 7-point Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Sum of the accepted panels' `|K15 - G7|` estimates.
    pub error: f64,
    pub panels: usize,
}

/// One G7-K15 panel: `(kronrod, |kronrod - gauss|, integral of |f|)`.
pub fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut abs = WGK[7] * fc.abs();
    for j in 0..7 {
        let dx = h * XGK[j];
        let (f1, f2) = (f(c - dx), f(c + dx));
        k += WGK[j] * (f1 + f2);
        abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            g += WG[j / 2] * (f1 + f2);
        }
    }
    (k * h, ((k - g) * h).abs(), abs * h.abs())
}

/// Integrate `f` over `[breaks[0], breaks[last]]`, starting from the panels
/// delimited by `breaks` and bisecting any panel whose error estimate exceeds
/// its share of `abs_tol` (proportional to width). Panels are visited depth
/// first, left to right, so the result is deterministic.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    breaks: &[f64],
    abs_tol: f64,
    max_panels: usize,
) -> Result<Estimate> {
    assert!(breaks.len() >= 2, "need at least one panel");
    let total = breaks[breaks.len() - 1] - breaks[0];
    if total == 0.0 {
        return Ok(Estimate { value: 0.0, error: 0.0, panels: 0 });
    }
    let density = abs_tol / total.abs();
    let mut values = Vec::new();
    let mut error = 0.0;
    let mut evaluated = 0usize;
    let mut stack: Vec<(f64, f64)> = breaks.windows(2).rev().map(|w| (w[0], w[1])).collect();
    while let Some((a, b)) = stack.pop() {
        evaluated += 1;
        if evaluated > max_panels {
            return Err(Error::QuadratureBudget { panels: max_panels });
        }
        let (v, e, abs) = gk15(&mut f, a, b);
        let roundoff = 64.0 * f64::EPSILON * abs;
        let mid = 0.5 * (a + b);
        let splittable = mid > a.min(b) && mid < a.max(b);
        if e <= density * (b - a).abs() || e <= roundoff || !splittable {
            values.push(v);
            error += e;
        } else {
            stack.push((mid, b));
            stack.push((a, mid));
        }
    }
    Ok(Estimate { value: pairwise_sum(&values), error, panels: values.len() })
}

/// `n + 1` equally spaced break points on `[a, b]`.
pub fn uniform_breaks(a: f64, b: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n).map(|j| if j == n { b } else { a + (b - a) * j as f64 / n as f64 }).collect()
}

/// Pairwise (cascade) summation in index order.
pub fn pairwise_sum<T: Copy + Default + Add<Output = T>>(xs: &[T]) -> T {
    const BLOCK: usize = 16;
    if xs.len() <= BLOCK {
        return xs.iter().fold(T::default(), |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
