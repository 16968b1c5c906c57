//! Bump weights and their transforms.
//!
//! A [`SmoothWeight`] is `amplitude * exp(-(b - a)^2 / ((t - a)(b - t)))` on
//! `(a, b)` and zero elsewhere; the exponent is normalized so the midpoint
//! value is `amplitude * e^-4`.
//!
//! The transform is
//!
//! ```text
//! W~(t) = 2 int_0^{pi/2} int_0^inf cos(2 pi t sqrt(r) sin(theta)) W(r) dr dtheta
//!       = 4 int_0^inf rho W(rho^2) I(2 pi t rho) d rho,
//! I(z)  = int_0^{pi/2} cos(z sin(theta)) d theta,
//! ```
//!
//! i.e. the two-dimensional Fourier transform of `W(x^2 + y^2)`, evaluated
//! in polar coordinates.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use crate::exec::{Executor, Sequential};
use crate::quad::{integrate, uniform_breaks};
use crate::{Error, Result};

/// Absolute tolerance for [`SmoothWeight::integral`] and [`mellin`].
pub const INTEGRAL_TOLERANCE: f64 = 1e-12;
/// Absolute tolerance for the outer radial integral of [`w_tilde`].
pub const TRANSFORM_TOLERANCE: f64 = 1e-15;
/// Smallest `eps` accepted by [`decay_threshold`].
pub const MIN_DECAY_EPS: f64 = 1e-14;
/// Upper end of the threshold scan.
pub const DECAY_SCAN_MAX: f64 = 1e4;
/// Grid points per octave in the threshold scan.
pub const DECAY_STEPS_PER_OCTAVE: u32 = 8;

const PANEL_BUDGET: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeightKind {
    Bump,
}

impl WeightKind {
    pub fn name(self) -> &'static str {
        match self {
            WeightKind::Bump => "bump",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "bump" | "standard_bump" => Some(WeightKind::Bump),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoothWeight {
    kind: WeightKind,
    lo: f64,
    hi: f64,
    amplitude: f64,
}

impl Default for SmoothWeight {
    fn default() -> Self {
        Self::bump(0.0, 1.0)
    }
}

impl SmoothWeight {
    /// Unit-amplitude bump on `(lo, hi)`. Panics unless `0 <= lo < hi`.
    pub fn bump(lo: f64, hi: f64) -> Self {
        Self::new(WeightKind::Bump, lo, hi, 1.0).expect("invalid bump support")
    }

    pub fn new(kind: WeightKind, lo: f64, hi: f64, amplitude: f64) -> Result<Self> {
        if !(lo >= 0.0 && lo < hi && hi.is_finite()) {
            return Err(Error::Domain("weight support must satisfy 0 <= lo < hi < inf"));
        }
        if !(amplitude >= 0.0 && amplitude.is_finite()) {
            return Err(Error::Domain("weight amplitude must be finite and non-negative"));
        }
        Ok(Self { kind, lo, hi, amplitude })
    }

    pub fn with_amplitude(self, amplitude: f64) -> Result<Self> {
        Self::new(self.kind, self.lo, self.hi, amplitude)
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// Whether `t` lies in the open support.
    pub fn contains(&self, t: f64) -> bool {
        t > self.lo && t < self.hi
    }

    pub fn eval(&self, t: f64) -> f64 {
        if !self.contains(t) || self.amplitude == 0.0 {
            return 0.0;
        }
        let w = self.hi - self.lo;
        self.amplitude * libm::exp(-(w * w) / ((t - self.lo) * (self.hi - t)))
    }

    /// `int_0^inf W(t) dt`.
    pub fn integral(&self) -> Result<f64> {
        let breaks = uniform_breaks(self.lo, self.hi, 8);
        Ok(integrate(|t| self.eval(t), &breaks, INTEGRAL_TOLERANCE, PANEL_BUDGET)?.value)
    }
}

/// `int_0^inf W(t) t^(s-1) dt`.
pub fn mellin(weight: &SmoothWeight, s: Complex64) -> Result<Complex64> {
    if !(s.re > 0.0) {
        return Err(Error::Domain("mellin transform needs Re s > 0"));
    }
    let (lo, hi) = weight.support();
    let breaks = uniform_breaks(lo, hi, 8);
    let power = |t: f64| (Complex64::new(libm::log(t), 0.0) * (s - 1.0)).exp();
    let re = integrate(|t| if weight.contains(t) { weight.eval(t) * power(t).re } else { 0.0 }, &breaks, INTEGRAL_TOLERANCE, PANEL_BUDGET)?;
    let im = integrate(|t| if weight.contains(t) { weight.eval(t) * power(t).im } else { 0.0 }, &breaks, INTEGRAL_TOLERANCE, PANEL_BUDGET)?;
    Ok(Complex64::new(re.value, im.value))
}

/// `int_0^{pi/2} g(sin(theta)) d theta` for an even `g` of exponential
/// type at most `bandwidth`, by the trapezoid rule. The integrand extends to
/// a smooth periodic function, so the rule converges spectrally; the step is
/// halved until successive sums agree.
pub fn quarter_trapezoid<G: Fn(f64) -> f64>(g: G, bandwidth: f64) -> f64 {
    let mut m: usize = 8;
    let edge = 0.5 * (g(0.0) + g(1.0));
    let mut interior = 0.0;
    for j in 1..m {
        interior += g(libm::sin(FRAC_PI_2 * j as f64 / m as f64));
    }
    let mut prev = FRAC_PI_2 / m as f64 * (edge + interior);
    loop {
        for j in 0..m {
            interior += g(libm::sin(FRAC_PI_2 * (2 * j + 1) as f64 / (2 * m) as f64));
        }
        m *= 2;
        let cur = FRAC_PI_2 / m as f64 * (edge + interior);
        // Past `m ~ bandwidth / 2` the error falls off super-geometrically,
        // so a small change between levels means `cur` is at roundoff.
        if (m as f64 >= 0.5 * bandwidth.abs() + 16.0 && (cur - prev).abs() <= 1e-12) || m >= 1 << 24 {
            return cur;
        }
        prev = cur;
    }
}

/// `int_0^{pi/2} cos(z sin(theta)) d theta`.
pub fn quarter_period_integral(z: f64) -> f64 {
    quarter_trapezoid(|s| libm::cos(z * s), z)
}

/// `int_0^inf rho W(rho^2) cos(2 pi u rho) d rho`.
pub fn radial_cosine(weight: &SmoothWeight, u: f64) -> Result<f64> {
    let (lo, hi) = weight.support();
    let (a, b) = (libm::sqrt(lo), libm::sqrt(hi));
    let panels = (libm::ceil(4.0 * u.abs() * (b - a)) as usize).max(8);
    let breaks = uniform_breaks(a, b, panels);
    let f = |rho: f64| rho * weight.eval(rho * rho) * libm::cos(TAU * u * rho);
    Ok(integrate(f, &breaks, TRANSFORM_TOLERANCE / 4.0, PANEL_BUDGET)?.value)
}

/// `W~(t)` by nested quadrature in polar coordinates: the angular integral
/// via [`quarter_period_integral`], the radial one by adaptive Gauss-Kronrod
/// on panels no wider than a quarter of the radial oscillation `1 / t`.
pub fn w_tilde(weight: &SmoothWeight, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain("transform argument must be non-negative"));
    }
    let (lo, hi) = weight.support();
    let (a, b) = (libm::sqrt(lo), libm::sqrt(hi));
    let panels = (libm::ceil(4.0 * t * (b - a)) as usize).max(8);
    let breaks = uniform_breaks(a, b, panels);
    let radial = |rho: f64| {
        let w = weight.eval(rho * rho);
        if w == 0.0 {
            0.0
        } else {
            rho * w * quarter_period_integral(TAU * t * rho)
        }
    };
    Ok(4.0 * integrate(radial, &breaks, TRANSFORM_TOLERANCE / 4.0, PANEL_BUDGET)?.value)
}

/// Geometric scan grid `2^(j/8)`, `j = 0, 1, ...`, on `[1, 1e4]`.
pub fn decay_grid() -> Vec<f64> {
    let steps = libm::floor(libm::log2(DECAY_SCAN_MAX) * f64::from(DECAY_STEPS_PER_OCTAVE)) as u32;
    (0..=steps).map(|j| libm::exp2(f64::from(j) / f64::from(DECAY_STEPS_PER_OCTAVE))).collect()
}

/// Smallest scan-grid `T` such that `|W~(t)| <= eps` at every grid point of
/// `[T, 2T]`.
pub fn decay_threshold(weight: &SmoothWeight, eps: f64) -> Result<f64> {
    if !(eps >= MIN_DECAY_EPS) {
        return Err(Error::Domain("decay threshold needs eps >= 1e-14"));
    }
    let grid = decay_grid();
    let window = DECAY_STEPS_PER_OCTAVE as usize;
    let mut run = 0usize;
    for (j, &t) in grid.iter().enumerate() {
        if w_tilde(weight, t)?.abs() <= eps {
            run += 1;
            if run > window {
                return Ok(grid[j - window]);
            }
        } else {
            run = 0;
        }
    }
    Err(Error::ThresholdNotFound { eps })
}

/// Chebyshev-Lobatto nodes per table panel, minus one.
pub const TABLE_DEGREE: usize = 32;

/// Piecewise Chebyshev-Lobatto interpolant on `[0, panels * width]`.
#[derive(Clone, Debug)]
struct Piecewise {
    width: f64,
    /// Lobatto nodes on `[-1, 1]`, descending.
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl Piecewise {
    fn build<E, F>(width: f64, panels: usize, exec: &E, f: F) -> Result<Self>
    where
        E: Executor,
        F: Fn(f64) -> Result<f64> + Sync + Send,
    {
        let nodes: Vec<f64> = (0..=TABLE_DEGREE).map(|j| libm::cos(PI * j as f64 / TABLE_DEGREE as f64)).collect();
        let mut table = Self { width, nodes, values: Vec::new() };
        let values = exec
            .map_indexed(panels * (TABLE_DEGREE + 1), |idx| f(table.abscissa(idx)))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        table.values = values;
        Ok(table)
    }

    fn abscissa(&self, idx: usize) -> f64 {
        let (p, j) = (idx / (TABLE_DEGREE + 1), idx % (TABLE_DEGREE + 1));
        self.width * (p as f64 + 0.5 * (self.nodes[j] + 1.0))
    }

    fn panels(&self) -> usize {
        self.values.len() / (TABLE_DEGREE + 1)
    }

    fn span(&self) -> f64 {
        self.panels() as f64 * self.width
    }

    /// Barycentric evaluation; `t` is clamped into the covered range.
    fn eval(&self, t: f64) -> f64 {
        let per = TABLE_DEGREE + 1;
        let p = ((t / self.width) as usize).min(self.panels() - 1);
        let x = 2.0 * (t / self.width - p as f64) - 1.0;
        let vals = &self.values[p * per..(p + 1) * per];
        let (mut num, mut den) = (0.0, 0.0);
        for (j, (&node, &v)) in self.nodes.iter().zip(vals).enumerate() {
            let d = x - node;
            if d == 0.0 {
                return v;
            }
            let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == TABLE_DEGREE {
                w *= 0.5;
            }
            num += w * v / d;
            den += w / d;
        }
        num / den
    }
}

/// Tabulated `W~` on `[0, t_max]`, zero beyond.
///
/// Built in the opposite nesting to [`w_tilde`]: the radial integral
/// [`radial_cosine`] is tabulated first, then
/// `W~(t) = 4 int_0^{pi/2} C(t sin(theta)) d theta` is taken at the nodes of
/// a second interpolant.
#[derive(Clone, Debug)]
pub struct TransformTable {
    weight: SmoothWeight,
    eps: f64,
    threshold: f64,
    transform: Piecewise,
}

impl TransformTable {
    /// Table over `[0, span * decay_threshold(eps)]`.
    pub fn build(weight: SmoothWeight, eps: f64, span: f64) -> Result<Self> {
        Self::build_with(weight, eps, span, &Sequential)
    }

    pub fn build_with<E: Executor>(weight: SmoothWeight, eps: f64, span: f64, exec: &E) -> Result<Self> {
        if !(span >= 1.0) {
            return Err(Error::Domain("table span must be at least 1"));
        }
        let threshold = decay_threshold(&weight, eps)?;
        let root_hi = libm::sqrt(weight.support().1);
        // Both functions oscillate with period about 1 / sqrt(hi).
        let width = 2.0 / root_hi;
        let panels = (libm::ceil(threshold * span / width) as usize).max(1);
        let cosine = Piecewise::build(width, panels, exec, |u| radial_cosine(&weight, u))?;
        let transform = Piecewise::build(width, panels, exec, |t| {
            Ok(4.0 * quarter_trapezoid(|s| cosine.eval(t * s), TAU * t * root_hi))
        })?;
        Ok(Self { weight, eps, threshold, transform })
    }

    pub fn weight(&self) -> &SmoothWeight {
        &self.weight
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// `decay_threshold(weight, eps)`.
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn t_max(&self) -> f64 {
        self.transform.span()
    }

    /// Sample points and values.
    pub fn grid(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.transform.values.iter().enumerate().map(|(idx, &v)| (self.transform.abscissa(idx), v))
    }

    pub fn eval(&self, t: f64) -> f64 {
        if !(t >= 0.0) || t > self.t_max() {
            return 0.0;
        }
        self.transform.eval(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        let w = SmoothWeight::default();
        assert_eq!(w.eval(0.0), 0.0);
        assert_eq!(w.eval(1.0), 0.0);
        assert_eq!(w.eval(-0.3), 0.0);
        assert!((w.eval(0.5) - libm::exp(-4.0)).abs() < 1e-17);
    }

    #[test]
    fn quarter_period_matches_bessel() {
        for z in [0.0, 0.3, 1.0, 7.5, 40.0, 300.0, 1500.0] {
            let expect = FRAC_PI_2 * libm::j0(z);
            assert!((quarter_period_integral(z) - expect).abs() < 1e-14, "z = {z}");
        }
    }

    #[test]
    fn transform_at_zero_is_pi_times_integral() {
        let w = SmoothWeight::default();
        let lhs = w_tilde(&w, 0.0).unwrap();
        assert!((lhs - PI * w.integral().unwrap()).abs() < 1e-12);
    }

    #[test]
    fn table_interpolates() {
        let w = SmoothWeight::default();
        let table = TransformTable::build(w, 1e-6, 1.0).unwrap();
        for t in [0.0, 0.013, 0.77, 3.3, 9.91] {
            assert!((table.eval(t) - w_tilde(&w, t).unwrap()).abs() < 1e-14, "t = {t}");
        }
        assert_eq!(table.eval(table.t_max() + 1.0), 0.0);
    }
}
