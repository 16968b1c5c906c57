//! The double Dirichlet series
//!
//! ```text
//! J_{k1}(v, w) = sum_{n primary} sum_{k2 in G} g2(k1 k2^2, n) / (N(n)^(1+w) N(k2)^(c v))
//! ```
//!
//! for square-free `k1`, its Euler factors, and the factorization
//! `J_{k1}(v, w) = L(1/2 + w, chi_{i k1}) J_{2,k1}(v, w)`.
//!
//! `G` holds one generator per ideal (see [`GeneratorChoice`]); `c` is fixed
//! by [`ExponentConvention`]. The Euler factor at a prime `p` is the sum over
//! `(a, b)` of `g2(k1 p^(2b), p^a) / N(p)^(a + a w + c b v)`; the factor at
//! `1 + i` only sees `k2` and equals `1 / (1 - 2^(-c v))`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::gauss_sum::{classify, GaussSumModulus, LocalCase};
use crate::gint::{self, factor, prime_elements_up_to_norm, GaussianInt, GeneratorChoice, Unit};
use crate::quad::pairwise_sum;
use crate::symbols::{quadratic_prime, quadratic_symbol};
use crate::{Error, Result};

/// How `N(k2)` enters the series.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExponentConvention {
    /// `N(k2)^-v`.
    Single,
    /// `N(k2)^-2v`, as in the Euler factors `N(p)^-(a w + 2 b v)`.
    #[default]
    Double,
}

impl ExponentConvention {
    pub fn multiplier(self) -> f64 {
        match self {
            ExponentConvention::Single => 1.0,
            ExponentConvention::Double => 2.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ExponentConvention::Single => "single",
            ExponentConvention::Double => "double",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeriesCaps {
    pub n_norm_cap: u64,
    pub k2_norm_cap: u64,
    pub prime_norm_cap: u64,
}

impl Default for SeriesCaps {
    fn default() -> Self {
        Self { n_norm_cap: 4000, k2_norm_cap: 2000, prime_norm_cap: 1_000_000 }
    }
}

impl SeriesCaps {
    pub fn doubled(self) -> Self {
        Self {
            n_norm_cap: 2 * self.n_norm_cap,
            k2_norm_cap: 2 * self.k2_norm_cap,
            prime_norm_cap: 2 * self.prime_norm_cap,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesPoint {
    pub k1: GaussianInt,
    pub v: Complex64,
    pub w: Complex64,
    pub caps: SeriesCaps,
    pub convention: ExponentConvention,
    pub generators: GeneratorChoice,
}

impl SeriesPoint {
    pub fn new(k1: GaussianInt, v: f64, w: f64) -> Self {
        Self {
            k1,
            v: Complex64::new(v, 0.0),
            w: Complex64::new(w, 0.0),
            caps: SeriesCaps::default(),
            convention: ExponentConvention::default(),
            generators: GeneratorChoice::default(),
        }
    }
}

/// A truncated sum and a bound on what the truncation dropped.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truncated {
    pub value: Complex64,
    pub tail_bound: f64,
    pub terms: u64,
}

/// Minimum real part of `v` and `w` for the truncated sums.
pub const MIN_TRUNCATED_EXPONENT: f64 = 1.25;

fn npow(norm: u64, s: Complex64) -> Complex64 {
    (-s * libm::log(norm as f64)).exp()
}

/// Upper bound for `sum_{N(a) > cap} N(a)^-sigma` over nonzero ideals `a`,
/// by partial summation from `#{a : N(a) <= x} <= (pi/4)(x + 2 sqrt(x) + 1)`.
pub fn ideal_tail_bound(cap: u64, sigma: f64) -> f64 {
    assert!(sigma > 1.0, "tail bound needs sigma > 1");
    let c = cap.max(1) as f64;
    let q = core::f64::consts::FRAC_PI_4;
    sigma
        * (q * libm::pow(c, 1.0 - sigma) / (sigma - 1.0)
            + 2.0 * q * libm::pow(c, 0.5 - sigma) / (sigma - 0.5)
            + q * libm::pow(c, -sigma) / sigma)
}

fn check_squarefree(k1: GaussianInt) -> Result<()> {
    if !factor(k1)?.is_squarefree() {
        return Err(Error::Domain("k1 must be square-free"));
    }
    Ok(())
}

/// `chi_{i k1}(n) = (i k1 / n)_2` for primary `n`.
pub fn chi_ik1(k1: GaussianInt, n: GaussianInt) -> Result<f64> {
    Ok(f64::from(quadratic_symbol(k1.mul_unit(Unit::I), n)?.as_real().expect("real")))
}

/// `chi_{i k1}` at a prime of `Z[i]`; zero at `1 + i`.
fn chi_at_prime(k1: GaussianInt, p: GaussianInt) -> Result<f64> {
    if p == GaussianInt::ONE_PLUS_I {
        return Ok(0.0);
    }
    Ok(f64::from(quadratic_prime(k1.mul_unit(Unit::I), p)?.as_real().expect("real")))
}

/// Elements of `G` with norm at most `bound`, sorted by norm.
pub fn generators_up_to_norm(bound: u64, choice: GeneratorChoice) -> Result<Vec<GaussianInt>> {
    let primes = prime_elements_up_to_norm(bound)?;
    let mut out = Vec::new();
    fn walk(
        primes: &[GaussianInt],
        choice: GeneratorChoice,
        start: usize,
        acc: GaussianInt,
        norm: u64,
        bound: u64,
        out: &mut Vec<(u64, GaussianInt)>,
    ) {
        out.push((norm, acc));
        for (j, &p) in primes.iter().enumerate().skip(start) {
            let np = p.norm_wide() as u64;
            if norm.saturating_mul(np) > bound {
                break;
            }
            let g = choice.prime_generator(p);
            walk(primes, choice, j, acc * g, norm * np, bound, out);
        }
    }
    walk(&primes, choice, 0, GaussianInt::ONE, 1, bound, &mut out);
    out.sort_by_key(|&(n, z)| (n, z.re, z.im));
    Ok(out.into_iter().map(|(_, z)| z).collect())
}

/// `J_{k1}(v, w)` summed over `N(n) <= n_norm_cap`, `N(k2) <= k2_norm_cap`.
///
/// The tail bound uses `|g2(k, n)| <= N(n)`, so the dropped part is at most
/// `A_all B_all - A_cap B_cap` with `A`, `B` the majorant sums over `n` and
/// over `k2`.
pub fn j_truncated(p: &SeriesPoint) -> Result<Truncated> {
    if p.v.re < MIN_TRUNCATED_EXPONENT || p.w.re < MIN_TRUNCATED_EXPONENT {
        return Err(Error::Domain("j_truncated needs Re v, Re w >= 1.25"));
    }
    check_squarefree(p.k1)?;
    let c = p.convention.multiplier();
    let ns = gint::primaries_up_to_norm(p.caps.n_norm_cap);
    let k2s = generators_up_to_norm(p.caps.k2_norm_cap, p.generators)?;
    let args = k2s
        .iter()
        .map(|&k2| {
            let sq = k2.checked_mul(k2).and_then(|s| p.k1.checked_mul(s)).ok_or(Error::Overflow)?;
            Ok((sq, npow(k2.norm()?, p.v * c)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut partials = Vec::with_capacity(ns.len());
    for &n in &ns {
        let modulus = GaussSumModulus::new(n)?;
        let weight = npow(modulus.norm(), p.w + 1.0);
        let row = args
            .iter()
            .map(|&(r, kv)| Ok(kv * modulus.eval(r)?.to_f64()))
            .collect::<Result<Vec<Complex64>>>()?;
        partials.push(weight * pairwise_sum(&row));
    }
    let (sw, sv) = (p.w.re, c * p.v.re);
    let a_cap: f64 = ns.iter().map(|n| libm::pow(n.norm_wide() as f64, -sw)).sum();
    let b_cap: f64 = k2s.iter().map(|k| libm::pow(k.norm_wide() as f64, -sv)).sum();
    let a_tail = ideal_tail_bound(p.caps.n_norm_cap, sw);
    let b_tail = ideal_tail_bound(p.caps.k2_norm_cap, sv);
    Ok(Truncated {
        value: pairwise_sum(&partials),
        tail_bound: a_tail * (b_cap + b_tail) + a_cap * b_tail,
        terms: (ns.len() * k2s.len()) as u64,
    })
}

/// `sum_{n primary, N(n) <= cap} chi_{i k1}(n) N(n)^-s`.
pub fn l_hecke_truncated(s: Complex64, k1: GaussianInt, cap: u64) -> Result<Truncated> {
    if s.re < MIN_TRUNCATED_EXPONENT {
        return Err(Error::Domain("l_hecke_truncated needs Re s >= 1.25"));
    }
    let ns = gint::primaries_up_to_norm(cap);
    let terms = ns
        .iter()
        .map(|&n| Ok(npow(n.norm()?, s) * chi_ik1(k1, n)?))
        .collect::<Result<Vec<Complex64>>>()?;
    Ok(Truncated { value: pairwise_sum(&terms), tail_bound: ideal_tail_bound(cap, s.re), terms: ns.len() as u64 })
}

/// `g2(r, p^a) / N(p)^a` for `p^h || r` (`h = None` for `r = 0`), with
/// `sign = (i r p^-h / p)_2`.
fn normalized_local(a: u32, h: Option<u32>, norm: f64, sign: f64) -> f64 {
    match classify(a, h) {
        LocalCase::Zero => 0.0,
        LocalCase::Totient if a == 0 => 1.0,
        LocalCase::Totient => 1.0 - 1.0 / norm,
        LocalCase::NegativePower => -1.0 / norm,
        LocalCase::SymbolSqrt => sign / libm::sqrt(norm),
    }
}

/// Terms of a local series below this are dropped.
const LOCAL_TAIL: f64 = 1e-16;

/// Sum `sum_b x^b inner(b)` until `(b + 2) |x|^b` falls below the tail.
fn geometric<F: FnMut(u32) -> Complex64>(x: Complex64, mut inner: F) -> Complex64 {
    let q = x.norm();
    assert!(q < 1.0, "local series diverges");
    let mut acc = Complex64::new(0.0, 0.0);
    let mut xb = Complex64::new(1.0, 0.0);
    let mut b = 0u32;
    loop {
        acc += xb * inner(b);
        b += 1;
        xb *= x;
        if (b as f64 + 2.0) * libm::pow(q, b as f64) < LOCAL_TAIL {
            return acc;
        }
    }
}

/// The Euler factor `J_{p,k1}(v, w)` summed from its defining series; the
/// factor at `1 + i` is `sum_b 2^(-c b v)`.
pub fn j_local(p: GaussianInt, k1: GaussianInt, v: Complex64, w: Complex64, conv: ExponentConvention) -> Result<Complex64> {
    let norm = p.norm()?;
    let x = npow(norm, v * conv.multiplier());
    if p == GaussianInt::ONE_PLUS_I {
        return Ok(geometric(x, |_| Complex64::new(1.0, 0.0)));
    }
    let (h1, unit_part) = match p.exact_div_of(k1) {
        Some(q) => (1, q),
        None => (0, k1),
    };
    let sign = if k1.is_zero() { 0.0 } else { chi_at_prime(unit_part, p)? };
    let y = npow(norm, w);
    let nf = norm as f64;
    Ok(geometric(x, |b| {
        let h = if k1.is_zero() { None } else { Some(h1 + 2 * b) };
        let top = h.map_or(2 * b + 2, |h| h + 1);
        let mut s = Complex64::new(0.0, 0.0);
        let mut ya = Complex64::new(1.0, 0.0);
        for a in 0..=top {
            s += ya * normalized_local(a, h, nf, sign);
            ya *= y;
        }
        s
    }))
}

/// The generic Euler factor `J^gen_{p,k1}(v, w)`:
/// `sum_b x^b (sum_{j <= b} y^(2j) phi(p^2j)/N(p)^2j + chi(p) y^(2b+1) / N(p)^(1/2))`
/// with `x = N(p)^(-c v)`, `y = N(p)^-w`.
pub fn j_gen_factor(p: GaussianInt, k1: GaussianInt, v: Complex64, w: Complex64, conv: ExponentConvention) -> Result<Complex64> {
    let norm = p.norm()?;
    let nf = norm as f64;
    let chi = if p.divides(k1) { 0.0 } else { chi_at_prime(k1, p)? };
    let x = npow(norm, v * conv.multiplier());
    let y = npow(norm, w);
    let y2 = y * y;
    let mut even = Complex64::new(0.0, 0.0);
    let mut y2j = Complex64::new(1.0, 0.0);
    let mut y_odd = y;
    Ok(geometric(x, |b| {
        even += y2j * if b == 0 { 1.0 } else { 1.0 - 1.0 / nf };
        y2j *= y2;
        let odd = y_odd * chi / libm::sqrt(nf);
        y_odd *= y2;
        even + odd
    }))
}

/// Lower bounds on `Re v`, `Re w` for [`j_gen_factor`] and [`j2`].
pub const MIN_GEN_V: f64 = 0.75;
pub const MIN_GEN_W: f64 = 0.25;

/// `J_{2,k1}(v, w)` as an Euler product over primes of norm at most `cap`,
/// with the exact factors at the primes dividing `(1+i) k1`.
pub fn j2(k1: GaussianInt, v: Complex64, w: Complex64, cap: u64, conv: ExponentConvention) -> Result<Truncated> {
    if v.re < MIN_GEN_V || w.re < MIN_GEN_W {
        return Err(Error::Domain("j2 needs Re v >= 0.75 and Re w >= 0.25"));
    }
    check_squarefree(k1)?;
    let primes = prime_elements_up_to_norm(cap)?;
    let mut logs = Vec::with_capacity(primes.len());
    for &p in &primes {
        let np = p.norm()?;
        let chi = if p.divides(k1) { 0.0 } else { chi_at_prime(k1, p)? };
        let mut f = (Complex64::new(1.0, 0.0) - npow(np, w + 0.5) * chi) * j_gen_factor(p, k1, v, w, conv)?;
        if p == GaussianInt::ONE_PLUS_I || p.divides(k1) {
            f *= j_local(p, k1, v, w, conv)? / j_gen_factor(p, k1, v, w, conv)?;
        }
        logs.push(f.ln());
    }
    // Primes dividing k1 above the cap still need their exact factor.
    for &(p, _) in &factor(k1)?.factors {
        if p.norm()? > cap {
            logs.push(j_local(p, k1, v, w, conv)?.ln());
        }
    }
    logs.reverse();
    let value = pairwise_sum(&logs).exp();
    // |E_p - 1| <= N^(-1-2 Re w) + 2 q (3 - 2q)/(1 - q)^2, q = N^(-c Re v).
    let (sw, sv) = (w.re, conv.multiplier() * v.re);
    let q_cap = libm::pow(cap as f64, -sv);
    let delta = ideal_tail_bound(cap, 1.0 + 2.0 * sw) + 6.0 / ((1.0 - q_cap) * (1.0 - q_cap)) * ideal_tail_bound(cap, sv.max(1.0 + 1e-9));
    let log_bound = delta / (1.0 - delta.min(0.5));
    Ok(Truncated { value, tail_bound: value.norm() * (libm::exp(log_bound) - 1.0), terms: primes.len() as u64 })
}

/// Outcome of [`verify_factorization`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FactorizationReport {
    pub point: SeriesPoint,
    pub j: Truncated,
    pub l: Truncated,
    pub j2: Truncated,
    /// `|J - L J2|` between the truncated values.
    pub delta: f64,
    /// Worst case of `delta` allowed by the three truncations.
    pub budget: f64,
    pub relative: f64,
    pub passed: bool,
}

/// The `k1` values checked by the verification suite.
pub const VERIFICATION_K1: [GaussianInt; 7] = [
    GaussianInt::new(1, 0),
    GaussianInt::new(0, 1),
    GaussianInt::new(-1, 0),
    GaussianInt::new(0, -1),
    GaussianInt::new(-1, 2),
    GaussianInt::new(-3, 0),
    GaussianInt::new(3, -6),
];

/// Required agreement between `J` and `L J2`, relative to `|J|`.
pub const FACTORIZATION_RELATIVE: f64 = 1e-2;

/// Compare the truncated series with the truncated `L(1/2 + w) J_2`.
pub fn verify_factorization(p: &SeriesPoint) -> Result<FactorizationReport> {
    let j = j_truncated(p)?;
    let s = p.w + 0.5;
    let l = l_hecke_truncated(s, p.k1, p.caps.n_norm_cap)?;
    let j2v = j2(p.k1, p.v, p.w, p.caps.prime_norm_cap, p.convention)?;
    let delta = (j.value - l.value * j2v.value).norm();
    let budget = j.tail_bound + l.tail_bound * (j2v.value.norm() + j2v.tail_bound) + l.value.norm() * j2v.tail_bound;
    let relative = delta / j.value.norm();
    Ok(FactorizationReport {
        point: *p,
        j,
        l,
        j2: j2v,
        delta,
        budget,
        relative,
        passed: delta <= budget && relative <= FACTORIZATION_RELATIVE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss_sum::prime_power_value;

    const fn g(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    #[test]
    fn generator_set_counts_ideals() {
        // Ideals of norm <= 10: norms 1, 2, 4, 5, 5, 8, 9, 10, 10.
        let gs = generators_up_to_norm(10, GeneratorChoice::Primary).unwrap();
        assert_eq!(gs.len(), 9);
        assert_eq!(gs[0], GaussianInt::ONE);
        let rotated = generators_up_to_norm(10, GeneratorChoice::Rotated).unwrap();
        assert_eq!(rotated.len(), 9);
    }

    #[test]
    fn local_terms_match_exact_gauss_sums() {
        let p = g(-1, 2);
        for k1 in [g(1, 0), g(0, 1), p, g(-3, 0), p * g(-3, 0)] {
            let h1 = if p.divides(k1) { 1 } else { 0 };
            let unit_part = if h1 == 1 { p.exact_div_of(k1).unwrap() } else { k1 };
            let sign = chi_at_prime(unit_part, p).unwrap();
            for b in 0..3u32 {
                let r = k1 * p.checked_pow(2 * b).unwrap();
                for a in 0..6u32 {
                    let exact = prime_power_value(r, p, a, 5).unwrap().to_f64() / 5f64.powi(a as i32);
                    let local = normalized_local(a, Some(h1 + 2 * b), 5.0, sign);
                    assert!((exact - local).abs() < 1e-15, "k1={k1} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn generic_and_local_agree_off_k1() {
        let (v, w) = (Complex64::new(1.5, 0.2), Complex64::new(1.1, -0.3));
        for p in [g(-1, 2), g(-1, -2), g(-3, 0), g(3, 2)] {
            for k1 in [g(1, 0), g(0, -1), g(-7, 0)] {
                for conv in [ExponentConvention::Single, ExponentConvention::Double] {
                    let a = j_gen_factor(p, k1, v, w, conv).unwrap();
                    let b = j_local(p, k1, v, w, conv).unwrap();
                    assert!((a - b).norm() < 1e-14, "p={p} k1={k1}");
                }
            }
        }
    }

    #[test]
    fn zero_k2_contribution() {
        // With x -> 0 only b = 0 survives: 1 + chi N^(-1/2 - w).
        let (p, k1) = (g(-1, 2), g(1, 0));
        let w = Complex64::new(0.7, 0.0);
        let v = Complex64::new(60.0, 0.0);
        let chi = chi_at_prime(k1, p).unwrap();
        let expect = 1.0 + chi * libm::pow(5.0, -1.2);
        assert!((j_gen_factor(p, k1, v, w, ExponentConvention::Double).unwrap().re - expect).abs() < 1e-15);
    }
}
