//! The smoothed sum
//!
//! ```text
//! S2(X, Y) = sum_{n primary} sum_{(m, 1+i) = 1} ((1+i) m / n)_2 Phi(N(n)/Y) W(N(m)/X)
//! ```
//!
//! evaluated directly ([`s2_direct`]) and through its Poisson dual
//! ([`PoissonEvaluator`]):
//!
//! ```text
//! S2(X, Y) = X/2 sum_k (-1)^N(k) sum_n g2(k, n)/N(n) Phi(N(n)/Y) W~(sqrt(N(k) X / (2 N(n)))).
//! ```
//!
//! The `((1+i)/n)_2` in the sum cancels the one produced by Poisson summation
//! over `m`, so neither path carries it beyond the per-`n` check in
//! [`twisted_m_sum`]. The `k = 0` term is [`m0_term`]; only squares
//! `n = l^2` contribute to it, with `g2(0, l^2) = phi(l^2)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::exec::Executor;
use crate::gauss_sum::{phi, GaussSumModulus};
use crate::gint::{self, factor, rational, GaussianInt, ResidueMap};
use crate::quad::pairwise_sum;
use crate::smooth::{mellin, w_tilde, SmoothWeight, TransformTable};
use crate::symbols::quadratic_symbol_factored;
use crate::{Error, Result};

/// Truncation and budget settings shared by both evaluators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationPolicy {
    /// Transform values below this are treated as the dual tail.
    pub eps_tail: f64,
    /// Dual frequencies satisfy `N(k) X / (2 N(n)) <= k_cap_scale * T(eps_tail)^2`.
    pub k_cap_scale: f64,
    /// Largest `N(n)` either evaluator will enumerate.
    pub n_norm_cap: u64,
    /// Largest number of `(m, n)` pairs [`s2_direct`] will visit.
    pub direct_budget: u64,
    /// Largest number of `(k, n)` pairs the dual evaluator will visit.
    pub dual_budget: u64,
    /// Include `(-1)^N(k)` in the dual sum. Only switched off as a negative
    /// control.
    pub parity_sign: bool,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            eps_tail: 1e-10,
            k_cap_scale: 1.0,
            n_norm_cap: 10_000_000,
            direct_budget: 2_000_000_000,
            dual_budget: 2_000_000_000,
            parity_sign: true,
        }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps_tail > 0.0) {
            return Err(Error::Policy("eps_tail must be positive"));
        }
        if !(self.k_cap_scale >= 1.0 && self.k_cap_scale.is_finite()) {
            return Err(Error::Policy("k_cap_scale must be finite and at least 1"));
        }
        if self.n_norm_cap == 0 || self.direct_budget == 0 || self.dual_budget == 0 {
            return Err(Error::Policy("caps and budgets must be positive"));
        }
        Ok(())
    }
}

/// Result of [`s2_direct`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirectSum {
    pub value: f64,
    pub moduli: usize,
    pub pairs: u64,
}

/// Result of [`PoissonEvaluator::s2`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualSum {
    pub value: f64,
    /// The `k = 0` part of `value`.
    pub k0_term: f64,
    pub moduli: usize,
    pub pairs: u64,
}

fn check_inputs(x: f64, y: f64) -> Result<()> {
    if !(x >= 1.0 && y >= 1.0 && x.is_finite() && y.is_finite()) {
        return Err(Error::Domain("X and Y must be finite and at least 1"));
    }
    Ok(())
}

/// Primary `n` with `N(n)/Y` in the open support of `phi_w`, by norm.
pub fn moduli(y: f64, phi_w: &SmoothWeight, policy: &TruncationPolicy) -> Result<Vec<GaussianInt>> {
    let (lo, hi) = phi_w.support();
    let top = hi * y;
    if top > policy.n_norm_cap as f64 {
        return Err(Error::Policy("Y * sup(supp Phi) exceeds n_norm_cap"));
    }
    let mut out = gint::primaries_up_to_norm(top as u64);
    out.retain(|n| {
        let t = n.norm_wide() as f64 / y;
        t > lo && t < hi
    });
    Ok(out)
}

/// `(m, W(N(m)/X))` for odd `m` with `N(m)/X` in the support of `w`,
/// sorted by `(N(m), re, im)`.
pub fn odd_terms(x: f64, w: &SmoothWeight) -> Vec<(GaussianInt, f64)> {
    let (_, hi) = w.support();
    let mut ms: Vec<GaussianInt> = gint::elements_up_to_norm((hi * x) as u64)
        .filter(|m| m.is_odd() && w.contains(m.norm_wide() as f64 / x))
        .collect();
    gint::sort_by_norm(&mut ms);
    ms.into_iter().map(|m| (m, w.eval(m.norm_wide() as f64 / x))).collect()
}

/// `sum_{(m, 1+i) = 1} ((1+i) m / n)_2 W(N(m)/X)` for one primary `n`.
pub fn twisted_m_sum(n: GaussianInt, x: f64, w: &SmoothWeight) -> Result<f64> {
    check_inputs(x, 1.0)?;
    if !gint::is_primary(n) {
        return Err(Error::NotPrimary);
    }
    inner_direct(n, &odd_terms(x, w))
}

fn inner_direct(n: GaussianInt, terms: &[(GaussianInt, f64)]) -> Result<f64> {
    let f = factor(n)?;
    let twist = f64::from(quadratic_symbol_factored(GaussianInt::ONE_PLUS_I, &f)?.as_real().expect("real"));
    let norm = n.norm()?;
    let weighted: Vec<f64> = if norm.saturating_mul(4) < terms.len() as u64 {
        let map = ResidueMap::new(n)?;
        let chars = map
            .residues()
            .iter()
            .map(|&r| Ok(f64::from(quadratic_symbol_factored(r, &f)?.as_real().expect("real"))))
            .collect::<Result<Vec<f64>>>()?;
        terms.iter().map(|&(m, wm)| chars[map.index_of(m)] * wm).collect()
    } else {
        terms
            .iter()
            .map(|&(m, wm)| Ok(f64::from(quadratic_symbol_factored(m, &f)?.as_real().expect("real")) * wm))
            .collect::<Result<Vec<f64>>>()?
    };
    Ok(twist * pairwise_sum(&weighted))
}

/// Direct evaluation, factoring each `n` once.
pub fn s2_direct<E: Executor>(
    x: f64,
    y: f64,
    phi_w: &SmoothWeight,
    w: &SmoothWeight,
    policy: &TruncationPolicy,
    exec: &E,
) -> Result<DirectSum> {
    check_inputs(x, y)?;
    policy.validate()?;
    let ns = moduli(y, phi_w, policy)?;
    let terms = odd_terms(x, w);
    let pairs = (ns.len() as u64).saturating_mul(terms.len() as u64);
    if pairs > policy.direct_budget {
        return Err(Error::WorkBudgetExceeded { pairs, budget: policy.direct_budget });
    }
    let partials = exec
        .map_indexed(ns.len(), |i| {
            let n = ns[i];
            Ok(phi_w.eval(n.norm_wide() as f64 / y) * inner_direct(n, &terms)?)
        })
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    Ok(DirectSum { value: pairwise_sum(&partials), moduli: ns.len(), pairs })
}

/// The dual evaluator; holds the tabulated transform of `W`.
#[derive(Clone, Debug)]
pub struct PoissonEvaluator {
    policy: TruncationPolicy,
    table: TransformTable,
}

impl PoissonEvaluator {
    pub fn new<E: Executor>(w: SmoothWeight, policy: TruncationPolicy, exec: &E) -> Result<Self> {
        policy.validate()?;
        let table = TransformTable::build_with(w, policy.eps_tail, libm::sqrt(policy.k_cap_scale), exec)?;
        Ok(Self { policy, table })
    }

    pub fn table(&self) -> &TransformTable {
        &self.table
    }

    pub fn policy(&self) -> &TruncationPolicy {
        &self.policy
    }

    /// Largest `N(k)` kept for modulus norm `norm_n`.
    pub fn k_norm_cap(&self, x: f64, norm_n: u64) -> u64 {
        let t = self.table.threshold();
        let cap = self.policy.k_cap_scale * t * t * 2.0 * norm_n as f64 / x;
        libm::floor(cap) as u64
    }

    fn lattice_count(cap: u64) -> u64 {
        (PI * (cap as f64 + 2.0 * libm::sqrt(cap as f64) + 1.0)) as u64
    }

    /// `X/(2N(n)) sum_k (-1)^N(k) g2(k, n) W~(sqrt(N(k) X / (2 N(n))))`,
    /// returned as `(total, k = 0 part)`.
    pub fn dual_n_sum(&self, n: GaussianInt, x: f64) -> Result<(f64, f64)> {
        check_inputs(x, 1.0)?;
        let modulus = GaussSumModulus::new(n)?;
        let norm = modulus.norm();
        let cap = self.k_norm_cap(x, norm);
        if Self::lattice_count(cap) > self.policy.dual_budget {
            return Err(Error::WorkBudgetExceeded { pairs: Self::lattice_count(cap), budget: self.policy.dual_budget });
        }
        let map = ResidueMap::new(n)?;
        let sums = map
            .residues()
            .iter()
            .map(|&r| Ok(modulus.eval(r)?.to_f64()))
            .collect::<Result<Vec<f64>>>()?;
        // Gauss sums grouped by N(k); each group shares one transform value.
        let mut by_norm = alloc::vec![0.0f64; cap as usize + 1];
        let r = rational::isqrt(cap) as i64;
        for a in -r..=r {
            let h = rational::isqrt(cap - (a * a) as u64) as i64;
            for b in -h..=h {
                let k = GaussianInt::new(a, b);
                by_norm[(a * a + b * b) as usize] += sums[map.index_of(k)];
            }
        }
        let scale = x / (2.0 * norm as f64);
        let terms: Vec<f64> = by_norm
            .iter()
            .enumerate()
            .filter(|(_, &g)| g != 0.0)
            .map(|(nu, &g)| {
                let sign = if self.policy.parity_sign && nu % 2 == 1 { -1.0 } else { 1.0 };
                sign * g * self.table.eval(libm::sqrt(nu as f64 * scale))
            })
            .collect();
        let k0 = by_norm[0] * self.table.eval(0.0);
        Ok((scale * pairwise_sum(&terms), scale * k0))
    }

    /// Number of `(k, n)` lattice points visited for one modulus.
    pub fn pairs_for(&self, x: f64, norm_n: u64) -> u64 {
        Self::lattice_count(self.k_norm_cap(x, norm_n))
    }

    pub fn s2<E: Executor>(&self, x: f64, y: f64, phi_w: &SmoothWeight, exec: &E) -> Result<DualSum> {
        check_inputs(x, y)?;
        let ns = moduli(y, phi_w, &self.policy)?;
        let pairs: u64 = ns.iter().map(|n| self.pairs_for(x, n.norm_wide() as u64)).sum();
        if pairs > self.policy.dual_budget {
            return Err(Error::WorkBudgetExceeded { pairs, budget: self.policy.dual_budget });
        }
        let partials = exec
            .map_indexed(ns.len(), |i| {
                let n = ns[i];
                let weight = phi_w.eval(n.norm_wide() as f64 / y);
                let (all, k0) = self.dual_n_sum(n, x)?;
                Ok((weight * all, weight * k0))
            })
            .into_iter()
            .collect::<Result<Vec<(f64, f64)>>>()?;
        let values: Vec<f64> = partials.iter().map(|p| p.0).collect();
        let k0: Vec<f64> = partials.iter().map(|p| p.1).collect();
        Ok(DualSum { value: pairwise_sum(&values), k0_term: pairwise_sum(&k0), moduli: ns.len(), pairs })
    }
}

/// One-shot dual evaluation; builds the transform table internally.
pub fn s2_poisson<E: Executor>(
    x: f64,
    y: f64,
    phi_w: &SmoothWeight,
    w: &SmoothWeight,
    policy: &TruncationPolicy,
    exec: &E,
) -> Result<DualSum> {
    PoissonEvaluator::new(*w, *policy, exec)?.s2(x, y, phi_w, exec)
}

/// `X W~(0)/2 * sum_{l primary} phi(l^2)/N(l^2) Phi(N(l)^2/Y)`.
pub fn m0_term(x: f64, y: f64, phi_w: &SmoothWeight, w: &SmoothWeight) -> Result<f64> {
    m0_with_transform(x, y, phi_w, w_tilde(w, 0.0)?)
}

/// [`m0_term`] with a precomputed `W~(0)`.
pub fn m0_with_transform(x: f64, y: f64, phi_w: &SmoothWeight, w0: f64) -> Result<f64> {
    check_inputs(x, y)?;
    let (lo, hi) = phi_w.support();
    let top = libm::sqrt(hi * y) as u64;
    let mut terms = Vec::new();
    for l in gint::primaries_up_to_norm(top) {
        let nl = l.norm()? as f64;
        let t = nl * nl / y;
        if t > lo && t < hi {
            terms.push(phi(l)? as f64 / nl * phi_w.eval(t));
        }
    }
    Ok(0.5 * x * w0 * pairwise_sum(&terms))
}

/// Prime bound of the Euler product in [`zeta_k`].
pub const ZETA_PRIME_BOUND: u64 = 10_000_000;

/// Dedekind zeta function of `Q(i)` for real `s > 1`.
pub fn zeta_k(s: f64) -> Result<f64> {
    zeta_k_with_bound(s, ZETA_PRIME_BOUND)
}

/// Euler product over rational primes up to `bound`:
/// `(1 - 2^-s)^-1 prod_{p = 1 (4)} (1 - p^-s)^-2 prod_{p = 3 (4)} (1 - p^-2s)^-1`,
/// times `exp(E1((s - 1) log bound))`, which accounts for the split primes
/// above `bound` on average.
pub fn zeta_k_with_bound(s: f64, bound: u64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::Domain("zeta_K needs s > 1"));
    }
    if bound < 3 {
        return Err(Error::Domain("prime bound must be at least 3"));
    }
    let mut log_terms: Vec<f64> = rational::primes_up_to(bound)
        .into_iter()
        .map(|p| {
            let ps = libm::pow(p as f64, -s);
            match p % 4 {
                1 => -2.0 * libm::log1p(-ps),
                3 => -libm::log1p(-ps * ps),
                _ => -libm::log1p(-ps),
            }
        })
        .collect();
    log_terms.reverse();
    let tail = exp_integral_e1((s - 1.0) * libm::log(bound as f64));
    Ok(libm::exp(pairwise_sum(&log_terms) + tail))
}

/// `E1(x) = int_x^inf e^-t / t dt` for `x > 0`.
pub fn exp_integral_e1(x: f64) -> f64 {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    assert!(x > 0.0, "E1 needs x > 0");
    if x <= 1.0 {
        let (mut sum, mut term) = (0.0, 1.0);
        for k in 1..60 {
            term *= -x / k as f64;
            let add = -term / k as f64;
            sum += add;
            if add.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        return -EULER_GAMMA - libm::log(x) + sum;
    }
    // Continued fraction, modified Lentz.
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..200 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h * libm::exp(-x)
}

/// Exponent of the lattice-point error term, `131/416`, as `(num, den)`.
pub const fn theta() -> (u32, u32) {
    (131, 416)
}

pub fn theta_f64() -> f64 {
    let (p, q) = theta();
    f64::from(p) / f64::from(q)
}

/// `X Y^(theta/2) + X Y^(1/2) (Y/X)^(1+eps)` with `eps = 0.01`; diagnostic
/// only, since the implied constants are unknown.
pub fn error_envelope(x: f64, y: f64) -> f64 {
    x * libm::pow(y, theta_f64() / 2.0) + x * libm::sqrt(y) * libm::pow(y / x, 1.01)
}

/// Closed-form main-term candidates next to the `k = 0` term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MainTermCandidates {
    /// `pi/(24 zeta_K(2)) W~(0) Phi(1/2) X Y^(1/2)`.
    pub paper_pointwise: f64,
    /// The same with `Phi(1/2)` replaced by the Mellin value `Phi^(1/2)`.
    pub mellin_variant: f64,
    pub m0_direct: f64,
}

impl MainTermCandidates {
    pub const PAPER_POINTWISE: &'static str = "paper_pointwise";
    pub const MELLIN_VARIANT: &'static str = "mellin_variant";
    pub const M0_DIRECT: &'static str = "m0_direct";

    /// The closed form nearer to `m0_direct` (ties go to the pointwise one).
    pub fn closest(&self) -> &'static str {
        if (self.mellin_variant - self.m0_direct).abs() < (self.paper_pointwise - self.m0_direct).abs() {
            Self::MELLIN_VARIANT
        } else {
            Self::PAPER_POINTWISE
        }
    }

    pub fn as_map(&self) -> BTreeMap<&'static str, f64> {
        BTreeMap::from([
            (Self::PAPER_POINTWISE, self.paper_pointwise),
            (Self::MELLIN_VARIANT, self.mellin_variant),
            (Self::M0_DIRECT, self.m0_direct),
        ])
    }
}

/// Shared factor `pi W~(0) X Y^(1/2) / (24 zeta_K(2))` of both closed forms.
pub fn candidate_scale(x: f64, y: f64, w0: f64, zeta2: f64) -> f64 {
    PI / (24.0 * zeta2) * w0 * x * libm::sqrt(y)
}

pub fn main_term_candidates(x: f64, y: f64, phi_w: &SmoothWeight, w: &SmoothWeight) -> Result<MainTermCandidates> {
    let w0 = w_tilde(w, 0.0)?;
    let scale = candidate_scale(x, y, w0, zeta_k(2.0)?);
    Ok(MainTermCandidates {
        paper_pointwise: scale * phi_w.eval(0.5),
        mellin_variant: scale * mellin(phi_w, Complex64::new(0.5, 0.0))?.re,
        m0_direct: m0_with_transform(x, y, phi_w, w0)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Sequential;

    #[test]
    fn e1_values() {
        // Reference values to 16 digits.
        assert!((exp_integral_e1(0.5) - 0.559_773_594_776_160_8).abs() < 1e-15);
        assert!((exp_integral_e1(1.0) - 0.219_383_934_395_520_3).abs() < 1e-15);
        assert!((exp_integral_e1(5.0) - 0.001_148_295_591_275_325_8).abs() < 1e-17);
    }

    #[test]
    fn theta_is_exact() {
        assert_eq!(theta(), (131, 416));
        assert!((theta_f64() - 0.3149).abs() < 1e-4);
    }

    #[test]
    fn empty_ranges_give_zero() {
        let (phi_w, w) = (SmoothWeight::bump(1.0, 2.0), SmoothWeight::default());
        let policy = TruncationPolicy::default();
        // No primary n has 1 < N(n) < 2.
        let v = s2_direct(50.0, 1.0, &phi_w, &w, &policy, &Sequential).unwrap();
        assert_eq!((v.value, v.moduli), (0.0, 0));
    }
}
