//! Quadratic Gauss sums `g2(r, n) = sum_{x mod n} (x/n)_2 e~(r x / n)` for
//! primary `n`, where `e~(z) = exp(2 pi i Im z)`.
//!
//! [`g2_naive`] sums the definition over a complete residue system;
//! [`g2_closed`] multiplies the exact prime-power values, which depend only
//! on the valuation `h` of `r` at the prime (`h = inf` for `r = 0`):
//!
//! | case                | `g2(r, p^l)`                       |
//! |---------------------|------------------------------------|
//! | `l <= h`, `l` odd   | `0`                                |
//! | `l <= h`, `l` even  | `phi(p^l)`                         |
//! | `l = h + 1` even    | `-N(p)^(l-1)`                      |
//! | `l = h + 1` odd     | `(i r p^-h / p)_2 * N(p)^(l-1/2)`  |
//! | `l >= h + 2`        | `0`                                |

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::gint::{self, factor, residues_with_bound, GaussianInt, SurdValue, DEFAULT_RESIDUE_BOUND};
use crate::quad::pairwise_sum;
use crate::symbols::{quadratic_prime, quadratic_symbol_factored};
use crate::{Error, Result};

/// Imaginary parts of brute-force sums above `IMAG_TOLERANCE * N(n)` are
/// reported as errors.
pub const IMAG_TOLERANCE: f64 = 1e-6;

/// A Gauss sum value: the float rendering and, for closed forms, the exact
/// surd it renders.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussSumValue {
    pub exact: Option<SurdValue>,
    pub float: f64,
}

impl GaussSumValue {
    pub fn from_exact(s: SurdValue) -> Self {
        Self { exact: Some(s), float: s.to_f64() }
    }
}

/// `e~(num / den) = exp(2 pi i Im(num) / den)`, with `Im(num)` reduced
/// modulo `den` exactly before the exponential.
pub fn e_tilde(num: GaussianInt, den: u64) -> Result<Complex64> {
    if den == 0 {
        return Err(Error::DivisionByZero);
    }
    let den_i = den as i128;
    let r = (num.im as i128).rem_euclid(den_i);
    if (4 * r) % den_i == 0 {
        return Ok(match 4 * r / den_i {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        });
    }
    let centered = if 2 * r > den_i { r - den_i } else { r };
    let angle = TAU * (centered as f64 / den as f64);
    Ok(Complex64::new(libm::cos(angle), libm::sin(angle)))
}

/// `phi(n) = #(Z[i]/n)^*`.
pub fn phi(n: GaussianInt) -> Result<u64> {
    let f = factor(n)?;
    let mut acc: u64 = if f.ramified_exp > 0 { 1 << (f.ramified_exp - 1) } else { 1 };
    for &(p, e) in &f.factors {
        let np = p.norm()?;
        let local = np
            .checked_pow(e - 1)
            .and_then(|x| x.checked_mul(np - 1))
            .ok_or(Error::Overflow)?;
        acc = acc.checked_mul(local).ok_or(Error::Overflow)?;
    }
    Ok(acc)
}

/// Brute-force `g2(r, n)` over the canonical residues of `n`.
pub fn g2_naive(r: GaussianInt, n: GaussianInt) -> Result<GaussSumValue> {
    g2_naive_with_bound(r, n, DEFAULT_RESIDUE_BOUND)
}

pub fn g2_naive_with_bound(r: GaussianInt, n: GaussianInt, bound: u64) -> Result<GaussSumValue> {
    if !gint::is_primary(n) {
        return Err(Error::NotPrimary);
    }
    let xs = residues_with_bound(n, bound)?;
    let f = factor(n)?;
    let norm = n.norm()?;
    let rn = r.checked_mul(n.conj()).ok_or(Error::Overflow)?;
    let mut terms = Vec::with_capacity(xs.len());
    for x in xs {
        let sign = quadratic_symbol_factored(x, &f)?.as_real().expect("quadratic symbol is real");
        if sign == 0 {
            continue;
        }
        let z = rn.checked_mul(x).ok_or(Error::Overflow)?;
        terms.push(e_tilde(z, norm)? * f64::from(sign));
    }
    let total: Complex64 = pairwise_sum(&terms);
    if total.im.abs() > IMAG_TOLERANCE * norm as f64 {
        return Err(Error::ComplexGaussSum { imag: total.im });
    }
    Ok(GaussSumValue { exact: None, float: total.re })
}

/// Which branch of the prime-power formula applies to `g2(r, p^l)` when `p^h`
/// exactly divides `r` (`h = None` for `r = 0`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalCase {
    Zero,
    /// `phi(p^l)`.
    Totient,
    /// `-N(p)^(l-1)`.
    NegativePower,
    /// `(i r p^-h / p)_2 N(p)^(l-1/2)`.
    SymbolSqrt,
}

pub fn classify(l: u32, h: Option<u32>) -> LocalCase {
    match h {
        Some(h) if l == h + 1 => {
            if l % 2 == 0 {
                LocalCase::NegativePower
            } else {
                LocalCase::SymbolSqrt
            }
        }
        Some(h) if l > h + 1 => LocalCase::Zero,
        _ if l % 2 == 1 => LocalCase::Zero,
        _ => LocalCase::Totient,
    }
}

/// A primary modulus prepared for repeated closed-form evaluation.
#[derive(Clone, Debug)]
pub struct GaussSumModulus {
    n: GaussianInt,
    norm: u64,
    /// `(prime, exponent, N(prime))`.
    primes: Vec<(GaussianInt, u32, u64)>,
}

impl GaussSumModulus {
    pub fn new(n: GaussianInt) -> Result<Self> {
        if !gint::is_primary(n) {
            return Err(Error::NotPrimary);
        }
        let f = factor(n)?;
        assert!(f.unit == gint::Unit::One && f.ramified_exp == 0, "primary {n} factors without unit");
        let primes = f
            .factors
            .iter()
            .map(|&(p, l)| Ok((p, l, p.norm()?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n, norm: n.norm()?, primes })
    }

    pub fn modulus(&self) -> GaussianInt {
        self.n
    }

    pub fn norm(&self) -> u64 {
        self.norm
    }

    pub fn primes(&self) -> &[(GaussianInt, u32, u64)] {
        &self.primes
    }

    /// Exact `g2(r, n)`.
    pub fn eval(&self, r: GaussianInt) -> Result<SurdValue> {
        let mut acc = SurdValue::ONE;
        for &(p, l, np) in &self.primes {
            let local = prime_power_value(r, p, l, np)?;
            if local.is_zero() {
                return Ok(SurdValue::ZERO);
            }
            acc = acc.checked_mul(local).ok_or(Error::Overflow)?;
        }
        Ok(acc)
    }
}

/// `(h, r / p^h)` with `h` capped at `cap`; `None` for `r = 0`.
fn valuation(r: GaussianInt, p: GaussianInt, cap: u32) -> Option<(u32, GaussianInt)> {
    if r.is_zero() {
        return None;
    }
    let (mut h, mut rest) = (0, r);
    while h < cap {
        match p.exact_div_of(rest) {
            Some(q) => {
                rest = q;
                h += 1;
            }
            None => break,
        }
    }
    Some((h, rest))
}

/// Exact `g2(r, p^l)` for a primary prime `p` with `N(p) = np`.
pub fn prime_power_value(r: GaussianInt, p: GaussianInt, l: u32, np: u64) -> Result<SurdValue> {
    if l == 0 {
        return Ok(SurdValue::ONE);
    }
    let val = valuation(r, p, l);
    let power = |e: u32| -> Result<i64> {
        np.checked_pow(e).and_then(|x| i64::try_from(x).ok()).ok_or(Error::Overflow)
    };
    Ok(match classify(l, val.map(|(h, _)| h)) {
        LocalCase::Zero => SurdValue::ZERO,
        LocalCase::Totient => SurdValue::integer(power(l - 1)?.checked_mul(np as i64 - 1).ok_or(Error::Overflow)?),
        LocalCase::NegativePower => SurdValue::integer(-power(l - 1)?),
        LocalCase::SymbolSqrt => {
            let (_, unit_part) = val.expect("finite valuation");
            let twisted = unit_part.mul_unit(gint::Unit::I);
            let sign = quadratic_prime(twisted, p)?.as_real().expect("quadratic symbol is real");
            debug_assert!(sign != 0);
            SurdValue::sqrt_of(np)
                .checked_scale(power(l - 1)?.checked_mul(i64::from(sign)).ok_or(Error::Overflow)?)
                .ok_or(Error::Overflow)?
        }
    })
}

/// Closed-form `g2(r, n)` for primary `n`; `r = 0` is the `h = inf` case.
pub fn g2_closed(r: GaussianInt, n: GaussianInt) -> Result<GaussSumValue> {
    Ok(GaussSumValue::from_exact(GaussSumModulus::new(n)?.eval(r)?))
}

/// Twelve shifts `r` probing every case of the prime-power formula for the
/// modulus `n`: zero, the units, `1 + i`, small integers, and multiples of
/// the primes of `n`.
pub fn probe_shifts(n: GaussianInt) -> Result<[GaussianInt; 12]> {
    let f = factor(n)?;
    let (p, q) = match f.factors.as_slice() {
        [] => (GaussianInt::new(3, 2), GaussianInt::new(-3, 0)),
        [(p, _)] => (*p, *p),
        [(p, _), (q, _), ..] => (*p, *q),
    };
    let g = GaussianInt::new;
    let p2 = p.checked_mul(p).ok_or(Error::Overflow)?;
    Ok([
        GaussianInt::ZERO,
        g(1, 0),
        g(-1, 0),
        g(0, 1),
        g(0, -1),
        GaussianInt::ONE_PLUS_I,
        g(2, 0),
        g(3, -2),
        p,
        p2.mul_unit(gint::Unit::I),
        p.checked_mul(q).and_then(|x| x.checked_mul(g(1, 1))).ok_or(Error::Overflow)?,
        n.checked_mul(g(2, 1)).ok_or(Error::Overflow)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    const fn g(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }
    const P: GaussianInt = g(-1, 2);

    #[test]
    fn e_tilde_examples() {
        assert_eq!(e_tilde(g(7, 0), 3).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(e_tilde(g(0, 1), 1).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(e_tilde(g(0, 1), 4).unwrap(), Complex64::new(0.0, 1.0));
        let z = e_tilde(g(5, -1), 3).unwrap();
        assert!((z - Complex64::new(-0.5, -(3f64.sqrt()) / 2.0)).norm() < 1e-15);
        assert_eq!(e_tilde(g(0, 1), 0), Err(Error::DivisionByZero));
    }

    #[test]
    fn naive_examples() {
        assert_eq!(g2_naive(GaussianInt::ONE, GaussianInt::ONE).unwrap().float, 1.0);
        let v = g2_naive(GaussianInt::ONE, P).unwrap().float;
        assert!((v + 5f64.sqrt()).abs() < 1e-12);
        assert!(g2_naive(GaussianInt::ZERO, P).unwrap().float.abs() < 1e-12);
        assert_eq!(g2_naive(GaussianInt::ONE, g(3, 0)), Err(Error::NotPrimary));
    }

    #[test]
    fn closed_examples() {
        let p2 = P * P;
        assert_eq!(g2_closed(GaussianInt::ZERO, p2).unwrap().exact, Some(SurdValue::integer(20)));
        assert_eq!(g2_closed(GaussianInt::ONE, P).unwrap().exact, Some(-SurdValue::sqrt_of(5)));
        assert_eq!(g2_closed(P, p2).unwrap().exact, Some(SurdValue::integer(-5)));
        assert_eq!(g2_closed(GaussianInt::ZERO, P).unwrap().exact, Some(SurdValue::ZERO));
        assert_eq!(g2_closed(GaussianInt::ONE, GaussianInt::ONE).unwrap().exact, Some(SurdValue::ONE));
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(GaussianInt::ONE), Ok(1));
        assert_eq!(phi(P), Ok(4));
        assert_eq!(phi(P * P), Ok(20));
        assert_eq!(phi(g(2, 0)), Ok(2));
        assert_eq!(phi(g(-3, 0)), Ok(8));
    }

    #[test]
    fn case_table() {
        assert_eq!(classify(3, None), LocalCase::Zero);
        assert_eq!(classify(2, None), LocalCase::Totient);
        assert_eq!(classify(2, Some(5)), LocalCase::Totient);
        assert_eq!(classify(2, Some(1)), LocalCase::NegativePower);
        assert_eq!(classify(1, Some(0)), LocalCase::SymbolSqrt);
        assert_eq!(classify(3, Some(1)), LocalCase::Zero);
    }
}
