//! Quartic and quadratic residue symbols in `Z[i]`.
//!
//! For a prime `p` of odd norm, `(a/p)_4` is the fourth root of unity
//! congruent to `a^((N(p)-1)/4)` modulo `p` (zero when `p | a`). The symbol
//! extends multiplicatively to odd moduli, with `(a/1)_4 = 1`, and the
//! quadratic symbol is its square. A non-primary modulus is evaluated at its
//! primary associate.

use alloc::collections::BTreeMap;
use core::ops::Mul;

use num_complex::Complex64;

use crate::gint::{self, factor, modpow, reduce, Factorization, GaussianInt, Unit};
use crate::{Error, Result};

/// A value of a residue symbol: zero or a fourth root of unity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymbolValue {
    Zero,
    One,
    MinusOne,
    I,
    MinusI,
}

impl SymbolValue {
    pub fn from_unit(u: Unit) -> Self {
        match u {
            Unit::One => SymbolValue::One,
            Unit::I => SymbolValue::I,
            Unit::MinusOne => SymbolValue::MinusOne,
            Unit::MinusI => SymbolValue::MinusI,
        }
    }

    pub fn unit(self) -> Option<Unit> {
        match self {
            SymbolValue::Zero => None,
            SymbolValue::One => Some(Unit::One),
            SymbolValue::I => Some(Unit::I),
            SymbolValue::MinusOne => Some(Unit::MinusOne),
            SymbolValue::MinusI => Some(Unit::MinusI),
        }
    }

    pub fn pow(self, e: u32) -> Self {
        match self.unit() {
            None if e == 0 => SymbolValue::One,
            None => SymbolValue::Zero,
            Some(u) => Self::from_unit(u.pow(e)),
        }
    }

    pub fn conj(self) -> Self {
        match self {
            SymbolValue::I => SymbolValue::MinusI,
            SymbolValue::MinusI => SymbolValue::I,
            v => v,
        }
    }

    /// The value as `-1`, `0` or `1`; `None` for `+-i`.
    pub fn as_real(self) -> Option<i8> {
        match self {
            SymbolValue::Zero => Some(0),
            SymbolValue::One => Some(1),
            SymbolValue::MinusOne => Some(-1),
            _ => None,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self {
            SymbolValue::Zero => Complex64::new(0.0, 0.0),
            SymbolValue::One => Complex64::new(1.0, 0.0),
            SymbolValue::MinusOne => Complex64::new(-1.0, 0.0),
            SymbolValue::I => Complex64::new(0.0, 1.0),
            SymbolValue::MinusI => Complex64::new(0.0, -1.0),
        }
    }
}

impl Mul for SymbolValue {
    type Output = SymbolValue;
    fn mul(self, rhs: SymbolValue) -> SymbolValue {
        match (self.unit(), rhs.unit()) {
            (Some(a), Some(b)) => Self::from_unit(a * b),
            _ => SymbolValue::Zero,
        }
    }
}

/// `(a/p)_4` for a prime `p` of odd norm, by the Euler criterion.
pub fn quartic_prime(a: GaussianInt, p: GaussianInt) -> Result<SymbolValue> {
    let norm = p.norm()?;
    if norm % 2 == 0 {
        return Err(Error::EvenNorm);
    }
    assert_eq!((norm - 1) % 4, 0, "odd prime norms are 1 mod 4");
    if norm == 1 {
        return Ok(SymbolValue::One);
    }
    let r = reduce(a, p)?;
    if r.is_zero() {
        return Ok(SymbolValue::Zero);
    }
    let x = modpow(r, (norm - 1) / 4, p)?;
    for u in Unit::ALL {
        if reduce(u.to_gint(), p)? == x {
            return Ok(SymbolValue::from_unit(u));
        }
    }
    Err(Error::NotPrime)
}

/// `(a/p)_2 = (a/p)_4^2` for a prime `p` of odd norm.
pub fn quadratic_prime(a: GaussianInt, p: GaussianInt) -> Result<SymbolValue> {
    Ok(quartic_prime(a, p)?.pow(2))
}

/// `(a/n)_4` for odd `n`, extended multiplicatively over the primary
/// associate of `n`.
pub fn quartic_symbol(a: GaussianInt, n: GaussianInt) -> Result<SymbolValue> {
    let (_, primary) = gint::to_primary(n)?;
    quartic_symbol_factored(a, &factor(primary)?)
}

/// `(a/n)_2` for odd `n`; always `0` or `+-1`.
pub fn quadratic_symbol(a: GaussianInt, n: GaussianInt) -> Result<SymbolValue> {
    let (_, primary) = gint::to_primary(n)?;
    quadratic_symbol_factored(a, &factor(primary)?)
}

/// Quartic symbol over an odd modulus given by its factorization.
pub fn quartic_symbol_factored(a: GaussianInt, f: &Factorization) -> Result<SymbolValue> {
    if f.ramified_exp != 0 {
        return Err(Error::EvenNorm);
    }
    let mut acc = SymbolValue::One;
    for &(p, e) in &f.factors {
        acc = acc * quartic_prime(a, p)?.pow(e);
        if acc == SymbolValue::Zero {
            break;
        }
    }
    Ok(acc)
}

/// Quadratic symbol over an odd modulus given by its factorization.
pub fn quadratic_symbol_factored(a: GaussianInt, f: &Factorization) -> Result<SymbolValue> {
    Ok(quartic_symbol_factored(a, f)?.pow(2))
}

/// The quadratic Hecke character `chi_k: n -> (k/n)_2` on odd `n`, caching
/// the factorization of each modulus it sees.
#[derive(Clone, Debug)]
pub struct QuadraticCharacter {
    k: GaussianInt,
    cache: BTreeMap<GaussianInt, Factorization>,
}

/// `chi_k`.
pub fn chi(k: GaussianInt) -> QuadraticCharacter {
    QuadraticCharacter { k, cache: BTreeMap::new() }
}

impl QuadraticCharacter {
    pub fn modulus_numerator(&self) -> GaussianInt {
        self.k
    }

    pub fn eval(&mut self, n: GaussianInt) -> Result<SymbolValue> {
        let (_, primary) = gint::to_primary(n)?;
        let f = match self.cache.get(&primary) {
            Some(f) => f,
            None => {
                let f = factor(primary)?;
                self.cache.entry(primary).or_insert(f)
            }
        };
        quadratic_symbol_factored(self.k, f)
    }

    pub fn cached_moduli(&self) -> usize {
        self.cache.len()
    }
}
