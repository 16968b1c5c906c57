use alloc::vec::Vec;

use super::rational::{factor_u64, sqrt_minus_one};
use super::{gcd, sort_by_norm, to_primary, GaussianInt, Unit};
use crate::{Error, Result};

/// Default cap on `N(n)` accepted by [`factor`].
pub const DEFAULT_FACTOR_BOUND: u64 = 1 << 62;

/// `n = unit * (1+i)^ramified_exp * prod(prime^exp)` with every listed prime
/// primary, distinct, and sorted by `(norm, re, im)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Unit,
    pub ramified_exp: u32,
    pub factors: Vec<(GaussianInt, u32)>,
}

/// Which associate of each prime ideal serves as its generator when ideals
/// are enumerated as elements (the generator set `G`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GeneratorChoice {
    /// `1 + i` for the ramified prime and the primary generator otherwise.
    #[default]
    Primary,
    /// Every generator of [`GeneratorChoice::Primary`] multiplied by `i`.
    Rotated,
}

impl GeneratorChoice {
    pub fn prime_generator(self, prime: GaussianInt) -> GaussianInt {
        match self {
            GeneratorChoice::Primary => prime,
            GeneratorChoice::Rotated => prime.mul_unit(Unit::I),
        }
    }
}

impl Factorization {
    /// Reassemble the factored element.
    pub fn expand(&self) -> Result<GaussianInt> {
        Ok(self.odd_part()?.mul_unit(self.unit).checked_mul(ramified_power(self.ramified_exp)?)
            .ok_or(Error::Overflow)?)
    }

    /// The primary part `prod(prime^exp)`.
    pub fn odd_part(&self) -> Result<GaussianInt> {
        let mut acc = GaussianInt::ONE;
        for &(p, e) in &self.factors {
            acc = acc.checked_mul(p.checked_pow(e).ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
        }
        Ok(acc)
    }

    /// The generator of the ideal `(n)` in the set `G` for `choice`.
    pub fn generator(&self, choice: GeneratorChoice) -> Result<GaussianInt> {
        let mut acc = choice
            .prime_generator(GaussianInt::ONE_PLUS_I)
            .checked_pow(self.ramified_exp)
            .ok_or(Error::Overflow)?;
        for &(p, e) in &self.factors {
            let g = choice.prime_generator(p).checked_pow(e).ok_or(Error::Overflow)?;
            acc = acc.checked_mul(g).ok_or(Error::Overflow)?;
        }
        Ok(acc)
    }

    /// Every prime, `1 + i` included, occurs at most once.
    pub fn is_squarefree(&self) -> bool {
        self.ramified_exp <= 1 && self.factors.iter().all(|&(_, e)| e == 1)
    }
}

fn ramified_power(e: u32) -> Result<GaussianInt> {
    GaussianInt::ONE_PLUS_I.checked_pow(e).ok_or(Error::Overflow)
}

/// Factor `n` with the default norm bound.
pub fn factor(n: GaussianInt) -> Result<Factorization> {
    factor_with_bound(n, DEFAULT_FACTOR_BOUND)
}

/// Factor `n` into primary primes, rejecting `N(n) > bound`.
///
/// The rational norm is factored first (trial division, then Pollard rho);
/// each rational prime `p` is then lifted: `p = 2` gives `1+i`, `p = 3 mod 4`
/// gives the inert prime `-p`, and `p = 1 mod 4` splits as `gcd(p, x + i)`
/// with `x^2 = -1 mod p` and its conjugate.
pub fn factor_with_bound(n: GaussianInt, bound: u64) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::FactorZero);
    }
    let norm = n.norm()?;
    if norm > bound {
        return Err(Error::FactorBoundExceeded { norm, bound });
    }
    let mut rest = n;
    let mut ramified_exp = 0;
    let mut factors = Vec::new();
    for (p, e) in factor_u64(norm) {
        if p == 2 {
            for _ in 0..e {
                rest = GaussianInt::ONE_PLUS_I.exact_div_of(rest).expect("1+i divides");
            }
            ramified_exp = e;
        } else if p % 4 == 3 {
            let prime = GaussianInt::from_int(-(p as i64));
            for _ in 0..e / 2 {
                rest = prime.exact_div_of(rest).expect("inert prime divides");
            }
            factors.push((prime, e / 2));
        } else {
            let x = sqrt_minus_one(p) as i64;
            let pi = gcd(GaussianInt::from_int(p as i64), GaussianInt::new(x, 1))?;
            let (_, pi) = to_primary(pi)?;
            for prime in [pi, pi.conj()] {
                let mut k = 0;
                while let Some(q) = prime.exact_div_of(rest) {
                    rest = q;
                    k += 1;
                }
                if k > 0 {
                    factors.push((prime, k));
                }
            }
        }
    }
    let unit = Unit::from_gint(rest).expect("cofactor is a unit");
    let mut primes: Vec<GaussianInt> = factors.iter().map(|&(p, _)| p).collect();
    sort_by_norm(&mut primes);
    let factors = primes
        .into_iter()
        .map(|p| *factors.iter().find(|(q, _)| *q == p).unwrap())
        .collect();
    Ok(Factorization { unit, ramified_exp, factors })
}

/// The primes of `Z[i]` with norm at most `bound`, one per prime ideal:
/// `1 + i` and the primary generators, sorted by `(norm, re, im)`.
pub fn prime_elements_up_to_norm(bound: u64) -> Result<Vec<GaussianInt>> {
    let mut out = Vec::new();
    for p in super::rational::primes_up_to(bound) {
        if p == 2 {
            out.push(GaussianInt::ONE_PLUS_I);
        } else if p % 4 == 3 {
            if p.checked_mul(p).is_some_and(|q| q <= bound) {
                out.push(GaussianInt::from_int(-(p as i64)));
            }
        } else {
            let x = sqrt_minus_one(p) as i64;
            let (_, pi) = to_primary(gcd(GaussianInt::from_int(p as i64), GaussianInt::new(x, 1))?)?;
            out.push(pi);
            out.push(pi.conj());
        }
    }
    sort_by_norm(&mut out);
    Ok(out)
}
