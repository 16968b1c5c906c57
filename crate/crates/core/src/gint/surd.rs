use core::fmt;
use core::ops::{Mul, Neg};

use super::rational::factor_u64;
use crate::{Error, Result};

/// The exact real number `a * sqrt(b)` with `b` squarefree; zero is `(0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SurdValue {
    a: i64,
    b: u64,
}

impl SurdValue {
    pub const ZERO: Self = Self { a: 0, b: 1 };
    pub const ONE: Self = Self { a: 1, b: 1 };

    /// `a * sqrt(b)` for squarefree `b >= 1`.
    pub fn new(a: i64, b: u64) -> Result<Self> {
        if b == 0 || !is_squarefree(b) {
            return Err(Error::Domain("surd radicand must be squarefree and positive"));
        }
        Ok(if a == 0 { Self::ZERO } else { Self { a, b } })
    }

    pub const fn integer(a: i64) -> Self {
        Self { a, b: 1 }
    }

    /// `sqrt(n)` with square factors pulled out.
    pub fn sqrt_of(n: u64) -> Self {
        if n == 0 {
            return Self::ZERO;
        }
        let (mut outside, mut inside) = (1i64, 1u64);
        for (p, e) in factor_u64(n) {
            outside *= (p as i64).pow(e / 2);
            if e % 2 == 1 {
                inside *= p;
            }
        }
        Self { a: outside, b: inside }
    }

    pub fn coefficient(self) -> i64 {
        self.a
    }

    pub fn radicand(self) -> u64 {
        self.b
    }

    pub fn is_zero(self) -> bool {
        self.a == 0
    }

    pub fn to_f64(self) -> f64 {
        if self.b == 1 {
            self.a as f64
        } else {
            self.a as f64 * libm::sqrt(self.b as f64)
        }
    }

    pub fn checked_mul(self, rhs: Self) -> Option<Self> {
        if self.a == 0 || rhs.a == 0 {
            return Some(Self::ZERO);
        }
        let g = gcd(self.b, rhs.b);
        let a = self.a.checked_mul(rhs.a)?.checked_mul(i64::try_from(g).ok()?)?;
        let b = (self.b / g).checked_mul(rhs.b / g)?;
        Some(Self { a, b })
    }

    pub fn checked_scale(self, k: i64) -> Option<Self> {
        let a = self.a.checked_mul(k)?;
        Some(if a == 0 { Self::ZERO } else { Self { a, b: self.b } })
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn is_squarefree(n: u64) -> bool {
    factor_u64(n).iter().all(|&(_, e)| e == 1)
}

impl Mul for SurdValue {
    type Output = SurdValue;
    fn mul(self, rhs: SurdValue) -> SurdValue {
        self.checked_mul(rhs).expect("SurdValue multiplication overflow")
    }
}

impl Neg for SurdValue {
    type Output = SurdValue;
    fn neg(self) -> SurdValue {
        Self { a: -self.a, b: self.b }
    }
}

impl fmt::Debug for SurdValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SurdValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 1 {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}*sqrt({})", self.a, self.b)
        }
    }
}
