//! Exact arithmetic in the Gaussian integers `Z[i]`.
//!
//! Coordinates are `i64` with checked arithmetic; products needed by modular
//! reduction are formed in `i128`. Division rounds each coordinate of
//! `a * conj(b) / N(b)` with `floor(t + 1/2)`, which fixes a canonical
//! residue for every class modulo `b`.

mod factor;
pub mod rational;
mod surd;

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::{Error, Result};

pub use factor::{
    factor, factor_with_bound, prime_elements_up_to_norm, Factorization, GeneratorChoice, DEFAULT_FACTOR_BOUND,
};
pub use surd::SurdValue;

/// Default cap on `N(n)` for [`residues`].
pub const DEFAULT_RESIDUE_BOUND: u64 = 1_000_000;

/// An element `re + im*i` of `Z[i]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

impl GaussianInt {
    pub const ZERO: Self = Self::new(0, 0);
    pub const ONE: Self = Self::new(1, 0);
    pub const I: Self = Self::new(0, 1);
    /// The ramified prime `1 + i`.
    pub const ONE_PLUS_I: Self = Self::new(1, 1);

    pub const fn new(re: i64, im: i64) -> Self {
        Self { re, im }
    }

    pub const fn from_int(n: i64) -> Self {
        Self::new(n, 0)
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    /// `re^2 + im^2`, or [`Error::Overflow`] when it does not fit in `u64`.
    pub fn norm(self) -> Result<u64> {
        u64::try_from(self.norm_wide()).map_err(|_| Error::Overflow)
    }

    pub(crate) fn norm_wide(self) -> u128 {
        let (a, b) = (self.re as i128, self.im as i128);
        (a * a + b * b) as u128
    }

    /// Odd norm, i.e. coprime to `1 + i`.
    pub fn is_odd(self) -> bool {
        (self.re + self.im) & 1 == 1
    }

    pub fn checked_add(self, rhs: Self) -> Option<Self> {
        Some(Self::new(self.re.checked_add(rhs.re)?, self.im.checked_add(rhs.im)?))
    }

    pub fn checked_sub(self, rhs: Self) -> Option<Self> {
        Some(Self::new(self.re.checked_sub(rhs.re)?, self.im.checked_sub(rhs.im)?))
    }

    pub fn checked_mul(self, rhs: Self) -> Option<Self> {
        let (a, b, c, d) = (self.re as i128, self.im as i128, rhs.re as i128, rhs.im as i128);
        from_wide(a * c - b * d, a * d + b * c)
    }

    pub fn checked_pow(self, mut e: u32) -> Option<Self> {
        let mut acc = Self::ONE;
        let mut base = self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(base)?;
            }
        }
        Some(acc)
    }

    /// Does `self` divide `x` exactly?
    pub fn divides(self, x: Self) -> bool {
        if self.is_zero() {
            return x.is_zero();
        }
        let (nr, ni) = wide_mul_conj(x, self);
        let d = self.norm_wide() as i128;
        nr % d == 0 && ni % d == 0
    }

    /// `x / self` when the division is exact.
    pub fn exact_div_of(self, x: Self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let (nr, ni) = wide_mul_conj(x, self);
        let d = self.norm_wide() as i128;
        if nr % d != 0 || ni % d != 0 {
            return None;
        }
        from_wide(nr / d, ni / d)
    }

    /// Multiply by a unit; never overflows except for `i64::MIN` coordinates.
    pub fn mul_unit(self, u: Unit) -> Self {
        match u {
            Unit::One => self,
            Unit::I => Self::new(-self.im, self.re),
            Unit::MinusOne => Self::new(-self.re, -self.im),
            Unit::MinusI => Self::new(self.im, -self.re),
        }
    }
}

fn from_wide(re: i128, im: i128) -> Option<GaussianInt> {
    Some(GaussianInt::new(i64::try_from(re).ok()?, i64::try_from(im).ok()?))
}

/// `x * conj(y)` in 128-bit coordinates.
fn wide_mul_conj(x: GaussianInt, y: GaussianInt) -> (i128, i128) {
    let (a, b, c, d) = (x.re as i128, x.im as i128, y.re as i128, y.im as i128);
    (a * c + b * d, b * c - a * d)
}

impl fmt::Debug for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (re, 0) => write!(f, "{re}"),
            (0, im) => write!(f, "{im}i"),
            (re, im) if im < 0 => write!(f, "{re}{im}i"),
            (re, im) => write!(f, "{re}+{im}i"),
        }
    }
}

impl Add for GaussianInt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs).expect("GaussianInt addition overflow")
    }
}

impl Sub for GaussianInt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(rhs).expect("GaussianInt subtraction overflow")
    }
}

impl Mul for GaussianInt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs).expect("GaussianInt multiplication overflow")
    }
}

impl Neg for GaussianInt {
    type Output = Self;
    fn neg(self) -> Self {
        self.mul_unit(Unit::MinusOne)
    }
}

impl From<i64> for GaussianInt {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

/// The four units of `Z[i]`, `i^k` for `k = 0..4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Unit {
    One,
    I,
    MinusOne,
    MinusI,
}

impl Unit {
    pub const ALL: [Unit; 4] = [Unit::One, Unit::I, Unit::MinusOne, Unit::MinusI];

    /// `i^k`.
    pub fn from_exponent(k: u32) -> Self {
        Self::ALL[(k % 4) as usize]
    }

    pub fn exponent(self) -> u32 {
        self as u32
    }

    pub fn to_gint(self) -> GaussianInt {
        GaussianInt::ONE.mul_unit(self)
    }

    pub fn from_gint(z: GaussianInt) -> Option<Self> {
        Self::ALL.into_iter().find(|u| u.to_gint() == z)
    }

    pub fn inverse(self) -> Self {
        Self::from_exponent(4 - self.exponent())
    }

    pub fn pow(self, e: u32) -> Self {
        Self::from_exponent(self.exponent() * (e % 4))
    }
}

impl Mul for Unit {
    type Output = Unit;
    fn mul(self, rhs: Unit) -> Unit {
        Unit::from_exponent(self.exponent() + rhs.exponent())
    }
}

/// Euclidean division: `a = q*b + r` with `N(r) <= N(b)/2`.
pub fn divrem(a: GaussianInt, b: GaussianInt) -> Result<(GaussianInt, GaussianInt)> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let (a_re, a_im, b_re, b_im) = (a.re as i128, a.im as i128, b.re as i128, b.im as i128);
    let num_re = a_re
        .checked_mul(b_re)
        .and_then(|x| x.checked_add(a_im.checked_mul(b_im)?))
        .ok_or(Error::Overflow)?;
    let num_im = a_im
        .checked_mul(b_re)
        .and_then(|x| x.checked_sub(a_re.checked_mul(b_im)?))
        .ok_or(Error::Overflow)?;
    let d = b.norm_wide() as i128;
    let q_re = round_half_up(num_re, d).ok_or(Error::Overflow)?;
    let q_im = round_half_up(num_im, d).ok_or(Error::Overflow)?;
    let r_re = a_re - (q_re * b_re - q_im * b_im);
    let r_im = a_im - (q_re * b_im + q_im * b_re);
    let q = from_wide(q_re, q_im).ok_or(Error::Overflow)?;
    let r = from_wide(r_re, r_im).ok_or(Error::Overflow)?;
    Ok((q, r))
}

/// `floor(num/den + 1/2)` for `den > 0`.
fn round_half_up(num: i128, den: i128) -> Option<i128> {
    Some(num.checked_mul(2)?.checked_add(den)?.div_euclid(den.checked_mul(2)?))
}

/// Canonical representative of `x` modulo `n`: `x - n * round(x / n)`.
pub fn reduce(x: GaussianInt, n: GaussianInt) -> Result<GaussianInt> {
    Ok(divrem(x, n)?.1)
}

/// Canonical reduction of a product `a * b` of two reduced elements.
pub(crate) fn mul_mod(a: GaussianInt, b: GaussianInt, n: GaussianInt) -> GaussianInt {
    let (a_re, a_im, b_re, b_im) = (a.re as i128, a.im as i128, b.re as i128, b.im as i128);
    let (x_re, x_im) = (a_re * b_re - a_im * b_im, a_re * b_im + a_im * b_re);
    reduce_wide(x_re, x_im, n)
}

fn reduce_wide(x_re: i128, x_im: i128, n: GaussianInt) -> GaussianInt {
    let (n_re, n_im) = (n.re as i128, n.im as i128);
    let d = n.norm_wide() as i128;
    let q_re = (2 * (x_re * n_re + x_im * n_im) + d).div_euclid(2 * d);
    let q_im = (2 * (x_im * n_re - x_re * n_im) + d).div_euclid(2 * d);
    let r_re = x_re - (q_re * n_re - q_im * n_im);
    let r_im = x_im - (q_re * n_im + q_im * n_re);
    GaussianInt::new(r_re as i64, r_im as i64)
}

/// Canonical reduction of `a^e` modulo `n` by square-and-multiply.
pub fn modpow(a: GaussianInt, mut e: u64, n: GaussianInt) -> Result<GaussianInt> {
    let mut acc = reduce(GaussianInt::ONE, n)?;
    let mut base = reduce(a, n)?;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        e >>= 1;
        if e > 0 {
            base = mul_mod(base, base, n);
        }
    }
    Ok(acc)
}

/// Canonical gcd: `(1+i)^e * p` with `p` primary.
pub fn gcd(a: GaussianInt, b: GaussianInt) -> Result<GaussianInt> {
    gcd_with_steps(a, b).map(|(g, _)| g)
}

/// [`gcd`] together with the number of Euclidean steps taken.
pub fn gcd_with_steps(a: GaussianInt, b: GaussianInt) -> Result<(GaussianInt, u32)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::GcdOfZeros);
    }
    let (mut x, mut y) = (a, b);
    let mut steps = 0;
    while !y.is_zero() {
        let r = divrem(x, y)?.1;
        (x, y) = (y, r);
        steps += 1;
    }
    Ok((canonical_associate(x), steps))
}

/// The unit-free representative `(1+i)^e * primary` of the ideal `(z)`.
pub fn canonical_associate(z: GaussianInt) -> GaussianInt {
    if z.is_zero() {
        return z;
    }
    let mut odd = z;
    let mut e = 0u32;
    while !odd.is_odd() {
        odd = GaussianInt::ONE_PLUS_I
            .exact_div_of(odd)
            .expect("even norm implies divisibility by 1+i");
        e += 1;
    }
    let (_, primary) = to_primary(odd).expect("odd part has odd norm");
    GaussianInt::ONE_PLUS_I
        .checked_pow(e)
        .and_then(|p| p.checked_mul(primary))
        .expect("associate of an i64 element fits")
}

/// `n = 1 mod (1+i)^3`, via the arithmetic characterization
/// `re` odd, `im` even, `re + im = 1 mod 4` (checked against
/// [`is_primary_by_division`] by the test suite).
pub fn is_primary(n: GaussianInt) -> bool {
    n.re & 1 == 1 && n.im & 1 == 0 && (n.re.wrapping_add(n.im)).rem_euclid(4) == 1
}

/// `n = 1 mod (1+i)^3` tested by exact division of `n - 1` by `(1+i)^3`.
pub fn is_primary_by_division(n: GaussianInt) -> bool {
    const CUBE: GaussianInt = GaussianInt::new(-2, 2);
    match n.checked_sub(GaussianInt::ONE) {
        Some(d) => CUBE.divides(d),
        None => false,
    }
}

/// Split an odd-norm `n` as `unit * primary`.
pub fn to_primary(n: GaussianInt) -> Result<(Unit, GaussianInt)> {
    if n.is_zero() || !n.is_odd() {
        return Err(Error::EvenNorm);
    }
    let mut found = None;
    for v in Unit::ALL {
        let candidate = n.mul_unit(v);
        if is_primary(candidate) {
            assert!(found.is_none(), "two primary associates of {n}");
            found = Some((v.inverse(), candidate));
        }
    }
    Ok(found.expect("every odd element has a primary associate"))
}

/// Every Gaussian integer with norm at most `bound`, in a fixed scan order
/// (increasing `re`, then increasing `im`).
pub fn elements_up_to_norm(bound: u64) -> impl Iterator<Item = GaussianInt> {
    let r = rational::isqrt(bound) as i64;
    (-r..=r).flat_map(move |a| {
        let h = rational::isqrt(bound - (a * a) as u64) as i64;
        (-h..=h).map(move |b| GaussianInt::new(a, b))
    })
}

/// Primary elements with norm at most `bound`, sorted by `(norm, re, im)`.
pub fn primaries_up_to_norm(bound: u64) -> Vec<GaussianInt> {
    let mut out: Vec<GaussianInt> = elements_up_to_norm(bound).filter(|&z| is_primary(z)).collect();
    sort_by_norm(&mut out);
    out
}

pub(crate) fn sort_by_norm(v: &mut [GaussianInt]) {
    v.sort_unstable_by_key(|z| (z.norm_wide(), z.re, z.im));
}

/// A complete residue system modulo `n`: the `N(n)` canonical reductions,
/// found by scanning a box that contains them all.
pub fn residues(n: GaussianInt) -> Result<Vec<GaussianInt>> {
    residues_with_bound(n, DEFAULT_RESIDUE_BOUND)
}

pub fn residues_with_bound(n: GaussianInt, bound: u64) -> Result<Vec<GaussianInt>> {
    if n.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let norm = n.norm()?;
    if norm > bound {
        return Err(Error::ResidueBoundExceeded { norm, bound });
    }
    let r = rational::isqrt(norm) as i64 + 2;
    let mut out = Vec::with_capacity(norm as usize);
    for a in -r..=r {
        for b in -r..=r {
            out.push(reduce(GaussianInt::new(a, b), n)?);
        }
    }
    out.sort_unstable();
    out.dedup();
    assert_eq!(out.len() as u64, norm, "residue scan of {n} incomplete");
    Ok(out)
}

/// Constant-time lookup from any Gaussian integer to the index of its class
/// in [`residues`]`(n)`.
#[derive(Clone, Debug)]
pub struct ResidueMap {
    n: GaussianInt,
    reps: Vec<GaussianInt>,
    radius: i64,
    slots: Vec<u32>,
}

impl ResidueMap {
    pub fn new(n: GaussianInt) -> Result<Self> {
        Self::with_bound(n, DEFAULT_RESIDUE_BOUND)
    }

    pub fn with_bound(n: GaussianInt, bound: u64) -> Result<Self> {
        let reps = residues_with_bound(n, bound)?;
        let radius = reps.iter().map(|z| z.re.abs().max(z.im.abs())).max().unwrap_or(0);
        let side = (2 * radius + 1) as usize;
        let mut slots = alloc::vec![u32::MAX; side * side];
        for (i, z) in reps.iter().enumerate() {
            slots[Self::slot(radius, *z)] = i as u32;
        }
        Ok(Self { n, reps, radius, slots })
    }

    fn slot(radius: i64, z: GaussianInt) -> usize {
        let side = 2 * radius + 1;
        ((z.re + radius) * side + (z.im + radius)) as usize
    }

    pub fn modulus(&self) -> GaussianInt {
        self.n
    }

    /// The canonical residues, sorted.
    pub fn residues(&self) -> &[GaussianInt] {
        &self.reps
    }

    pub fn index_of(&self, x: GaussianInt) -> usize {
        let r = reduce_wide(x.re as i128, x.im as i128, self.n);
        self.slots[Self::slot(self.radius, r)] as usize
    }
}
