//! Rational-integer helpers: primality, factoring, square roots of -1.

use alloc::vec;
use alloc::vec::Vec;

/// Trial division runs up to this bound before switching to Pollard rho.
pub const TRIAL_DIVISION_LIMIT: u64 = 1 << 20;

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = libm::sqrt(n as f64) as u64;
    while x.checked_mul(x).map_or(true, |sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Brent's variant of Pollard rho with a fixed sequence of constants, so the
/// result is deterministic. `n` must be odd and composite.
fn rho_split(n: u64) -> u64 {
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut ys = y;
        let mut r = 1u64;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn push_factor(out: &mut Vec<(u64, u32)>, p: u64, e: u32) {
    match out.iter_mut().find(|(q, _)| *q == p) {
        Some(slot) => slot.1 += e,
        None => out.push((p, e)),
    }
}

fn factor_large(n: u64, out: &mut Vec<(u64, u32)>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        push_factor(out, n, 1);
        return;
    }
    let d = rho_split(n);
    factor_large(d, out);
    factor_large(n / d, out);
}

/// Factor `n >= 1` into `(prime, exponent)` pairs sorted by prime.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        out.push((2, twos));
        n >>= twos;
    }
    let mut p = 3u64;
    while p <= TRIAL_DIVISION_LIMIT && p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 2;
    }
    if n > 1 {
        if p * p > n {
            out.push((n, 1));
        } else {
            factor_large(n, &mut out);
        }
    }
    out.sort_unstable();
    out
}

/// A square root of `-1` modulo a prime `p = 1 mod 4`.
pub fn sqrt_minus_one(p: u64) -> u64 {
    debug_assert!(p % 4 == 1);
    let e = (p - 1) / 4;
    for c in 2..p {
        let x = pow_mod(c, e, p);
        if mul_mod(x, x, p) == p - 1 {
            return x;
        }
    }
    unreachable!("p = {p} is not a prime congruent to 1 mod 4")
}

/// Odd-only sieve of Eratosthenes; returns all primes `<= limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let half = ((limit - 1) / 2) as usize; // index i <-> 2i + 1, i >= 1
    let mut composite = vec![0u64; half / 64 + 1];
    let mut out = vec![2u64];
    let mut i = 1usize;
    while i <= half {
        if composite[i / 64] >> (i % 64) & 1 == 0 {
            let p = 2 * i as u64 + 1;
            out.push(p);
            let mut j = (p * p) as usize / 2;
            while j <= half {
                composite[j / 64] |= 1 << (j % 64);
                j += p as usize;
            }
        }
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes_and_factoring() {
        assert!(is_prime(2) && is_prime(13) && !is_prime(1) && !is_prime(91));
        assert!(is_prime(1_000_000_007));
        assert_eq!(factor_u64(360), vec![(2, 3), (3, 2), (5, 1)]);
        // product of two primes just above the trial-division limit
        let (p, q) = (1_048_583u64, 1_048_589u64);
        assert!(is_prime(p) && is_prime(q));
        assert_eq!(factor_u64(p * q), vec![(p, 1), (q, 1)]);
        assert_eq!(factor_u64(p * p * 3), vec![(3, 1), (p, 2)]);
    }

    #[test]
    fn sieve_matches_miller_rabin() {
        let sieve = primes_up_to(10_000);
        let mr: Vec<u64> = (0..=10_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve, mr);
    }

    #[test]
    fn isqrt_edges() {
        for n in [0u64, 1, 2, 3, 4, 15, 16, 17, u64::MAX, (1 << 62) + 5] {
            let r = isqrt(n);
            assert!(r as u128 * r as u128 <= n as u128);
            assert!((r as u128 + 1) * (r as u128 + 1) > n as u128);
        }
    }

    #[test]
    fn roots_of_minus_one() {
        for p in [5u64, 13, 17, 29, 1_000_000_009] {
            let x = sqrt_minus_one(p);
            assert_eq!(mul_mod(x, x, p), p - 1);
        }
    }
}
