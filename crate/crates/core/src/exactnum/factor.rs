//! Square-free decomposition of radicands.
//!
//! Radicands that fit in a machine word are factored exactly (trial division
//! for small primes, then Brent-cycle Pollard rho). Larger radicands fall back
//! to trial division up to a fixed bound plus a perfect-square check, and the
//! decomposition errors out when square-freeness cannot be certified.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

use super::NumError;

/// Trial-division ceiling for radicands too large for exact factorization.
pub const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full u64 range.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Brent's variant of Pollard rho; returns a nontrivial factor of an odd
/// composite `n` that has no prime factor below 100.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let mut count = 0u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
            count += 1;
            if count > n.isqrt() + 1 {
                break;
            }
        }
        if d != n && d != 1 {
            return d;
        }
        c += 1;
    }
}

fn factor_into(n: u64, out: &mut BTreeMap<u64, u32>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    // discriminants of even-period continued fractions arrive as t² − 4;
    // peel that algebraic split off before falling back to rho
    let s = (n + 4).isqrt();
    if s >= 3 && s * s == n + 4 {
        factor_into(s - 2, out);
        factor_into(s + 2, out);
        return;
    }
    let d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

/// Exact prime factorization of a u64.
pub fn factor_u64(mut n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    if n == 0 {
        return out;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97] {
        while n % p == 0 {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
    }
    factor_into(n, &mut out);
    out
}

/// Decompose `n = s² · f` with `f` square-free, exactly, for word-size `n`.
///
/// The limit computations of a fixed period ask for the same discriminant
/// many times in a row, so the last answer is memoized per thread.
pub fn squarefree_decompose_u64(n: u64) -> (u64, u64) {
    debug_assert!(n > 0);
    thread_local! {
        static LAST: std::cell::Cell<(u64, u64, u64)> = const { std::cell::Cell::new((0, 0, 0)) };
    }
    if let Some(hit) = LAST.with(|c| {
        let (key, s, f) = c.get();
        (key == n).then_some((s, f))
    }) {
        return hit;
    }
    let mut s = 1u64;
    let mut f = 1u64;
    for (p, e) in factor_u64(n) {
        for _ in 0..e / 2 {
            s *= p;
        }
        if e % 2 == 1 {
            f *= p;
        }
    }
    LAST.with(|c| c.set((n, s, f)));
    (s, f)
}

/// Decompose `d = s² · f` with `f` square-free and positive.
///
/// Word-size inputs are handled exactly; larger ones by trial division up to
/// [`TRIAL_DIVISION_BOUND`] with a perfect-square test on the cofactor, and a
/// [`NumError::RadicandBound`] error when that is inconclusive.
pub fn squarefree_decompose(d: &BigInt) -> Result<(BigInt, BigInt), NumError> {
    debug_assert!(d.is_positive());
    if let Some(n) = d.to_u64() {
        let (s, f) = squarefree_decompose_u64(n);
        return Ok((BigInt::from(s), BigInt::from(f)));
    }
    let mut m = d.clone();
    let mut s = BigInt::one();
    let mut f = BigInt::one();
    let mut p = BigInt::from(2);
    let bound = BigInt::from(TRIAL_DIVISION_BOUND);
    // huge radicands with a small square-free kernel are common (periodic
    // continued fractions of small-field surds produce discriminants s²·d
    // with astronomical s), so test the cofactor for squareness eagerly
    let mut next_square_probe = BigInt::from(1024);
    while p <= bound && &p * &p <= m {
        let mut e = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= &p;
        }
        if e % 2 == 1 {
            f *= &p;
        }
        if p >= next_square_probe {
            let root = m.sqrt();
            if &root * &root == m {
                return Ok((s * root, f));
            }
            next_square_probe *= 32;
        }
        p += 1;
    }
    if m.is_one() {
        return Ok((s, f));
    }
    if &p * &p > m {
        // the cofactor is prime
        return Ok((s, f * m));
    }
    let root = m.sqrt();
    if &root * &root == m {
        return Ok((s * root, f));
    }
    if m <= &bound * &bound {
        // no factor below the bound and below its square root: prime
        return Ok((s, f * m));
    }
    Err(NumError::RadicandBound { radicand: d.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_and_large() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(173));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(29237)); // 13² · 173
        assert!(is_prime_u64(4_611_686_018_427_387_847)); // near 2^62
        assert!(!is_prime_u64(4_611_686_018_427_387_849));
    }

    #[test]
    fn factors_semiprime_beyond_trial_range() {
        let n = 1_000_003u64 * 1_000_033;
        let f = factor_u64(n);
        assert_eq!(f.get(&1_000_003), Some(&1));
        assert_eq!(f.get(&1_000_033), Some(&1));
    }

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_decompose_u64(1), (1, 1));
        assert_eq!(squarefree_decompose_u64(8), (2, 2));
        assert_eq!(squarefree_decompose_u64(29237), (13, 173));
        assert_eq!(squarefree_decompose_u64(360), (6, 10));
        let (s, f) = squarefree_decompose(&BigInt::from(29237)).unwrap();
        assert_eq!((s, f), (BigInt::from(13), BigInt::from(173)));
    }
}
