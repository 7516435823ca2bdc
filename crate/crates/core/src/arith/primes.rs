//! Primality: a sieve for small numbers, deterministic Miller–Rabin on
//! 64-bit values, and Baillie–PSW beyond.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Trial-division limit; also the sieve bound.
pub const TRIAL_LIMIT: u32 = 1_000_000;

/// Miller–Rabin bases deterministic for every n < 3.3 * 10^24.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// All primes below [`TRIAL_LIMIT`].
pub fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut composite = vec![false; n];
        let mut out = Vec::with_capacity(78_498);
        for i in 2..n {
            if !composite[i] {
                out.push(i as u32);
                let mut j = i * i;
                while j < n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out
    })
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
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

fn strong_probable_prime_u64(n: u64, base: u64) -> bool {
    let base = base % n;
    if base == 0 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let mut x = pow_mod(base, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < TRIAL_LIMIT as u64 {
        return small_primes().binary_search(&(n as u32)).is_ok();
    }
    for &p in &small_primes()[..12] {
        if n.is_multiple_of(p as u64) {
            return false;
        }
    }
    MR_BASES.iter().all(|&b| strong_probable_prime_u64(n, b))
}

/// Primality of an arbitrary integer. Negative numbers, 0 and 1 are not
/// prime. Deterministic below 3.3 * 10^24; above that this is the
/// Baillie–PSW test (Miller–Rabin bases plus a strong Lucas test).
pub fn is_prime(n: &BigInt) -> bool {
    match n.sign() {
        Sign::Minus | Sign::NoSign => false,
        Sign::Plus => is_prime_big(n.magnitude()),
    }
}

pub fn is_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in small_primes().iter().take(1000) {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let spp = |base: u64| {
        let mut x = BigUint::from(base).modpow(&d, n);
        if x == one || x == n_minus_1 {
            return true;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                return true;
            }
        }
        false
    };
    if !MR_BASES.iter().all(|&b| spp(b)) {
        return false;
    }
    // 3.3 * 10^24 < 2^82
    if n.bits() <= 81 {
        return true;
    }
    strong_lucas_probable_prime(n)
}

/// Jacobi symbol (a / n) for odd positive n.
pub(crate) fn jacobi(a: &BigInt, n: &BigUint) -> i32 {
    let n_int = BigInt::from(n.clone());
    let mut a = a.mod_floor(&n_int).magnitude().clone();
    let mut n = n.clone();
    let mut result = 1;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz;
        let n_mod_8 = (&n % 8u32).to_u32().unwrap_or(0);
        if tz % 2 == 1 && (n_mod_8 == 3 || n_mod_8 == 5) {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32) == BigUint::from(3u32) && (&n % 4u32) == BigUint::from(3u32) {
            result = -result;
        }
        a %= &n;
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

fn is_perfect_square(n: &BigUint) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

/// Strong Lucas probable-prime test with Selfridge's parameters (P = 1).
fn strong_lucas_probable_prime(n: &BigUint) -> bool {
    if is_perfect_square(n) {
        return false;
    }
    let mut d: i64 = 5;
    loop {
        match jacobi(&BigInt::from(d), n) {
            -1 => break,
            0 => {
                // d shares a factor with n; n is larger than |d| here
                return false;
            }
            _ => d = if d > 0 { -(d + 2) } else { -d + 2 },
        }
    }
    let modulus = BigInt::from(n.clone());
    let disc = BigInt::from(d);
    let q = BigInt::from((1 - d) / 4);
    let reduce = |x: BigInt| x.mod_floor(&modulus);
    let halve = |x: BigInt| {
        let x = if x.is_odd() { x + &modulus } else { x };
        reduce(x >> 1)
    };

    let n_plus_1 = n + 1u32;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let k = &n_plus_1 >> s;

    let mut u = BigInt::one();
    let mut v = BigInt::one();
    let mut qk = reduce(q.clone());
    for i in (0..k.bits() - 1).rev() {
        u = reduce(&u * &v);
        v = reduce(&v * &v - (&qk << 1));
        qk = reduce(&qk * &qk);
        if k.bit(i) {
            let u_next = halve(&u + &v);
            let v_next = halve(&disc * &u + &v);
            u = u_next;
            v = v_next;
            qk = reduce(&qk * &q);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = reduce(&v * &v - (&qk << 1));
        if v.is_zero() {
            return true;
        }
        qk = reduce(&qk * &qk);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn small_examples() {
        assert!(is_prime(&BigInt::from(2)));
        assert!(is_prime(&BigInt::from(7)));
        assert!(!is_prime(&BigInt::from(49)));
        assert!(!is_prime(&BigInt::from(1)));
        assert!(!is_prime(&BigInt::from(0)));
        assert!(!is_prime(&BigInt::from(-7)));
    }

    #[test]
    fn agrees_with_trial_division_around_trial_limit() {
        let lo = TRIAL_LIMIT as u64 - 2000;
        for n in lo..lo + 4000 {
            assert_eq!(is_prime_u64(n), naive(n), "n = {n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_rejected() {
        // base-2 strong pseudoprimes and Carmichael numbers
        for n in [2047u64, 3215031751, 561, 1105, 3825123056546413051] {
            assert!(!is_prime_u64(n), "{n}");
        }
        assert!(is_prime_u64(18446744073709551557));
    }

    #[test]
    fn big_values() {
        // 2^89 - 1 and 2^127 - 1 are Mersenne primes
        let m89 = (BigUint::one() << 89u32) - 1u32;
        let m127 = (BigUint::one() << 127u32) - 1u32;
        assert!(is_prime_big(&m89));
        assert!(is_prime_big(&m127));
        assert!(!is_prime_big(&(&m89 * &m127)));
        // 2^101 - 1 = 7432339208719 * 341117531003194129
        let m101 = (BigUint::one() << 101u32) - 1u32;
        assert!(!is_prime_big(&m101));
    }

    #[test]
    fn lucas_alone_on_known_primes_and_composites() {
        let m127 = (BigUint::one() << 127u32) - 1u32;
        assert!(strong_lucas_probable_prime(&m127));
        let composite = BigUint::from(1_000_003u64) * BigUint::from(998_244_353u64);
        assert!(!strong_lucas_probable_prime(&composite));
        // 5459 and 5777 are strong Lucas pseudoprimes; both fail Miller–Rabin
        assert!(!is_prime_u64(5459) && !is_prime_u64(5777));
    }

    #[test]
    fn jacobi_matches_euler_criterion() {
        for p in [3u64, 5, 7, 11, 13, 101] {
            for a in -20i64..20 {
                let j = jacobi(&BigInt::from(a), &BigUint::from(p));
                let r = a.rem_euclid(p as i64) as u64;
                let euler = if r == 0 {
                    0
                } else if pow_mod(r, (p - 1) / 2, p) == 1 {
                    1
                } else {
                    -1
                };
                assert_eq!(j, euler, "({a}/{p})");
            }
        }
    }
}
