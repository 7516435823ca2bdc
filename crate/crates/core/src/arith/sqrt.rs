//! Square roots modulo odd prime powers (Tonelli–Shanks, then Hensel
//! lifting) and modulo odd composites (CRT recombination).

use num_integer::Integer;

use super::factor::factorize_u64;
use super::primes::{is_prime_u64, mul_mod, pow_mod};
use crate::error::{Error, Result};

/// Largest modulus accepted by the 64-bit routines.
pub const MAX_MODULUS: u64 = (1 << 63) - 1;

fn reduce(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

fn inverse(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i128) as u64)
}

/// One square root of the unit `a` modulo the odd prime `p`, if any.
fn tonelli_shanks(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Lifts a root `y` of `y^2 = a (mod p)` with `p` not dividing `a` to a
/// root modulo `p^e`.
fn hensel_lift(a: u64, mut y: u64, p: u64, e: u32) -> u64 {
    let mut modulus = p;
    for _ in 1..e {
        modulus *= p;
        let a_m = a % modulus;
        let f = (mul_mod(y, y, modulus) + modulus - a_m) % modulus;
        let inv = inverse(2 * y % modulus, modulus).expect("2y is a unit");
        y = (y + modulus - mul_mod(f, inv, modulus)) % modulus;
    }
    y
}

fn checked_pow(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e)
        .filter(|&m| m <= MAX_MODULUS)
        .ok_or_else(|| Error::ModulusTooLarge(format!("{p}^{e}")))
}

/// All `x` in `[0, p^e)` with `x^2 = a (mod p^e)`, ascending.
pub fn sqrt_mod_prime_power(a: i64, p: u64, e: u32) -> Result<Vec<u64>> {
    if p.is_multiple_of(2) {
        return Err(Error::EvenModulus(p.to_string()));
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if e == 0 {
        return Err(Error::NotPositive("0".into()));
    }
    let pe = checked_pow(p, e)?;
    Ok(roots_prime_power(reduce(a, pe), p, e, pe))
}

fn roots_prime_power(r: u64, p: u64, e: u32, pe: u64) -> Vec<u64> {
    if r == 0 {
        // x^2 = 0 iff p^ceil(e/2) divides x
        let step = p.pow(e.div_ceil(2));
        return (0..pe / step).map(|t| t * step).collect();
    }
    let mut k = 0;
    let mut unit = r;
    while unit.is_multiple_of(p) {
        unit /= p;
        k += 1;
    }
    if k % 2 == 1 {
        return Vec::new();
    }
    let lifted_exp = e - k;
    let Some(y0) = tonelli_shanks(unit % p, p) else {
        return Vec::new();
    };
    let pl = p.pow(lifted_exp);
    let y = hensel_lift(unit % pl, y0, p, lifted_exp);
    let scale = p.pow(k / 2);
    let spacing = p.pow(e - k / 2);
    let mut out = Vec::with_capacity(2 * scale as usize);
    for base in [y, pl - y] {
        for t in 0..scale {
            out.push((base * scale + t * spacing) % pe);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// All `x` in `[0, n)` with `x^2 = a (mod n)` for odd `n`, ascending.
/// `n = 1` yields `[0]`.
pub fn sqrts_mod(a: i64, n: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::NotPositive("0".into()));
    }
    if n.is_multiple_of(2) {
        return Err(Error::EvenModulus(n.to_string()));
    }
    if n > MAX_MODULUS {
        return Err(Error::ModulusTooLarge(n.to_string()));
    }
    let factors = factorize_u64(n)?
        .to_u64_factors()
        .expect("factors of a u64 fit in u64");
    let mut acc: Vec<u64> = vec![0];
    let mut modulus = 1u64;
    for (p, e) in factors {
        let pe = p.pow(e);
        let local = roots_prime_power(reduce(a, pe), p, e, pe);
        if local.is_empty() {
            return Ok(Vec::new());
        }
        acc = crt_combine(&acc, modulus, &local, pe);
        modulus *= pe;
    }
    acc.sort_unstable();
    Ok(acc)
}

/// Every `x mod m1*m2` with `x = r1 (mod m1)` and `x = r2 (mod m2)` over
/// the given residue sets; the moduli must be coprime.
pub fn crt_combine(r1: &[u64], m1: u64, r2: &[u64], m2: u64) -> Vec<u64> {
    let inv = inverse(m1 % m2, m2).expect("coprime moduli");
    let m = m1 as u128 * m2 as u128;
    let mut out = Vec::with_capacity(r1.len() * r2.len());
    for &a in r1 {
        for &b in r2 {
            let diff = (b as i128 - (a % m2) as i128).rem_euclid(m2 as i128) as u64;
            let t = mul_mod(diff, inv, m2);
            out.push(((a as u128 + m1 as u128 * t as u128) % m) as u64);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scan(a: i64, n: u64) -> Vec<u64> {
        (0..n)
            .filter(|&x| mul_mod(x, x, n) == reduce(a, n))
            .collect()
    }

    #[test]
    fn prime_examples() {
        assert_eq!(sqrt_mod_prime_power(-3, 7, 1).unwrap(), vec![2, 5]);
        assert_eq!(sqrt_mod_prime_power(0, 3, 1).unwrap(), vec![0]);
        assert!(sqrt_mod_prime_power(-3, 5, 1).unwrap().is_empty());
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(matches!(
            sqrt_mod_prime_power(1, 2, 3),
            Err(Error::EvenModulus(_))
        ));
        assert!(matches!(
            sqrt_mod_prime_power(1, 9, 1),
            Err(Error::NotPrime(_))
        ));
        assert!(matches!(sqrts_mod(1, 10), Err(Error::EvenModulus(_))));
    }

    #[test]
    fn composite_examples() {
        assert_eq!(sqrts_mod(-3, 91).unwrap(), scan(-3, 91));
        assert_eq!(sqrts_mod(-3, 91).unwrap().len(), 4);
        assert_eq!(sqrts_mod(-3, 7).unwrap(), vec![2, 5]);
        assert_eq!(sqrts_mod(0, 1).unwrap(), vec![0]);
    }

    #[test]
    fn prime_powers_match_scan() {
        for p in [3u64, 5, 7, 11, 13] {
            for e in 1..=4 {
                let pe = p.pow(e);
                if pe > 20_000 {
                    continue;
                }
                for a in -30i64..30 {
                    assert_eq!(
                        sqrt_mod_prime_power(a, p, e).unwrap(),
                        scan(a, pe),
                        "a={a} p={p} e={e}"
                    );
                }
                for a in [0i64, p as i64 * p as i64, (p * p * p) as i64 * 2] {
                    assert_eq!(sqrt_mod_prime_power(a, p, e).unwrap(), scan(a, pe));
                }
            }
        }
    }

    #[test]
    fn tonelli_shanks_on_p_1_mod_8() {
        // 10^9+9 = 1 (mod 8) takes the general branch
        let p = 1_000_000_009u64;
        for a in [2u64, 3, 5, 12345] {
            match tonelli_shanks(a, p) {
                Some(r) => assert_eq!(mul_mod(r, r, p), a),
                None => assert_eq!(pow_mod(a, (p - 1) / 2, p), p - 1),
            }
        }
        let big = sqrts_mod(-3, p).unwrap();
        assert_eq!(big.len(), 2);
        assert_eq!(big[0] + big[1], p);
    }
}
