//! Exact integer arithmetic: factorization, primality, modular square
//! roots, residue classification, and a few closed-form sequences.

mod factor;
mod primes;
mod sqrt;

pub use factor::{
    factorize, factorize_big, factorize_partial, factorize_u64, Factorization, PartialFactorization,
};
pub use primes::{is_prime, is_prime_big, is_prime_u64, small_primes, TRIAL_LIMIT};
pub use sqrt::{crt_combine, sqrt_mod_prime_power, sqrts_mod, MAX_MODULUS};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// m(m+1)/2
pub fn triangular(m: u64) -> BigUint {
    let m = BigUint::from(m);
    (&m * (&m + 1u32)) >> 1
}

/// Fibonacci numbers indexed from `f(0) = f(1) = 1`, so `f(2) = 2`, `f(3) = 3`.
pub fn fibonacci(i: u64) -> BigUint {
    let (mut a, mut b) = (BigUint::one(), BigUint::one());
    for _ in 0..i {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// Floor square root.
pub fn isqrt(n: &BigUint) -> BigUint {
    n.sqrt()
}

/// Floor square root of a signed integer; negative input is rejected.
pub fn isqrt_int(n: &BigInt) -> Result<BigInt> {
    if n.sign() == num_bigint::Sign::Minus {
        return Err(Error::Negative(n.to_string()));
    }
    Ok(BigInt::from(n.magnitude().sqrt()))
}

pub fn isqrt_u64(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Residue class of an odd number with respect to primes mod 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ResidueClass {
    /// Every prime factor is 1 mod 3 (includes the empty product 1).
    P1,
    /// Exactly one factor of 3; every other prime factor is 1 mod 3.
    ThreeP1,
    Other,
}

impl ResidueClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ResidueClass::P1 => "P1",
            ResidueClass::ThreeP1 => "3P1",
            ResidueClass::Other => "other",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueClassification {
    pub value: BigUint,
    pub class: ResidueClass,
    /// Number of distinct prime factors other than 3.
    pub distinct_non3_prime_count: u32,
}

fn classify_factorization(f: &Factorization) -> ResidueClassification {
    let three = BigUint::from(3u32);
    let mut all_one_mod_3 = true;
    let mut count = 0;
    for (p, _) in f.factors() {
        if *p == three {
            continue;
        }
        count += 1;
        if (p % 3u32) != BigUint::one() {
            all_one_mod_3 = false;
        }
    }
    let class = match (all_one_mod_3, f.exponent_of(3)) {
        (true, 0) => ResidueClass::P1,
        (true, 1) => ResidueClass::ThreeP1,
        _ => ResidueClass::Other,
    };
    ResidueClassification {
        value: f.value().clone(),
        class,
        distinct_non3_prime_count: count,
    }
}

/// Classifies a positive odd integer by fully factoring it.
pub fn classify_odd(n: u64) -> Result<ResidueClassification> {
    check_odd(n)?;
    Ok(classify_factorization(&factorize_u64(n)?))
}

/// As [`classify_odd`], for arbitrary-precision input. Factoring is not
/// budgeted; for values with two large prime factors see
/// [`classify_certified`].
pub fn classify_odd_big(n: &BigUint) -> Result<ResidueClassification> {
    if n.is_zero() || n.is_even() {
        return Err(Error::EvenModulus(n.to_string()));
    }
    Ok(classify_factorization(&factorize_big(n)))
}

fn check_odd(n: u64) -> Result<()> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(Error::EvenModulus(n.to_string()));
    }
    Ok(())
}

/// Classification driven by an explicit square root of -3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedClassification {
    pub value: BigUint,
    pub class: ResidueClass,
    /// Present when the rho budget sufficed to factor the value completely.
    pub factorization: Option<ResidueClassification>,
}

/// Classifies the odd `n` given `root` with `root^2 = -3 (mod n)`.
///
/// An odd modulus admits a square root of -3 exactly when its class is
/// `P1` or `3P1`, and then the exponent of 3 alone separates the two.
/// Factoring is attempted with `rho_budget` steps per cofactor; when it
/// completes, its classification is cross-checked against the certificate.
pub fn classify_certified(
    n: &BigUint,
    root: &BigUint,
    rho_budget: u64,
) -> Result<CertifiedClassification> {
    if n.is_zero() || n.is_even() {
        return Err(Error::EvenModulus(n.to_string()));
    }
    if (root * root + 3u32) % n != BigUint::zero() {
        return Err(Error::BadCertificate(n.to_string()));
    }
    let class = if (n % 3u32).is_zero() {
        ResidueClass::ThreeP1
    } else {
        ResidueClass::P1
    };
    let factorization = factorize_partial(n, Some(rho_budget))
        .into_factorization(n.clone())
        .map(|f| classify_factorization(&f));
    if factorization
        .as_ref()
        .is_some_and(|full| full.class != class)
    {
        return Err(Error::BadCertificate(format!(
            "{n} factors into a different class"
        )));
    }
    Ok(CertifiedClassification {
        value: n.clone(),
        class,
        factorization,
    })
}

/// A square root of -3 modulo `N = a^2 + ab + b^2` for coprime `a, b`, from
/// `(2a + b)^2 + 3b^2 = 4N`. Returns `None` when `a, b` are not coprime.
pub fn eisenstein_sqrt_minus3(a: &BigUint, b: &BigUint) -> Option<BigUint> {
    if !a.gcd(b).is_one() {
        return None;
    }
    let n = a * a + a * b + b * b;
    if n.is_one() {
        return Some(BigUint::zero());
    }
    let n_int = BigInt::from(n.clone());
    let e = BigInt::from(b.clone()).extended_gcd(&n_int);
    if !e.gcd.is_one() {
        return None;
    }
    let b_inv = e.x.mod_floor(&n_int);
    let t = (BigInt::from(2u32 * a + b) * b_inv).mod_floor(&n_int);
    t.to_biguint()
}

/// `true` when `n` fits the 64-bit modular routines.
pub fn fits_fast_path(n: &BigUint) -> bool {
    n.to_u64().is_some_and(|v| v <= MAX_MODULUS)
}
