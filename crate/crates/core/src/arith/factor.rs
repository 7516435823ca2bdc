//! Integer factorization: trial division below 10^6, then Brent's variant
//! of Pollard rho. A failed rho run retries with the next polynomial
//! constant, so results are deterministic.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::primes::{is_prime_big, is_prime_u64, mul_mod, small_primes};
use crate::error::{Error, Result};

/// Prime factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    value: BigUint,
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    fn from_primes(value: BigUint, mut primes: Vec<BigUint>) -> Self {
        primes.sort();
        let mut factors: Vec<(BigUint, u32)> = Vec::new();
        for p in primes {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
        Factorization { value, factors }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| *q == BigUint::from(p))
            .map_or(0, |&(_, e)| e)
    }

    pub fn product(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<BigUint> {
        let mut divs = vec![BigUint::one()];
        for (p, e) in &self.factors {
            let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
            for d in &divs {
                let mut pk = d.clone();
                next.push(pk.clone());
                for _ in 0..*e {
                    pk *= p;
                    next.push(pk.clone());
                }
            }
            divs = next;
        }
        divs.sort();
        divs
    }

    /// Factor list with primes narrowed to `u64`, when they all fit.
    pub fn to_u64_factors(&self) -> Option<Vec<(u64, u32)>> {
        self.factors
            .iter()
            .map(|(p, e)| p.to_u64().map(|p| (p, *e)))
            .collect()
    }
}

/// Factorizes a positive integer.
pub fn factorize(n: &BigInt) -> Result<Factorization> {
    match n.sign() {
        Sign::Plus => Ok(factorize_big(n.magnitude())),
        _ => Err(Error::NotPositive(n.to_string())),
    }
}

pub fn factorize_u64(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::NotPositive("0".into()));
    }
    let mut primes = Vec::new();
    factor_u64_into(n, &mut primes);
    Ok(Factorization::from_primes(
        BigUint::from(n),
        primes.into_iter().map(BigUint::from).collect(),
    ))
}

pub fn factorize_big(n: &BigUint) -> Factorization {
    let PartialFactorization { primes, unfactored } = factorize_partial(n, None);
    debug_assert!(unfactored.is_empty());
    Factorization::from_primes(n.clone(), primes)
}

/// Outcome of a factorization attempt under a rho iteration budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFactorization {
    /// Prime factors found, with multiplicity.
    pub primes: Vec<BigUint>,
    /// Composite cofactors the budget did not split.
    pub unfactored: Vec<BigUint>,
}

impl PartialFactorization {
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_empty()
    }

    pub fn into_factorization(self, value: BigUint) -> Option<Factorization> {
        self.is_complete()
            .then(|| Factorization::from_primes(value, self.primes))
    }
}

/// Factorizes `n`, spending at most `budget` rho steps per composite
/// cofactor (`None` for unlimited). `n = 0` yields an empty result.
pub fn factorize_partial(n: &BigUint, budget: Option<u64>) -> PartialFactorization {
    let mut out = PartialFactorization {
        primes: Vec::new(),
        unfactored: Vec::new(),
    };
    if n.is_zero() {
        return out;
    }
    if let Some(small) = n.to_u64() {
        let mut primes = Vec::new();
        factor_u64_into(small, &mut primes);
        out.primes = primes.into_iter().map(BigUint::from).collect();
        return out;
    }
    let mut rest = n.clone();
    for &p in small_primes() {
        let p_big = BigUint::from(p);
        if &p_big * &p_big > rest {
            break;
        }
        while (&rest % p).is_zero() {
            rest /= p;
            out.primes.push(p_big.clone());
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(small) = m.to_u64() {
            let mut primes = Vec::new();
            factor_u64_into(small, &mut primes);
            out.primes.extend(primes.into_iter().map(BigUint::from));
            continue;
        }
        if is_prime_big(&m) {
            out.primes.push(m);
            continue;
        }
        match split_big(&m, budget) {
            Some(d) => {
                let other = &m / &d;
                stack.push(d);
                stack.push(other);
            }
            None => out.unfactored.push(m),
        }
    }
    out
}

fn factor_u64_into(mut n: u64, out: &mut Vec<u64>) {
    if n <= 1 {
        return;
    }
    for &p in small_primes() {
        let p = p as u64;
        if p * p > n {
            break;
        }
        while n.is_multiple_of(p) {
            n /= p;
            out.push(p);
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            out.push(m);
            continue;
        }
        let d = split_u64(m);
        stack.push(d);
        stack.push(m / d);
    }
}

/// A non-trivial divisor of the composite `n` (which has no factor below 10^6).
fn split_u64(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        if let Some(d) = brent_u64(n, c) {
            return d;
        }
        c += 1;
    }
}

fn brent_u64(n: u64, c: u64) -> Option<u64> {
    const BATCH: u64 = 128;
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
    let (mut x, mut ys) = (y, y);
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
            g = q.gcd(&n);
            k += BATCH;
        }
        r <<= 1;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn split_big(n: &BigUint, budget: Option<u64>) -> Option<BigUint> {
    let mut remaining = budget;
    let mut c = 1u64;
    loop {
        match brent_big(n, c, &mut remaining) {
            RhoOutcome::Found(d) => return Some(d),
            RhoOutcome::Exhausted => return None,
            RhoOutcome::Degenerate => c += 1,
        }
    }
}

enum RhoOutcome {
    Found(BigUint),
    Degenerate,
    Exhausted,
}

fn brent_big(n: &BigUint, c: u64, remaining: &mut Option<u64>) -> RhoOutcome {
    const BATCH: u64 = 128;
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let mut spend = |steps: u64| match remaining {
        Some(left) if *left < steps => false,
        Some(left) => {
            *left -= steps;
            true
        }
        None => true,
    };
    let mut y = BigUint::from(2u32);
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    while g.is_one() {
        if !spend(r) {
            return RhoOutcome::Exhausted;
        }
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let steps = BATCH.min(r - k);
            if !spend(steps) {
                return RhoOutcome::Exhausted;
            }
            for _ in 0..steps {
                y = f(&y);
                q = q * diff(&x, &y) % n;
            }
            g = q.gcd(n);
            k += BATCH;
        }
        r <<= 1;
    }
    if g == *n {
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if g == *n {
        RhoOutcome::Degenerate
    } else {
        RhoOutcome::Found(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(f: &Factorization) -> Vec<(u64, u32)> {
        f.to_u64_factors().unwrap()
    }

    #[test]
    fn examples() {
        assert!(pairs(&factorize_u64(1).unwrap()).is_empty());
        assert_eq!(pairs(&factorize_u64(91).unwrap()), vec![(7, 1), (13, 1)]);
        assert_eq!(pairs(&factorize_u64(33).unwrap()), vec![(3, 1), (11, 1)]);
        assert!(factorize(&BigInt::from(0)).is_err());
        assert!(factorize(&BigInt::from(-5)).is_err());
    }

    #[test]
    fn semiprime_beyond_trial_limit() {
        let p = 1_000_000_007u64;
        let q = 998_244_353u64;
        let f = factorize_u64(p * q).unwrap();
        assert_eq!(pairs(&f), vec![(q, 1), (p, 1)]);
        let f = factorize_u64(p * p).unwrap();
        assert_eq!(pairs(&f), vec![(p, 2)]);
    }

    #[test]
    fn big_semiprime() {
        let p = BigUint::from(1_000_000_000_039u64);
        let q = BigUint::from(10_000_000_000_037u64);
        let f = factorize_big(&(&p * &q * 9u32));
        assert_eq!(f.factors().len(), 3);
        assert_eq!(f.product(), &p * &q * 9u32);
        assert_eq!(f.factors()[0], (BigUint::from(3u32), 2));
    }

    #[test]
    fn budget_exhaustion_leaves_cofactor() {
        let p = BigUint::from(1_000_000_000_039u64);
        let q = BigUint::from(10_000_000_000_037u64);
        let partial = factorize_partial(&(&p * &q), Some(10));
        assert!(!partial.is_complete());
        assert_eq!(partial.unfactored, vec![&p * &q]);
    }

    #[test]
    fn divisors_of_33() {
        let d = factorize_u64(33).unwrap().divisors();
        let d: Vec<u64> = d.iter().map(|x| x.to_u64().unwrap()).collect();
        assert_eq!(d, vec![1, 3, 11, 33]);
    }

    #[test]
    fn exponent_lookup() {
        let f = factorize_u64(27 * 7).unwrap();
        assert_eq!(f.exponent_of(3), 3);
        assert_eq!(f.exponent_of(5), 0);
    }
}
