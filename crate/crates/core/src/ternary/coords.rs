//! Coordinates of 3-color fair games. A game containing `c` is
//!
//! ```text
//! ((v + u) / 2, (v - u) / 2, c),   v = (u^2 + c(c-1)) / (2c+1),
//! ```
//!
//! for each `u` with `u^2 = -c(c-1) (mod 2c+1)`, and `c` is the largest
//! coordinate exactly when `|u| <= c`. Since `-4c(c-1) = -3 (mod 2c+1)`,
//! `c` occurs iff -3 is a square mod `2c+1`, i.e. iff `2c+1` has class
//! `P1` or `3P1`.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;

use super::TernaryGame;
use crate::arith::{classify_odd, classify_odd_big, sqrts_mod, ResidueClass, MAX_MODULUS};
use crate::error::{Error, Result};
use crate::exec::{self, Exec};

/// Membership in `C_3` via the prime factorization of `2c+1`.
pub fn c3_contains(c: u64) -> bool {
    let class = match c.checked_mul(2).and_then(|d| d.checked_add(1)) {
        Some(n) => classify_odd(n).expect("2c+1 is odd").class,
        None => {
            let n = BigUint::from(c) * 2u32 + 1u32;
            classify_odd_big(&n).expect("2c+1 is odd").class
        }
    };
    class != ResidueClass::Other
}

/// Membership in `C_3` via solvability of `u^2 = -c(c-1) (mod 2c+1)`.
pub fn c3_contains_by_residue(c: u64) -> Result<bool> {
    let n = modulus(c)?;
    Ok(!sqrts_mod(neg_c_c_minus_1(c, n), n)?.is_empty())
}

fn modulus(c: u64) -> Result<u64> {
    c.checked_mul(2)
        .and_then(|d| d.checked_add(1))
        .filter(|&n| n <= MAX_MODULUS)
        .ok_or_else(|| Error::ModulusTooLarge(format!("2*{c}+1")))
}

/// `-c(c-1) mod n` as a representative in `[0, n)`.
fn neg_c_c_minus_1(c: u64, n: u64) -> i64 {
    let prod = (c as u128 * c.saturating_sub(1) as u128) % n as u128;
    ((n as u128 - prod) % n as u128) as i64
}

/// The ascending triple for parameter `u`, if `u` satisfies the congruence.
pub fn parametrized_triple(c: u64, u: i64) -> Option<[BigInt; 3]> {
    let n = BigInt::from(2 * c as u128 + 1);
    let c_big = BigInt::from(c);
    let u = BigInt::from(u);
    let numer = &u * &u + &c_big * (&c_big - 1u32);
    let (v, rem) = numer.div_rem(&n);
    if !rem.is_zero() {
        return None;
    }
    debug_assert!((&v + &u).is_even(), "u and v share parity");
    let mut t = [(&v + &u) >> 1, (&v - &u) >> 1, c_big];
    t.sort();
    Some(t)
}

/// Games containing `c`, from every `u` in `u_range` satisfying the
/// congruence; `u` and `-u` give the same game.
pub fn games_with_coordinate(c: u64, u_range: RangeInclusive<i64>) -> Result<Vec<TernaryGame>> {
    if !c3_contains(c) {
        return Err(Error::NotInC3(c));
    }
    let mut out = Vec::new();
    for u in u_range {
        if let Some(t) = parametrized_triple(c, u) {
            out.push(TernaryGame::new(t)?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn check_max_coordinate_input(c: u64) -> Result<()> {
    if c <= 1 {
        return Err(Error::CoordinateTooSmall(c));
    }
    if !c3_contains(c) {
        return Err(Error::NotInC3(c));
    }
    Ok(())
}

/// Games whose largest coordinate is `c`, from the square roots of
/// `-c(c-1)` modulo `2c+1` reduced into the window `[0, c]`.
pub fn games_with_max_coordinate(c: u64) -> Result<Vec<TernaryGame>> {
    check_max_coordinate_input(c)?;
    let n = modulus(c)?;
    let mut out = Vec::new();
    for r in sqrts_mod(neg_c_c_minus_1(c, n), n)? {
        if r > c {
            continue; // -r is the window representative
        }
        let t = parametrized_triple(c, r as i64).expect("root of the congruence");
        debug_assert!(t[2] == BigInt::from(c) && t[1] < t[2]);
        out.push(TernaryGame::new(t)?);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// `2^(m-1)` with `m` the number of distinct prime factors of `2c+1`
/// other than 3.
pub fn count_max_coordinate(c: u64) -> Result<u64> {
    check_max_coordinate_input(c)?;
    let m = classify_odd(modulus(c)?)?.distinct_non3_prime_count;
    Ok(1 << (m - 1))
}

/// Number of distinct games with largest coordinate `c`, built from every
/// `u` in `[-c, c]` that satisfies the congruence.
pub fn count_max_coordinate_by_window(c: u64) -> Result<u64> {
    check_max_coordinate_input(c)?;
    let n = modulus(c)? as i128;
    let ci = c as i128;
    let mut games = BTreeSet::new();
    for u in -ci..=ci {
        let numer = u * u + ci * (ci - 1);
        if numer % n != 0 {
            continue;
        }
        let v = numer / n;
        let (a, b) = ((v - u) / 2, (v + u) / 2);
        if b <= ci {
            games.insert((a.min(b), a.max(b)));
        }
    }
    Ok(games.len() as u64)
}

/// Members of `C_3` up to and including `limit`, ascending.
pub fn c3_list(limit: u64, exec: Exec) -> Vec<u64> {
    exec::map_range(exec, 0, limit, |c| c3_contains(c).then_some(c))
        .into_iter()
        .flatten()
        .collect()
}

/// `|C_3 ∩ [0, limit]| / limit`; undefined at `limit = 0`.
pub fn c3_density(limit: u64, exec: Exec) -> Result<Ratio<u64>> {
    if limit == 0 {
        return Err(Error::ZeroLimit);
    }
    let count = exec::sum_range(exec, 0, limit, |c| c3_contains(c) as u64);
    Ok(Ratio::new(count, limit))
}
