//! Two colors. The fair games are the pairs of consecutive triangular
//! numbers `(m(m-1)/2, m(m+1)/2)`, so counts have closed forms through
//! `r(k) = (-1 + sqrt(1 + 8k^2)) / 2`.

use num_bigint::{BigInt, BigUint};

use crate::arith::{isqrt, triangular};
use crate::games::SolutionVector;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryGame {
    pub m: u64,
    pub pair: (BigUint, BigUint),
}

impl BinaryGame {
    pub fn to_solution(&self) -> SolutionVector {
        SolutionVector::new(vec![
            BigInt::from(self.pair.0.clone()),
            BigInt::from(self.pair.1.clone()),
        ])
        .expect("consecutive triangular numbers are fair")
    }

    /// `m^2 (m^2 + 1) / 2`.
    pub fn norm_sq(&self) -> BigUint {
        &self.pair.0 * &self.pair.0 + &self.pair.1 * &self.pair.1
    }
}

pub fn binary_game(m: u64) -> BinaryGame {
    let lower = if m == 0 {
        BigUint::ZERO
    } else {
        triangular(m - 1)
    };
    BinaryGame {
        m,
        pair: (lower, triangular(m)),
    }
}

/// `[r(x)]` for `r(x) = (-1 + sqrt(1 + 8x)) / 2`: the largest `t` with
/// `t(t+1)/2 <= x`.
fn floor_r_of_square(x: &BigUint) -> BigUint {
    (isqrt(&(x * 8u32 + 1u32)) - 1u32) >> 1
}

/// `|F_2(k)| = [sqrt(r(k))] + 1`, the number of fair two-color games with
/// norm at most `k`.
pub fn count_f2(k: u64) -> BigUint {
    let k = BigUint::from(k);
    isqrt(&floor_r_of_square(&(&k * &k))) + 1u32
}

/// Enumerates `m` until the norm exceeds `k`.
pub fn count_f2_oracle(k: u64) -> u64 {
    let k2 = BigUint::from(k) * k;
    (0..)
        .take_while(|&m| binary_game(m).norm_sq() <= k2)
        .count() as u64
}

/// `|C_2(k)| = [r(sqrt k)]`, the number of positive triangular numbers at
/// most `k`.
pub fn count_c2(k: u64) -> BigUint {
    floor_r_of_square(&BigUint::from(k))
}

/// Triangular numbers at most `k`, counting 0. Exceeds [`count_c2`] by one.
pub fn count_c2_oracle(k: u64) -> u64 {
    let k = BigUint::from(k);
    (0..).take_while(|&m| triangular(m) <= k).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::is_fair_game;

    #[test]
    fn games() {
        let pair = |m| {
            let g = binary_game(m);
            (g.pair.0.to_string(), g.pair.1.to_string())
        };
        assert_eq!(pair(0), ("0".into(), "0".into()));
        assert_eq!(pair(1), ("0".into(), "1".into()));
        assert_eq!(pair(3), ("3".into(), "6".into()));
        for m in 0..200 {
            let g = binary_game(m);
            assert!(is_fair_game(g.to_solution().coords()));
            let m2 = BigUint::from(m * m);
            assert_eq!(g.norm_sq(), &m2 * (&m2 + 1u32) / 2u32);
        }
    }

    #[test]
    fn consecutive_games_are_adjacent() {
        for m in 1..100 {
            let a = binary_game(m).to_solution();
            let b = binary_game(m + 1).to_solution();
            assert!(a.neighbors().contains(&b), "m = {m}");
        }
    }

    #[test]
    fn counts() {
        assert_eq!(count_f2(1), BigUint::from(2u32));
        assert_eq!(count_f2(4), BigUint::from(3u32));
        assert_eq!(count_c2(10), BigUint::from(4u32));
        assert_eq!(count_c2_oracle(10), 5);
        assert_eq!(count_f2(0), BigUint::from(1u32));
        for k in 0..2000 {
            assert_eq!(count_f2(k), BigUint::from(count_f2_oracle(k)), "k = {k}");
            assert_eq!(
                count_c2(k) + 1u32,
                BigUint::from(count_c2_oracle(k)),
                "k = {k}"
            );
        }
    }
}
