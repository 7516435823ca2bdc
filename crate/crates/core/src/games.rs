//! The fair-game equation, solution vectors, and the Vieta move.
//!
//! The sum `sum_{i != j} x_i x_j` in the defining equation is read over
//! unordered pairs, so `F_n(x) = s^2 - s - 4p` with `p = sum_{i<j} x_i x_j`.
//! This is the reading under which `binom(s, 2) = 2 sum binom(x_i, 2)` is
//! the fairness condition; it is equivalent to `binom(s+1, 2) = |x|^2`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::{self, Exec};

/// `s^2 - s - 4p`, computed as `2|x|^2 - s^2 - s`.
pub fn eval_fair_poly(x: &[BigInt]) -> Result<BigInt> {
    if x.len() < 2 {
        return Err(Error::TooFewCoordinates(x.len()));
    }
    let (s, q) = sum_and_norm_sq(x);
    Ok(fair_poly_from(&s, &q))
}

fn fair_poly_from(s: &BigInt, q: &BigInt) -> BigInt {
    (q << 1) - s * s - s
}

fn sum_and_norm_sq(x: &[BigInt]) -> (BigInt, BigInt) {
    x.iter()
        .fold((BigInt::zero(), BigInt::zero()), |(s, q), v| {
            (s + v, q + v * v)
        })
}

/// Non-negative solution with at least two coordinates.
pub fn is_fair_game(x: &[BigInt]) -> bool {
    x.len() >= 2
        && x.iter().all(|v| !v.is_negative())
        && eval_fair_poly(x).is_ok_and(|f| f.is_zero())
}

fn render(x: &[BigInt]) -> String {
    x.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Sign of a solution: the sign of `s + 1`, shared by every `2 s_ij + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Positive => "positive",
            Sign::Negative => "negative",
        }
    }
}

/// An integral solution of `F_n = 0`, stored ascending.
#[derive(Clone)]
pub struct SolutionVector {
    coords: Vec<BigInt>,
    sum: BigInt,
    norm_sq: BigInt,
}

impl SolutionVector {
    /// Sorts `coords` and checks the equation.
    pub fn new(mut coords: Vec<BigInt>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::TooFewCoordinates(coords.len()));
        }
        coords.sort();
        let (sum, norm_sq) = sum_and_norm_sq(&coords);
        if !fair_poly_from(&sum, &norm_sq).is_zero() {
            return Err(Error::NotASolution(render(&coords)));
        }
        Ok(SolutionVector {
            coords,
            sum,
            norm_sq,
        })
    }

    pub fn from_i64(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// The all-zero solution with `n` coordinates.
    pub fn zero(n: usize) -> Self {
        Self::new(vec![BigInt::zero(); n.max(2)]).expect("zero game is a solution")
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sum(&self) -> &BigInt {
        &self.sum
    }

    pub fn norm_sq(&self) -> &BigInt {
        &self.norm_sq
    }

    /// `|1 + s|`
    pub fn height(&self) -> BigInt {
        (&self.sum + 1u32).abs()
    }

    pub fn is_fair(&self) -> bool {
        !self.coords[0].is_negative()
    }

    pub fn sign(&self) -> Sign {
        let sign = if (&self.sum + 1u32).is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        };
        debug_assert!(self.pair_sums_share_sign(sign));
        sign
    }

    /// Whether every `2 s_ij + 1` (sum with coordinates i and j removed)
    /// has the given sign.
    pub fn pair_sums_share_sign(&self, sign: Sign) -> bool {
        let n = self.coords.len();
        if n < 3 {
            return true;
        }
        for i in 0..n {
            for j in i + 1..n {
                let v: BigInt = ((&self.sum - &self.coords[i] - &self.coords[j]) << 1) + 1;
                let ok = match sign {
                    Sign::Positive => v.is_positive(),
                    Sign::Negative => v.is_negative(),
                };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    /// The other root of the quadratic in coordinate `k`:
    /// `2 (s - x_k) + 1 - x_k`.
    pub fn jump_value(&self, k: usize) -> Result<BigInt> {
        let x = self.coords.get(k).ok_or(Error::IndexOutOfRange {
            index: k,
            len: self.coords.len(),
        })?;
        Ok(((&self.sum - x) << 1) + 1 - x)
    }

    /// Replaces coordinate `k` by its Vieta partner. Also returns the index
    /// at which the new coordinate sits after re-sorting.
    pub fn neighbor_move(&self, k: usize) -> Result<(SolutionVector, usize)> {
        let new = self.jump_value(k)?;
        let old = &self.coords[k];
        let sum = &self.sum - old + &new;
        let norm_sq = &self.norm_sq - old * old + &new * &new;
        let mut coords = Vec::with_capacity(self.coords.len());
        coords.extend_from_slice(&self.coords[..k]);
        coords.extend_from_slice(&self.coords[k + 1..]);
        let at = coords.partition_point(|v| *v < new);
        coords.insert(at, new);
        let out = SolutionVector {
            coords,
            sum,
            norm_sq,
        };
        debug_assert!(fair_poly_from(&out.sum, &out.norm_sq).is_zero());
        Ok((out, at))
    }

    pub fn neighbor(&self, k: usize) -> Result<SolutionVector> {
        self.neighbor_move(k).map(|(v, _)| v)
    }

    /// All `n` neighbor moves in index order (may repeat).
    pub fn neighbors(&self) -> Vec<SolutionVector> {
        (0..self.coords.len())
            .map(|k| self.neighbor(k).expect("index in range"))
            .collect()
    }
}

impl PartialEq for SolutionVector {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl Eq for SolutionVector {}

impl Hash for SolutionVector {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl PartialOrd for SolutionVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SolutionVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords.cmp(&other.coords)
    }
}

impl fmt::Debug for SolutionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", render(&self.coords))
    }
}

impl fmt::Display for SolutionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", render(&self.coords))
    }
}

pub fn neighbor(x: &SolutionVector, k: usize) -> Result<SolutionVector> {
    x.neighbor(k)
}

pub fn sign_of(x: &SolutionVector) -> Sign {
    x.sign()
}

/// `(x, 0)` and `(x, 1 + 2 sum x)` for a fair game `x`.
pub fn extend_game(x: &[BigInt]) -> Result<(SolutionVector, SolutionVector)> {
    if !is_fair_game(x) {
        return Err(Error::NotFair(render(x)));
    }
    let s: BigInt = x.iter().sum();
    let mut with_zero = x.to_vec();
    with_zero.push(BigInt::zero());
    let mut with_new = x.to_vec();
    with_new.push((s << 1) + 1);
    Ok((
        SolutionVector::new(with_zero)?,
        SolutionVector::new(with_new)?,
    ))
}

/// Ball counts per color; not necessarily fair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameBag {
    counts: Vec<BigUint>,
}

impl GameBag {
    pub fn new(counts: Vec<BigUint>) -> Self {
        GameBag { counts }
    }

    pub fn from_u64(counts: &[u64]) -> Self {
        GameBag::new(counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    /// Fails on a negative count.
    pub fn from_ints(counts: &[BigInt]) -> Result<Self> {
        counts
            .iter()
            .map(|c| c.to_biguint().ok_or_else(|| Error::Negative(c.to_string())))
            .collect::<Result<Vec<_>>>()
            .map(GameBag::new)
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    pub fn as_ints(&self) -> Vec<BigInt> {
        self.counts
            .iter()
            .map(|c| BigInt::from(c.clone()))
            .collect()
    }
}

fn choose2(n: &BigUint) -> BigUint {
    if n.is_zero() {
        return BigUint::zero();
    }
    (n * (n - 1u32)) >> 1
}

/// Probability that two balls drawn without replacement share a color.
pub fn win_probability(bag: &GameBag) -> Result<BigRational> {
    let total = bag.total();
    if total < BigUint::from(2u32) {
        return Err(Error::TrivialGame);
    }
    let wins: BigUint = bag.counts.iter().map(choose2).sum();
    Ok(BigRational::new(wins.into(), choose2(&total).into()))
}

pub fn is_half(p: &BigRational) -> bool {
    *p == BigRational::new(BigInt::one(), BigInt::from(2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Simulation {
    pub trials: u64,
    pub wins: u64,
}

impl Simulation {
    pub fn rate(&self) -> f64 {
        self.wins as f64 / self.trials as f64
    }
}

/// Trials per independently seeded batch.
const SIM_BATCH: u64 = 1 << 16;

/// Monte-Carlo estimate of the win rate. Batch `i` draws from a ChaCha8
/// stream `i` under `seed`, so the result does not depend on `exec`.
pub fn simulate_game(bag: &GameBag, trials: u64, seed: u64, exec: Exec) -> Result<Simulation> {
    let total = bag.total();
    if total < BigUint::from(2u32) {
        return Err(Error::TrivialGame);
    }
    let total = total
        .to_u64()
        .ok_or_else(|| Error::BagTooLarge(total.to_string()))?;
    if trials == 0 {
        return Err(Error::NotPositive("0".into()));
    }
    let cumulative: Vec<u64> = bag
        .counts
        .iter()
        .scan(0u64, |acc, c| {
            *acc += c.to_u64().expect("bounded by total");
            Some(*acc)
        })
        .collect();
    let color = |ball: u64| cumulative.partition_point(|&edge| edge <= ball);
    let batches = trials.div_ceil(SIM_BATCH);
    let wins = exec::sum_range(exec, 0, batches - 1, |batch| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(batch);
        let n = SIM_BATCH.min(trials - batch * SIM_BATCH);
        let mut wins = 0;
        for _ in 0..n {
            let first = rng.random_range(0..total);
            let mut second = rng.random_range(0..total - 1);
            if second >= first {
                second += 1;
            }
            if color(first) == color(second) {
                wins += 1;
            }
        }
        wins
    });
    Ok(Simulation { trials, wins })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn sv(v: &[i64]) -> SolutionVector {
        SolutionVector::from_i64(v).unwrap()
    }

    #[test]
    fn fair_poly_examples() {
        assert_eq!(eval_fair_poly(&ints(&[0, 1, 3])).unwrap(), BigInt::zero());
        assert_eq!(
            eval_fair_poly(&ints(&[0, 0, 0, 0])).unwrap(),
            BigInt::zero()
        );
        assert_eq!(eval_fair_poly(&ints(&[2, 3])).unwrap(), BigInt::from(-4));
        assert!(eval_fair_poly(&ints(&[4])).is_err());
    }

    #[test]
    fn pair_sum_reading_matches_binomial_identity() {
        // binom(s,2) - 2 sum binom(x_i,2) = F/2 for the unordered-pair reading
        for x in [[1i64, 3, 9], [2, 5, 7], [0, 4, 4]] {
            let s: i64 = x.iter().sum();
            let lhs = s * (s - 1) / 2 - 2 * x.iter().map(|v| v * (v - 1) / 2).sum::<i64>();
            let f = eval_fair_poly(&ints(&x)).unwrap();
            assert_eq!(BigInt::from(2 * lhs), -f);
        }
    }

    #[test]
    fn fairness_examples() {
        assert!(is_fair_game(&ints(&[1, 3, 9])));
        assert!(!is_fair_game(&ints(&[-1, 1, 2, 2])));
        assert!(SolutionVector::from_i64(&[-1, 1, 2, 2]).is_ok());
        assert!(is_fair_game(&ints(&[0, 0])));
        assert!(!is_fair_game(&ints(&[0])));
    }

    #[test]
    fn win_probability_examples() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(
            win_probability(&GameBag::from_u64(&[1, 3, 9])).unwrap(),
            half
        );
        assert_eq!(
            win_probability(&GameBag::from_u64(&[2, 2])).unwrap(),
            BigRational::new(1.into(), 3.into())
        );
        assert_eq!(
            win_probability(&GameBag::from_u64(&[0, 1, 3])).unwrap(),
            half
        );
        assert_eq!(
            win_probability(&GameBag::from_u64(&[1, 0])),
            Err(Error::TrivialGame)
        );
    }

    #[test]
    fn simulation_degenerate_bags() {
        let one_color = simulate_game(&GameBag::from_u64(&[5, 0]), 1000, 7, Exec::Sequential);
        assert_eq!(one_color.unwrap().rate(), 1.0);
        let pair = simulate_game(&GameBag::from_u64(&[1, 1]), 1000, 7, Exec::Sequential);
        assert_eq!(pair.unwrap().rate(), 0.0);
        assert!(simulate_game(&GameBag::from_u64(&[1]), 10, 0, Exec::Sequential).is_err());
    }

    #[test]
    fn simulation_is_reproducible_across_strategies() {
        let bag = GameBag::from_u64(&[1, 3, 9]);
        let a = simulate_game(&bag, 200_000, 42, Exec::Sequential).unwrap();
        let b = simulate_game(&bag, 200_000, 42, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        let c = simulate_game(&bag, 200_000, 43, Exec::Sequential).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn neighbor_examples() {
        let x = sv(&[0, 1, 3]);
        assert_eq!(x.neighbor(0).unwrap(), sv(&[1, 3, 9]));
        assert_eq!(x.neighbor(2).unwrap(), sv(&[0, 0, 1]));
        let zero = SolutionVector::zero(3);
        for k in 0..3 {
            assert_eq!(zero.neighbor(k).unwrap(), sv(&[0, 0, 1]));
        }
        assert!(matches!(x.neighbor(3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn extend_examples() {
        let (a, b) = extend_game(&ints(&[1, 3])).unwrap();
        assert_eq!((a, b), (sv(&[0, 1, 3]), sv(&[1, 3, 9])));
        let (a, b) = extend_game(&ints(&[0, 0])).unwrap();
        assert_eq!((a, b), (sv(&[0, 0, 0]), sv(&[0, 0, 1])));
        let (a, b) = extend_game(&ints(&[3, 6])).unwrap();
        assert_eq!((a, b), (sv(&[0, 3, 6]), sv(&[3, 6, 19])));
        assert!(extend_game(&ints(&[2, 3])).is_err());
    }

    #[test]
    fn sign_examples() {
        assert_eq!(sv(&[0, 1, 3]).sign(), Sign::Positive);
        assert_eq!(sv(&[-1, -1, -1, 0]).sign(), Sign::Negative);
        assert_eq!(sv(&[-1, 1, 2, 2]).sign(), Sign::Positive);
    }

    #[test]
    fn rejects_non_solutions() {
        assert!(matches!(
            SolutionVector::from_i64(&[2, 3]),
            Err(Error::NotASolution(_))
        ));
        assert!(SolutionVector::from_i64(&[1]).is_err());
    }
}
