//! Three colors. The non-trivial fair games form a full binary tree rooted
//! at `(0, 1, 3)`; this module addresses that tree, parametrizes games by
//! a fixed coordinate, characterizes the coordinate set `C_3`, and maps
//! solutions onto the Lorentzian quadric.

mod coords;
mod lorentz;

pub use coords::{
    c3_contains, c3_contains_by_residue, c3_density, c3_list, count_max_coordinate,
    count_max_coordinate_by_window, games_with_coordinate, games_with_max_coordinate,
    parametrized_triple,
};
pub use lorentz::{
    count_f3_ellipsoid, count_lorentz, count_s3_ellipsoid, from_lorentz, inverse_ordered,
    lorentz_norm_sq, lorentz_points, sum_of_two_squares_count, to_lorentz, to_lorentz_ordered,
    LorentzPoint,
};

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::arith::fibonacci;
use crate::error::{Error, Result};
use crate::games::SolutionVector;
use crate::tree;

/// A fair 3-color game, ascending, with its distance from `(0, 1, 3)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TernaryGame {
    triple: [BigInt; 3],
    depth: Option<u32>,
}

impl TernaryGame {
    /// Validates a fair triple and locates it in the tree by walking parents.
    pub fn new(coords: [BigInt; 3]) -> Result<Self> {
        let v = SolutionVector::new(coords.to_vec())?;
        Self::from_solution(&v)
    }

    pub fn from_u64(coords: [u64; 3]) -> Result<Self> {
        Self::new(coords.map(BigInt::from))
    }

    pub fn from_solution(v: &SolutionVector) -> Result<Self> {
        if v.len() != 3 || !v.is_fair() {
            return Err(Error::NotFair(v.to_string()));
        }
        let triple: [BigInt; 3] = v.coords().to_vec().try_into().expect("three coordinates");
        if is_trivial_triple(&triple) {
            return Ok(TernaryGame {
                triple,
                depth: None,
            });
        }
        let mut depth = 0;
        let mut cur = v.clone();
        while !is_tree_root(cur.coords()) {
            cur = tree::parent(&cur).expect("non-trivial games have parents");
            depth += 1;
        }
        Ok(TernaryGame {
            triple,
            depth: Some(depth),
        })
    }

    /// The only two trivial games.
    pub fn zero_game() -> Self {
        TernaryGame {
            triple: [0, 0, 0].map(BigInt::from),
            depth: None,
        }
    }

    /// `(0, 1, 3)`
    pub fn root() -> Self {
        TernaryGame {
            triple: [0, 1, 3].map(BigInt::from),
            depth: Some(0),
        }
    }

    pub fn triple(&self) -> &[BigInt; 3] {
        &self.triple
    }

    pub fn max_coordinate(&self) -> &BigInt {
        &self.triple[2]
    }

    /// Distance from `(0, 1, 3)`; `None` for the trivial games.
    pub fn depth(&self) -> Option<u32> {
        self.depth
    }

    pub fn is_trivial(&self) -> bool {
        self.depth.is_none()
    }

    pub fn norm_sq(&self) -> BigInt {
        self.triple.iter().map(|v| v * v).sum()
    }

    pub fn to_solution(&self) -> SolutionVector {
        SolutionVector::new(self.triple.to_vec()).expect("validated on construction")
    }

    fn child(&self, keep: usize, replace: usize) -> Result<TernaryGame> {
        let depth = self
            .depth
            .ok_or_else(|| Error::TrivialTernaryGame(self.to_string()))?;
        let kept = &self.triple[keep];
        let c = &self.triple[2];
        let new: BigInt = ((kept + c) << 1) + 1 - &self.triple[replace];
        Ok(TernaryGame {
            triple: [kept.clone(), c.clone(), new],
            depth: Some(depth + 1),
        })
    }

    /// `(a, c, 2(a + c) + 1 - b)`, the child of smaller norm.
    pub fn left_child(&self) -> Result<TernaryGame> {
        self.child(0, 1)
    }

    /// `(b, c, 2(b + c) + 1 - a)`, the child of larger norm.
    pub fn right_child(&self) -> Result<TernaryGame> {
        self.child(1, 0)
    }

    /// `None` at `(0, 1, 3)`.
    pub fn tree_parent(&self) -> Result<Option<TernaryGame>> {
        let depth = self
            .depth
            .ok_or_else(|| Error::TrivialTernaryGame(self.to_string()))?;
        if depth == 0 {
            return Ok(None);
        }
        let [a, b, c] = &self.triple;
        let mut triple = [a.clone(), b.clone(), ((a + b) << 1) + 1 - c];
        triple.sort();
        Ok(Some(TernaryGame {
            triple,
            depth: Some(depth - 1),
        }))
    }

    /// Path from `(0, 1, 3)` as a string of `L`/`R` moves.
    pub fn address(&self) -> Result<String> {
        let mut moves = Vec::new();
        let mut cur = self.clone();
        while let Some(up) = cur.tree_parent()? {
            let left = up.left_child()?;
            moves.push(if left == cur { 'L' } else { 'R' });
            cur = up;
        }
        Ok(moves.into_iter().rev().collect())
    }

    /// Inverse of [`TernaryGame::address`]; any character other than `L`
    /// or `R` is rejected.
    pub fn from_address(path: &str) -> Option<TernaryGame> {
        let mut cur = TernaryGame::root();
        for step in path.chars() {
            cur = match step {
                'L' => cur.left_child().ok()?,
                'R' => cur.right_child().ok()?,
                _ => return None,
            };
        }
        Some(cur)
    }
}

fn is_trivial_triple(t: &[BigInt; 3]) -> bool {
    t[0].is_zero() && t[1].is_zero() && (t[2].is_zero() || t[2] == BigInt::from(1))
}

fn is_tree_root(c: &[BigInt]) -> bool {
    c[0].is_zero() && c[1] == BigInt::from(1) && c[2] == BigInt::from(3)
}

impl fmt::Debug for TernaryGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.triple;
        write!(f, "({a},{b},{c})")
    }
}

impl fmt::Display for TernaryGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The depth-`k` node of least norm: `(0, C(k+2, 2), C(k+3, 2))`.
pub fn min_norm_node(k: u32) -> TernaryGame {
    let t = |m: u64| BigInt::from(crate::arith::triangular(m));
    TernaryGame {
        triple: [BigInt::zero(), t(k as u64 + 1), t(k as u64 + 2)],
        depth: Some(k),
    }
}

/// The depth-`k` node of greatest norm: `(m_k, m_{k+1}, m_{k+2})`.
pub fn max_norm_node(k: u32) -> TernaryGame {
    let m = m_sequence_prefix(k as usize + 3);
    TernaryGame {
        triple: [k, k + 1, k + 2].map(|i| BigInt::from(m[i as usize].clone())),
        depth: Some(k),
    }
}

fn m_sequence_prefix(len: usize) -> Vec<BigUint> {
    let mut m: Vec<BigInt> = vec![0.into(), 1.into(), 3.into()];
    while m.len() < len {
        let i = m.len() - 3;
        let next = ((&m[i + 1] + &m[i + 2]) << 1) + 1 - &m[i];
        m.push(next);
    }
    m.truncate(len.max(1));
    m.into_iter()
        .map(|v| v.to_biguint().expect("non-negative"))
        .collect()
}

/// `m_0, m_1, m_2 = 0, 1, 3` and `m_{i+3} = 2(m_{i+1} + m_{i+2}) + 1 - m_i`.
pub fn m_sequence(k: u64) -> BigUint {
    m_sequence_prefix(k as usize + 1).swap_remove(k as usize)
}

/// `f_k^2` for odd `k`, `f_k^2 - 1` for even `k`.
pub fn m_closed_form(k: u64) -> BigUint {
    let f = fibonacci(k);
    let sq = &f * &f;
    if k.is_multiple_of(2) {
        sq - 1u32
    } else {
        sq
    }
}
