//! Fair matching games: a bag holds balls of `n` colors, two are drawn,
//! and the player wins when they match. The fair bags are the
//! non-negative solutions of
//!
//! ```text
//! F_n(x) = s^2 - s - 4p = 0,   s = sum x_i,   p = sum_{i<j} x_i x_j
//! ```
//!
//! This crate solves, enumerates, counts and verifies that family:
//! solution trees under Vieta moves, their roots, the ternary binary tree
//! and its `(u, c)` parametrization, the coordinate set `C_3`, and the
//! correspondence with the Lorentzian quadric `w1^2 + w2^2 - w3^2 = -3`.

pub mod arith;
pub mod binary;
pub mod error;
pub mod exec;
pub mod games;
pub mod ternary;
pub mod tree;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Exec;
pub use games::{GameBag, Sign, SolutionVector};
