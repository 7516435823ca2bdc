//! The affine map onto `W = { w : w1^2 + w2^2 - w3^2 = -3 }`:
//!
//! ```text
//! w1 = 2(x2 - x3),  w2 = 2(x1 - x2 - x3) - 1,  w3 = 2(x2 + x3 + 1)
//! ```
//!
//! Its images are exactly the points of `W` with odd `w2`, one per class of
//! `W` modulo swapping `w1, w2`. The map is a bijection from *ordered*
//! solution triples onto those representatives; ascending fair triples land
//! in `w1, w2 <= 0 <= w3`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::{factorize_u64, isqrt_u64};
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::games::SolutionVector;
use crate::tree;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LorentzPoint {
    w: [BigInt; 3],
}

fn render(w: &[BigInt; 3]) -> String {
    format!("{},{},{}", w[0], w[1], w[2])
}

impl LorentzPoint {
    pub fn new(w: [BigInt; 3]) -> Result<Self> {
        let [a, b, c] = &w;
        if a * a + b * b - c * c != BigInt::from(-3) {
            return Err(Error::NotLorentzian(render(&w)));
        }
        Ok(LorentzPoint { w })
    }

    pub fn from_i64(w: [i64; 3]) -> Result<Self> {
        Self::new(w.map(BigInt::from))
    }

    pub fn coords(&self) -> &[BigInt; 3] {
        &self.w
    }

    /// The other member of the `≈`-class.
    pub fn swapped(&self) -> LorentzPoint {
        let [a, b, c] = self.w.clone();
        LorentzPoint { w: [b, a, c] }
    }

    pub fn is_representative(&self) -> bool {
        self.w[1].is_odd()
    }

    pub fn norm_sq(&self) -> BigInt {
        self.w.iter().map(|v| v * v).sum()
    }

    /// The first of the structural facts about points of `W` that fails:
    /// `|w3|` dominates, exactly one of `w1, w2` is odd, `w1 != w2`, and
    /// for odd `w2`, `w1 + w3 = w1 - w3 = 2 (mod 4)`.
    pub fn structural_failure(&self) -> Option<&'static str> {
        let [w1, w2, w3] = &self.w;
        if w3.abs() <= w1.abs() || w3.abs() <= w2.abs() {
            return Some("|w3| does not dominate");
        }
        if w3.is_odd() || w1.is_odd() == w2.is_odd() {
            return Some("not exactly one odd coordinate among w1, w2");
        }
        if w1 == w2 {
            return Some("w1 = w2");
        }
        let four = BigInt::from(4);
        let two = BigInt::from(2);
        if w2.is_odd() && ((w1 + w3).mod_floor(&four) != two || (w1 - w3).mod_floor(&four) != two) {
            return Some("w1 +- w3 not 2 mod 4");
        }
        None
    }
}

/// Image of an ascending triple.
pub fn to_lorentz(x: &SolutionVector) -> Result<LorentzPoint> {
    match x.coords() {
        [a, b, c] => Ok(to_lorentz_ordered([a, b, c])),
        other => Err(Error::NotASolution(format!("{} coordinates", other.len()))),
    }
}

/// Image of a triple in the given order.
pub fn to_lorentz_ordered([x1, x2, x3]: [&BigInt; 3]) -> LorentzPoint {
    let w1 = (x2 - x3) << 1;
    let w2 = ((x1 - x2 - x3) << 1) - 1;
    let w3 = (x2 + x3 + 1) << 1;
    LorentzPoint { w: [w1, w2, w3] }
}

/// Ordered preimage of a class representative (odd `w2`):
/// `x1 = (w2 + w3 - 1)/2, x2 = (w1 + w3 - 2)/4, x3 = (w3 - w1 - 2)/4`.
pub fn inverse_ordered(w: &LorentzPoint) -> Result<[BigInt; 3]> {
    let [w1, w2, w3] = &w.w;
    if w2.is_even() {
        return Err(Error::EvenSecondCoordinate(render(&w.w)));
    }
    let exact = |num: BigInt, den: i64| {
        let (q, r) = num.div_rem(&BigInt::from(den));
        r.is_zero()
            .then_some(q)
            .ok_or_else(|| Error::NotLorentzian(render(&w.w)))
    };
    Ok([
        exact(w2 + w3 - 1, 2)?,
        exact(w1 + w3 - 2, 4)?,
        exact(w3 - w1 - 2, 4)?,
    ])
}

/// The solution class of a representative, as an ascending vector.
pub fn from_lorentz(w: &LorentzPoint) -> Result<SolutionVector> {
    SolutionVector::new(inverse_ordered(w)?.to_vec())
}

pub fn lorentz_norm_sq(w: &LorentzPoint) -> BigInt {
    w.norm_sq()
}

/// Ordered representations `n = a^2 + b^2` over all integers.
pub fn sum_of_two_squares_count(n: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    let f = factorize_u64(n).expect("n > 0");
    let mut count = 4;
    for (p, e) in f.to_u64_factors().expect("u64 factors") {
        match p % 4 {
            1 => count *= e as u64 + 1,
            3 if e % 2 == 1 => return 0,
            _ => {}
        }
    }
    count
}

/// Largest `|w3|` with `2 w3^2 - 3 <= k^2`; on `W` the norm is `2 w3^2 - 3`.
fn w3_limit(k: u64) -> u64 {
    let k2 = k as u128 * k as u128;
    isqrt_u64(((k2 + 3) / 2).try_into().expect("k below 2^32"))
}

/// `|W(k)|`: points of `W` with Euclidean norm at most `k`, counted through
/// the two-squares formula for each `w3`.
pub fn count_lorentz(k: u64, exec: Exec) -> u64 {
    let limit = w3_limit(k);
    let positive = exec::sum_range(exec, 1, limit, |w3| {
        let n = w3 * w3;
        if n < 3 {
            0
        } else {
            sum_of_two_squares_count(n - 3)
        }
    });
    2 * positive
}

/// Points of `W(k)` by direct scan, ordered by `|w3|`, then `w3`, then `w1`, `w2`.
pub fn lorentz_points(k: u64) -> Vec<LorentzPoint> {
    let limit = w3_limit(k) as i64;
    let mut out = Vec::new();
    for abs_w3 in 0..=limit {
        let signs = if abs_w3 == 0 {
            vec![0]
        } else {
            vec![-abs_w3, abs_w3]
        };
        for w3 in signs {
            let n = w3 * w3 - 3;
            if n < 0 {
                continue;
            }
            let r = isqrt_u64(n as u64) as i64;
            for w1 in -r..=r {
                let rest = n - w1 * w1;
                let w2 = isqrt_u64(rest as u64) as i64;
                if w2 * w2 != rest {
                    continue;
                }
                let w2s = if w2 == 0 { vec![0] } else { vec![-w2, w2] };
                for w2 in w2s {
                    out.push(LorentzPoint {
                        w: [w1, w2, w3].map(BigInt::from),
                    });
                }
            }
        }
    }
    out
}

/// Ordered triples in a solution class whose image has norm at most `k`.
fn ordered_within(v: &SolutionVector, k2: &BigInt) -> u64 {
    let c = v.coords();
    let s = v.sum();
    let mut count = 0;
    for i in 0..3 {
        if i > 0 && c[i] == c[i - 1] {
            continue;
        }
        let w3: BigInt = (s - &c[i] + 1) << 1;
        if ((&w3 * &w3) << 1) - 3 <= *k2 {
            let rest: Vec<&BigInt> = (0..3).filter(|&j| j != i).map(|j| &c[j]).collect();
            count += if rest[0] == rest[1] { 1 } else { 2 };
        }
    }
    count
}

/// Smallest image norm over the orderings of a class; it never decreases
/// from parent to child, which makes it a valid pruning key.
fn class_min_norm_sq(v: &SolutionVector) -> BigInt {
    let c = v.coords();
    (0..3)
        .map(|i| {
            let w3: BigInt = (v.sum() - &c[i] + 1) << 1;
            ((&w3 * &w3) << 1) - 3
        })
        .min()
        .expect("three coordinates")
}

fn count_ordered_solutions(roots: &[SolutionVector], k: u64, exec: Exec, fair_only: bool) -> u64 {
    let k2 = BigInt::from(k) * BigInt::from(k);
    let total = std::sync::atomic::AtomicU64::new(0);
    for root in roots {
        tree::walk_pruned::<(), _, _>(
            root,
            exec,
            |v, _| class_min_norm_sq(v) <= k2,
            |node| {
                let n = if fair_only {
                    signed_region_within(&node.vector, &k2)
                } else {
                    ordered_within(&node.vector, &k2)
                };
                total.fetch_add(n, std::sync::atomic::Ordering::Relaxed);
                Ok(())
            },
        )
        .expect("infallible visitor");
    }
    total.into_inner()
}

/// Ordered fair triples of a class whose image lies in `w1, w2 <= 0 <= w3`
/// with norm at most `k`.
fn signed_region_within(v: &SolutionVector, k2: &BigInt) -> u64 {
    let c = v.coords();
    let mut seen: Vec<[&BigInt; 3]> = Vec::new();
    let mut count = 0;
    for p in [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ] {
        let t = p.map(|i| &c[i]);
        if seen.contains(&t) {
            continue;
        }
        seen.push(t);
        let [w1, w2, w3] = to_lorentz_ordered(t).w;
        if !w1.is_positive()
            && !w2.is_positive()
            && !w3.is_negative()
            && ((&w3 * &w3) << 1) - 3 <= *k2
        {
            count += 1;
        }
    }
    count
}

/// Solutions inside the preimage of the radius-`k` ball, counted as
/// ordered triples (one per class of `W(k)`), by walking both trees of `S_3`.
pub fn count_s3_ellipsoid(k: u64, exec: Exec) -> u64 {
    let roots = [
        SolutionVector::zero(3),
        tree::reflect(&SolutionVector::zero(3)),
    ];
    count_ordered_solutions(&roots, k, exec, false)
}

/// As [`count_s3_ellipsoid`], restricted to classes in
/// `w1, w2 <= 0 <= w3`, which all come from fair games.
pub fn count_f3_ellipsoid(k: u64, exec: Exec) -> u64 {
    count_ordered_solutions(&[SolutionVector::zero(3)], k, exec, true)
}
