//! Invariant suites. Each suite checks a family of identities over a finite
//! range and stops at the first counterexample.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{
    classify_certified, classify_odd, eisenstein_sqrt_minus3, fibonacci, ResidueClass,
};
use crate::binary::{count_f2, count_f2_oracle};
use crate::error::Result;
use crate::exec::{self, Exec};
use crate::games::{eval_fair_poly, Sign, SolutionVector};
use crate::ternary::{
    c3_contains, c3_contains_by_residue, count_lorentz, count_max_coordinate,
    count_max_coordinate_by_window, count_s3_ellipsoid, inverse_ordered, lorentz_points,
    m_closed_form, m_sequence, to_lorentz_ordered,
};
use crate::tree::{self, EnumerationBound, Mod3Class, Node};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Mod4,
    Mod3,
    SumSign,
    Height,
    HeightNorm,
    Acyclic,
    Partition,
    Fixmax,
    Fibonacci,
    Factors,
    Lorentz,
    Binary,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Mod4,
        Suite::Mod3,
        Suite::SumSign,
        Suite::Height,
        Suite::HeightNorm,
        Suite::Acyclic,
        Suite::Partition,
        Suite::Fixmax,
        Suite::Fibonacci,
        Suite::Factors,
        Suite::Lorentz,
        Suite::Binary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Mod4 => "mod4",
            Suite::Mod3 => "mod3",
            Suite::SumSign => "sum-sign",
            Suite::Height => "height",
            Suite::HeightNorm => "height-norm",
            Suite::Acyclic => "acyclic",
            Suite::Partition => "partition",
            Suite::Fixmax => "fixmax",
            Suite::Fibonacci => "fibonacci",
            Suite::Factors => "factors",
            Suite::Lorentz => "lorentz",
            Suite::Binary => "binary",
        }
    }

    /// Whether the suite walks solution trees (bounded by height) rather
    /// than an integer range (bounded by `limit`).
    pub fn walks_trees(self) -> bool {
        matches!(
            self,
            Suite::Mod4
                | Suite::Mod3
                | Suite::SumSign
                | Suite::Height
                | Suite::HeightNorm
                | Suite::Acyclic
        )
    }

    /// Range used when no limit is given.
    pub fn default_limit(self) -> u64 {
        match self {
            Suite::Partition => 100_000,
            Suite::Fixmax => 3000,
            Suite::Fibonacci => 80,
            Suite::Factors => 100_000,
            Suite::Lorentz => 1000,
            Suite::Binary => 10_000,
            _ => 0,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
                format!("unknown suite {s:?}; expected one of {}", names.join(", "))
            })
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    /// Height bound for tree suites.
    pub height: u64,
    /// Numbers of colors walked by tree suites.
    pub colors: Vec<usize>,
    /// Roots come from extending every sorted `a` with entries in `[-radius, radius]`.
    pub radius: i64,
    /// Range for the arithmetic suites; `None` means [`Suite::default_limit`].
    pub limit: Option<u64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            height: 10_000,
            colors: vec![3, 4, 5],
            radius: 3,
            limit: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub subject: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.subject, self.detail)
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub suite: Suite,
    pub checked: u64,
    pub violation: Option<Violation>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

fn violation(subject: impl fmt::Display, detail: impl Into<String>) -> Violation {
    Violation {
        subject: subject.to_string(),
        detail: detail.into(),
    }
}

/// Sorted tuples of length `len` with entries in `[-radius, radius]`.
fn sorted_tuples(len: usize, radius: i64) -> Vec<Vec<BigInt>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t: Vec<i64>| {
                let lo = t.last().copied().unwrap_or(-radius);
                (lo..=radius).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|t| t.into_iter().map(BigInt::from).collect())
        .collect()
}

/// Distinct roots of `n`-color solutions found by extending tuples of
/// `n - 3` entries in `[-radius, radius]`.
pub fn scanned_roots(n: usize, radius: i64) -> Vec<SolutionVector> {
    assert!(n >= 3, "root scans need three free coordinates");
    let mut roots: Vec<SolutionVector> = sorted_tuples(n - 3, radius)
        .iter()
        .flat_map(|a| tree::find_roots_extending(a))
        .map(|r| r.root)
        .collect();
    roots.sort();
    roots.dedup();
    roots
}

/// Runs `check` on every vertex of height at most `height` below each root,
/// returning the number of vertices and the first failure by root order.
fn walk_roots<F>(
    roots: &[SolutionVector],
    height: u64,
    exec: Exec,
    check: F,
) -> (u64, Option<Violation>)
where
    F: Fn(&Node) -> Option<Violation> + Sync + Send,
{
    let bound = EnumerationBound::max_height(height);
    let checked = AtomicU64::new(0);
    for root in roots {
        let found = tree::try_for_each_vertex(root, &bound, exec, |node| {
            checked.fetch_add(1, Ordering::Relaxed);
            match check(node) {
                Some(v) => Err(v),
                None => Ok(()),
            }
        });
        if let Err(v) = found {
            return (checked.into_inner(), Some(v));
        }
    }
    (checked.into_inner(), None)
}

fn check_mod4(x: &SolutionVector) -> Option<Violation> {
    let r = x.sum().mod_floor(&BigInt::from(4));
    (r > BigInt::one()).then(|| violation(x, format!("sum is {r} mod 4")))
}

fn check_sum_sign(x: &SolutionVector) -> Option<Violation> {
    // computed here rather than through `sign()`, which asserts the property
    let sign = if (x.sum() + 1u32).is_positive() {
        Sign::Positive
    } else {
        Sign::Negative
    };
    (!x.pair_sums_share_sign(sign))
        .then(|| violation(x, format!("some 2 s_ij + 1 is not {}", sign.as_str())))
}

fn check_height_norm(x: &SolutionVector) -> Option<Violation> {
    let s = x.sum();
    let binom: BigInt = s * (s + 1u32) / 2u32;
    (&binom != x.norm_sq()).then(|| {
        violation(
            x,
            format!("C(s+1,2) = {binom} but norm^2 = {}", x.norm_sq()),
        )
    })
}

fn check_height(x: &SolutionVector) -> Option<Violation> {
    let h = x.height();
    let mut lower = 0;
    for k in 0..x.len() {
        let b = x.jump_value(k).expect("index in range");
        if (&x.coords()[k] + &b).is_even() {
            return Some(violation(x, format!("x_{k} + b_{k} is even")));
        }
        let (y, back) = x.neighbor_move(k).expect("index in range");
        if y.neighbor(back).ok().as_ref() != Some(x) {
            return Some(violation(x, format!("move {k} is not an involution")));
        }
        if y.sign() != x.sign() {
            return Some(violation(x, format!("move {k} changes sign")));
        }
        let hy = y.height();
        if hy == h {
            return Some(violation(x, format!("neighbor {y} has equal height")));
        }
        if hy < h {
            lower += 1;
        }
    }
    (lower > 1).then(|| violation(x, format!("{lower} neighbors have smaller height")))
}

fn tree_suite(suite: Suite, config: &SuiteConfig, exec: Exec) -> Result<Report> {
    let mut checked = 0;
    for &n in &config.colors {
        let (count, found) = match suite {
            Suite::Mod3 => {
                let root = SolutionVector::zero(n);
                walk_roots(&[root], config.height, exec, |node| {
                    (tree::mod3_class(&node.vector) == Mod3Class::Other)
                        .then(|| violation(&node.vector, "not 0 or e_j mod 3"))
                })
            }
            Suite::Acyclic => acyclic(&scanned_roots(n, config.radius), config.height),
            _ => {
                let check: fn(&SolutionVector) -> Option<Violation> = match suite {
                    Suite::Mod4 => check_mod4,
                    Suite::SumSign => check_sum_sign,
                    Suite::Height => check_height,
                    Suite::HeightNorm => check_height_norm,
                    _ => unreachable!("not a tree suite"),
                };
                walk_roots(
                    &scanned_roots(n, config.radius),
                    config.height,
                    exec,
                    |node| check(&node.vector),
                )
            }
        };
        checked += count;
        if found.is_some() {
            return Ok(Report {
                suite,
                checked,
                violation: found,
            });
        }
    }
    Ok(Report {
        suite,
        checked,
        violation: None,
    })
}

/// BFS from each root never meets a vertex twice, components are disjoint,
/// and each root is the unique height minimizer of what it reaches.
fn acyclic(roots: &[SolutionVector], height: u64) -> (u64, Option<Violation>) {
    let mut seen: HashSet<SolutionVector> = HashSet::new();
    let mut checked = 0;
    for root in roots {
        for node in tree::enumerate_component(root, EnumerationBound::max_height(height)) {
            checked += 1;
            if node.depth > 0 && node.vector.height() <= root.height() {
                return (
                    checked,
                    Some(violation(
                        &node.vector,
                        format!("height not above root {root}"),
                    )),
                );
            }
            if !seen.insert(node.vector.clone()) {
                return (checked, Some(violation(&node.vector, "reached twice")));
            }
            let parent = tree::parent(&node.vector);
            if (node.depth == 0) != parent.is_none() {
                return (
                    checked,
                    Some(violation(&node.vector, "root status disagrees with depth")),
                );
            }
        }
    }
    (checked, None)
}

fn first_failure<F>(exec: Exec, lo: u64, hi: u64, check: F) -> Option<Violation>
where
    F: Fn(u64) -> Option<Violation> + Sync + Send,
{
    exec::map_range(exec, lo, hi, check)
        .into_iter()
        .flatten()
        .next()
}

fn range_suite(suite: Suite, limit: u64, exec: Exec) -> Result<Report> {
    let (checked, found) = match suite {
        Suite::Partition => (
            limit + 1,
            first_failure(exec, 0, limit, |c| match c3_contains_by_residue(c) {
                Ok(r) if r == c3_contains(c) => None,
                Ok(r) => Some(violation(
                    c,
                    format!("residue test says {r}, classification disagrees"),
                )),
                Err(e) => Some(violation(c, e.to_string())),
            }),
        ),
        Suite::Fixmax => (
            limit.saturating_sub(1),
            first_failure(exec, 2, limit, |c| {
                if !c3_contains(c) {
                    return None;
                }
                let formula = count_max_coordinate(c).ok()?;
                let direct = count_max_coordinate_by_window(c).ok()?;
                (formula != direct)
                    .then(|| violation(c, format!("2^(m-1) = {formula}, window count {direct}")))
            }),
        ),
        Suite::Fibonacci => (
            limit,
            first_failure(exec, 1, limit, |k| {
                let (a, b) = (m_sequence(k), m_closed_form(k));
                (a != b).then(|| violation(k, format!("tree gives {a}, closed form {b}")))
            }),
        ),
        Suite::Factors => (
            limit + 1,
            first_failure(exec, 0, limit, |m| {
                let n = m * m + m + 1;
                match classify_odd(n) {
                    Ok(c) if c.class != ResidueClass::Other => None,
                    Ok(_) => Some(violation(m, format!("{n} has class other"))),
                    Err(e) => Some(violation(m, e.to_string())),
                }
            }),
        ),
        Suite::Lorentz => {
            let counts = first_failure(exec, 0, limit, |k| {
                let (s3, w) = (
                    count_s3_ellipsoid(k, Exec::Sequential),
                    count_lorentz(k, Exec::Sequential),
                );
                (2 * s3 != w)
                    .then(|| violation(k, format!("{s3} solutions but {w} lattice points")))
            });
            let round_trip = || {
                lorentz_points(limit.min(300))
                    .into_iter()
                    .filter(|w| w.is_representative())
                    .find_map(|w| {
                        if let Some(why) = w.structural_failure() {
                            return Some(violation(format!("{:?}", w.coords()), why));
                        }
                        let x = match inverse_ordered(&w) {
                            Ok(x) => x,
                            Err(e) => {
                                return Some(violation(format!("{:?}", w.coords()), e.to_string()))
                            }
                        };
                        let fair = eval_fair_poly(&x).is_ok_and(|f| f.is_zero());
                        let back = to_lorentz_ordered([&x[0], &x[1], &x[2]]);
                        (!fair || back != w).then(|| {
                            violation(
                                format!("{:?}", w.coords()),
                                format!("preimage {x:?} does not map back"),
                            )
                        })
                    })
            };
            (limit + 1, counts.or_else(round_trip))
        }
        Suite::Binary => (
            limit + 1,
            first_failure(exec, 0, limit, |k| {
                let (a, b) = (count_f2(k), BigUint::from(count_f2_oracle(k)));
                (a != b).then(|| violation(k, format!("closed form {a}, oracle {b}")))
            }),
        ),
        _ => unreachable!("not a range suite"),
    };
    Ok(Report {
        suite,
        checked,
        violation: found,
    })
}

/// Checks `2 f_m^2 - (-1)^m` for `0 <= m <= limit`: each value carries a
/// verified square root of -3, and any value that factors within
/// `rho_budget` iterations per split must classify consistently.
pub fn check_fibonacci_factors(
    limit: u64,
    rho_budget: u64,
    exec: Exec,
) -> (u64, u64, Option<Violation>) {
    let complete = AtomicU64::new(0);
    let found = first_failure(exec, 0, limit, |m| {
        let f = fibonacci(m);
        let prev = if m == 0 {
            BigUint::zero()
        } else {
            fibonacci(m - 1)
        };
        let n: BigUint = if m % 2 == 0 {
            ((&f * &f) << 1u32) - 1u32
        } else {
            ((&f * &f) << 1u32) + 1u32
        };
        let Some(root) = eisenstein_sqrt_minus3(&f, &prev) else {
            return Some(violation(m, "no square root of -3 from the Fibonacci pair"));
        };
        match classify_certified(&n, &root, rho_budget) {
            Ok(c) if c.class == ResidueClass::Other => {
                Some(violation(m, format!("{n} has class other")))
            }
            Ok(c) => {
                if c.factorization.is_some() {
                    complete.fetch_add(1, Ordering::Relaxed);
                }
                None
            }
            Err(e) => Some(violation(m, e.to_string())),
        }
    });
    (limit + 1, complete.into_inner(), found)
}

pub fn run(suite: Suite, config: &SuiteConfig, exec: Exec) -> Result<Report> {
    if suite.walks_trees() {
        tree_suite(suite, config, exec)
    } else {
        range_suite(suite, config.limit.unwrap_or(suite.default_limit()), exec)
    }
}

/// All vertex-level checks at once; used by property tests.
pub fn vertex_violation(x: &SolutionVector) -> Option<Violation> {
    check_mod4(x)
        .or_else(|| check_sum_sign(x))
        .or_else(|| check_height_norm(x))
        .or_else(|| check_height(x))
}
