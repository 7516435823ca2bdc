//! The graph on solutions: Vieta moves connect vectors differing in one
//! coordinate. Height strictly separates neighbors and at most one neighbor
//! is lower, so every component is a tree rooted at its unique lowest
//! vertex. Roots are found by factoring `J(a, m)` for each fixed tail `a`.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::factorize;
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::games::{Sign, SolutionVector};

fn tail_stats(a: &[BigInt]) -> (BigInt, BigInt) {
    a.iter()
        .fold((BigInt::zero(), BigInt::zero()), |(s, q), v| {
            (s + v, q + v * v)
        })
}

/// `s(a)^2 + s(a) + |a|^2`
fn tail_energy(a: &[BigInt]) -> BigInt {
    let (s, q) = tail_stats(a);
    &s * &s + &s + q
}

/// `J(a, m) = m^2 + m + 1 + 2 (s(a)^2 + s(a) + |a|^2)`; always odd and positive.
pub fn j_value(a: &[BigInt], m: u64) -> BigInt {
    let m = BigInt::from(m);
    &m * &m + &m + 1 + (tail_energy(a) << 1)
}

/// How a solution arises from an odd factorization `J(a, m) = (2b+1)(2c+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub a: Vec<BigInt>,
    pub m: u64,
    pub b: BigInt,
    pub c: BigInt,
    /// Which of the four solution forms (0..4) produced the vector.
    pub form: u8,
}

impl Witness {
    pub fn reproduce(&self) -> Result<SolutionVector> {
        let forms = solutions_from_factorization(&self.a, self.m, &self.b, &self.c)?;
        Ok(forms[self.form as usize].clone())
    }
}

/// The four solutions attached to `J(a, m) = (2b+1)(2c+1)` with `0 <= b <= c`:
///
/// ```text
/// ( b - S,       c - S,       b + c + 1 - S + m,     a)
/// ( b - S,       c - S,       b + c - S - m,         a)
/// (-(c+1) - S,  -(b+1) - S,  -(b + c + S + 1) + m,   a)
/// (-(c+1) - S,  -(b+1) - S,  -(b + c + S + 2) - m,   a)
/// ```
///
/// with `S = s(a)`.
pub fn solutions_from_factorization(
    a: &[BigInt],
    m: u64,
    b: &BigInt,
    c: &BigInt,
) -> Result<[SolutionVector; 4]> {
    let j = j_value(a, m);
    let odd = |v: &BigInt| (v << 1) + 1;
    if b.is_negative() || b > c || odd(b) * odd(c) != j {
        return Err(Error::FactorMismatch {
            b: b.to_string(),
            c: c.to_string(),
            j: j.to_string(),
        });
    }
    let s: BigInt = a.iter().sum();
    let m = BigInt::from(m);
    let build = |x: BigInt, y: BigInt, z: BigInt| {
        let mut v = Vec::with_capacity(a.len() + 3);
        v.extend([x, y, z]);
        v.extend_from_slice(a);
        SolutionVector::new(v)
    };
    let bc = b + c;
    Ok([
        build(b - &s, c - &s, &bc + 1u32 - &s + &m)?,
        build(b - &s, c - &s, &bc - &s - &m)?,
        build(-(c + 1u32) - &s, -(b + 1u32) - &s, -(&bc + &s + 1u32) + &m)?,
        build(-(c + 1u32) - &s, -(b + 1u32) - &s, -(&bc + &s + 2u32) - &m)?,
    ])
}

/// Every solution from every odd factor pair of `J(a, m)`, each with the
/// first witness that produces it.
pub fn solutions_with_witnesses(a: &[BigInt], m: u64) -> Vec<(SolutionVector, Witness)> {
    let j = j_value(a, m);
    let divisors = factorize(&j).expect("J is positive").divisors();
    let j_mag = j.magnitude();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for d in divisors {
        if &d * &d > *j_mag {
            break;
        }
        let e = j_mag / &d;
        let b = BigInt::from(d >> 1);
        let c = BigInt::from(e >> 1);
        let forms = solutions_from_factorization(a, m, &b, &c).expect("divisor pair of J");
        for (form, v) in forms.into_iter().enumerate() {
            if seen.insert(v.clone()) {
                let witness = Witness {
                    a: a.to_vec(),
                    m,
                    b: b.clone(),
                    c: c.clone(),
                    form: form as u8,
                };
                out.push((v, witness));
            }
        }
    }
    out
}

/// Union of the four-solution families over all odd factor pairs of `J(a, m)`.
pub fn all_solutions_for(a: &[BigInt], m: u64) -> BTreeSet<SolutionVector> {
    solutions_with_witnesses(a, m)
        .into_iter()
        .map(|(v, _)| v)
        .collect()
}

/// Largest `m >= 0` with `3m^2 + 3m <= 2 (s(a)^2 + s(a) + |a|^2)`.
pub fn b_bound(a: &[BigInt]) -> BigUint {
    let rhs = (tail_energy(a) << 1u32)
        .to_biguint()
        .expect("energy is non-negative");
    let fits = |m: &BigUint| BigUint::from(3u32) * m * (m + 1u32) <= rhs;
    // larger real root of 3x^2 + 3x - rhs is (sqrt(9 + 12 rhs) - 3) / 6
    let disc = (BigUint::from(12u32) * &rhs + 9u32).sqrt();
    let mut m = if disc >= BigUint::from(3u32) {
        (disc - 3u32) / 6u32
    } else {
        BigUint::zero()
    };
    while !fits(&m) {
        m -= 1u32;
    }
    while fits(&(&m + 1u32)) {
        m += 1u32;
    }
    m
}

/// A root together with the factorization that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootRecord {
    pub root: SolutionVector,
    pub witness: Witness,
}

/// The unique neighbor of smaller height, absent at a root.
pub fn parent(x: &SolutionVector) -> Option<SolutionVector> {
    let h = x.height();
    x.neighbors().into_iter().find(|v| v.height() < h)
}

/// Neighbors of greater height, deduplicated and sorted.
pub fn children(x: &SolutionVector) -> Vec<SolutionVector> {
    let h = x.height();
    let mut out: Vec<SolutionVector> = x
        .neighbors()
        .into_iter()
        .filter(|v| v.height() > h)
        .collect();
    out.sort();
    out.dedup();
    out
}

pub fn is_root(x: &SolutionVector) -> bool {
    let h = x.height();
    x.neighbors().iter().all(|v| v.height() > h)
}

/// Every root among the solutions of `J(a, m)` for `0 <= m <= b_bound(a)`.
pub fn find_roots_extending(a: &[BigInt]) -> Vec<RootRecord> {
    let bound = b_bound(a).to_u64().expect("tail too large for a root scan");
    let mut roots: Vec<RootRecord> = Vec::new();
    for m in 0..=bound {
        for (v, witness) in solutions_with_witnesses(a, m) {
            if is_root(&v) && !roots.iter().any(|r| r.root == v) {
                roots.push(RootRecord { root: v, witness });
            }
        }
    }
    roots.sort_by(|x, y| x.root.cmp(&y.root));
    roots
}

fn root_from(a: &[BigInt], first: BigInt, third: BigInt) -> SolutionVector {
    let mut v = vec![first.clone(), first, third];
    v.extend_from_slice(a);
    SolutionVector::new(v).expect("closed-form root is a solution")
}

/// `(s^2 + |a|^2, s^2 + |a|^2, -s, a)`, a positive root.
pub fn r_plus(a: &[BigInt]) -> SolutionVector {
    let (s, q) = tail_stats(a);
    root_from(a, &s * &s + q, -s)
}

/// `(-(s+1)^2 - |a|^2, -(s+1)^2 - |a|^2, -(s+1), a)`, a negative root.
pub fn r_minus(a: &[BigInt]) -> SolutionVector {
    let (s, q) = tail_stats(a);
    let s1 = s + 1u32;
    root_from(a, -(&s1 * &s1) - q, -s1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    MaxHeight,
    MaxNorm,
    MaxDepth,
}

/// Limit on a tree traversal. Height and norm only grow from parent to
/// child, so pruning at the bound is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationBound {
    pub kind: BoundKind,
    pub limit: BigUint,
}

impl EnumerationBound {
    pub fn max_height(limit: impl Into<BigUint>) -> Self {
        EnumerationBound {
            kind: BoundKind::MaxHeight,
            limit: limit.into(),
        }
    }

    /// Euclidean norm at most `limit`.
    pub fn max_norm(limit: impl Into<BigUint>) -> Self {
        EnumerationBound {
            kind: BoundKind::MaxNorm,
            limit: limit.into(),
        }
    }

    pub fn max_depth(limit: u32) -> Self {
        EnumerationBound {
            kind: BoundKind::MaxDepth,
            limit: limit.into(),
        }
    }

    pub fn admits(&self, v: &SolutionVector, depth: u32) -> bool {
        match self.kind {
            BoundKind::MaxHeight => v.height().magnitude() <= &self.limit,
            BoundKind::MaxNorm => v.norm_sq().magnitude() <= &(&self.limit * &self.limit),
            BoundKind::MaxDepth => BigUint::from(depth) <= self.limit,
        }
    }
}

/// A vertex emitted by a traversal, with its distance from the start.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub vector: SolutionVector,
    pub depth: u32,
}

/// Breadth-first traversal below a start vertex. Children are visited in
/// ascending lexicographic order, so output is deterministic. Started at
/// a non-root, this walks the subtree hanging below it.
pub struct ComponentIter {
    queue: VecDeque<Node>,
    bound: EnumerationBound,
}

impl Iterator for ComponentIter {
    type Item = Node;

    fn next(&mut self) -> Option<Node> {
        let node = self.queue.pop_front()?;
        for child in children(&node.vector) {
            if self.bound.admits(&child, node.depth + 1) {
                self.queue.push_back(Node {
                    vector: child,
                    depth: node.depth + 1,
                });
            }
        }
        Some(node)
    }
}

pub fn enumerate_component(root: &SolutionVector, bound: EnumerationBound) -> ComponentIter {
    let mut queue = VecDeque::new();
    if bound.admits(root, 0) {
        queue.push_back(Node {
            vector: root.clone(),
            depth: 0,
        });
    }
    ComponentIter { queue, bound }
}

fn admitted_children(node: &Node, bound: &EnumerationBound) -> Vec<Node> {
    children(&node.vector)
        .into_iter()
        .filter(|c| bound.admits(c, node.depth + 1))
        .map(|vector| Node {
            vector,
            depth: node.depth + 1,
        })
        .collect()
}

/// Same output as [`enumerate_component`], expanding each level in parallel.
pub fn collect_component(root: &SolutionVector, bound: &EnumerationBound, exec: Exec) -> Vec<Node> {
    let mut out = Vec::new();
    let mut level: Vec<Node> = enumerate_component(root, bound.clone()).take(1).collect();
    while !level.is_empty() {
        let next: Vec<Node> = exec::map_vec(exec, level.clone(), |n| admitted_children(&n, bound))
            .into_iter()
            .flatten()
            .collect();
        out.append(&mut level);
        level = next;
    }
    out
}

/// Frontier size at which traversal hands subtrees to workers.
const SPLIT_FRONTIER: usize = 256;

/// Visits every vertex within `bound` in unspecified order, stopping at the
/// first error. See [`walk_pruned`].
pub fn try_for_each_vertex<E, F>(
    root: &SolutionVector,
    bound: &EnumerationBound,
    exec: Exec,
    visit: F,
) -> std::result::Result<(), E>
where
    E: Send,
    F: Fn(&Node) -> std::result::Result<(), E> + Sync + Send,
{
    walk_pruned(root, exec, |v, depth| bound.admits(v, depth), visit)
}

/// Visits the vertices below `root` accepted by `admits`, which must be
/// closed under taking parents (a rejected vertex has no accepted
/// descendants). The top of the tree is expanded until the frontier is
/// wide enough; each frontier subtree is then walked depth-first as an
/// independent task.
pub fn walk_pruned<E, A, F>(
    root: &SolutionVector,
    exec: Exec,
    admits: A,
    visit: F,
) -> std::result::Result<(), E>
where
    E: Send,
    A: Fn(&SolutionVector, u32) -> bool + Sync + Send,
    F: Fn(&Node) -> std::result::Result<(), E> + Sync + Send,
{
    if !admits(root, 0) {
        return Ok(());
    }
    let expand = |node: &Node| -> Vec<Node> {
        children(&node.vector)
            .into_iter()
            .filter(|c| admits(c, node.depth + 1))
            .map(|vector| Node {
                vector,
                depth: node.depth + 1,
            })
            .collect()
    };
    let mut frontier = VecDeque::from([Node {
        vector: root.clone(),
        depth: 0,
    }]);
    while !frontier.is_empty() && frontier.len() < SPLIT_FRONTIER {
        let node = frontier.pop_front().expect("non-empty");
        visit(&node)?;
        frontier.extend(expand(&node));
    }
    exec::try_for_each(exec, frontier.into(), |start| {
        let mut stack = vec![start];
        while let Some(node) = stack.pop() {
            visit(&node)?;
            stack.extend(expand(&node));
        }
        Ok(())
    })
}

/// Number of vertices below `root` accepted by `admits` (closed under parents).
pub fn count_pruned<A>(root: &SolutionVector, exec: Exec, admits: A) -> u64
where
    A: Fn(&SolutionVector, u32) -> bool + Sync + Send,
{
    let count = std::sync::atomic::AtomicU64::new(0);
    walk_pruned::<(), _, _>(root, exec, admits, |_| {
        count.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        Ok(())
    })
    .expect("infallible visitor");
    count.into_inner()
}

/// The lowest non-negative vertex of a positive component, searching by
/// ascending height (ties broken lexicographically).
pub fn first_fair_in_component(root: &SolutionVector) -> Result<SolutionVector> {
    if root.sign() != Sign::Positive {
        return Err(Error::NotFair(root.to_string()));
    }
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((root.height(), root.clone())));
    while let Some(Reverse((_, v))) = heap.pop() {
        if v.is_fair() {
            return Ok(v);
        }
        for c in children(&v) {
            heap.push(Reverse((c.height(), c)));
        }
    }
    unreachable!("positive components are infinite")
}

/// Coordinate-wise reduction mod 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mod3Class {
    Zero,
    /// A permutation of `(0, ..., 0, 1)`.
    Unit,
    Other,
}

pub fn mod3_class(x: &SolutionVector) -> Mod3Class {
    let three = BigInt::from(3);
    let mut ones = 0;
    for v in x.coords() {
        match v.mod_floor(&three).to_u8() {
            Some(0) => {}
            Some(1) => ones += 1,
            _ => return Mod3Class::Other,
        }
    }
    match ones {
        0 => Mod3Class::Zero,
        1 => Mod3Class::Unit,
        _ => Mod3Class::Other,
    }
}

/// `-(x + 1)` coordinate-wise, which swaps the two components of `S_3`.
pub fn reflect(x: &SolutionVector) -> SolutionVector {
    SolutionVector::new(x.coords().iter().map(|v| -(v + BigInt::one())).collect())
        .expect("reflection preserves the equation")
}
