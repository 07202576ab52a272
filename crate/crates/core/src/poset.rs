//! Finite strict partial orders on elements `0..n`.
//!
//! The relation is stored as a dense n x n bit matrix (row x holds the
//! strict up-set of x), so comparability queries are O(1) and the
//! closure/reduction passes are word-parallel. All target workloads live
//! well below a few thousand elements; memory grows quadratically.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt;
use std::sync::OnceLock;
use thiserror::Error;

/// Default ceiling on element counts accepted by constructors. Guards
/// against accidental lexicographic-power blowup; override with the
/// `ORDEX_SIZE_CAP` environment variable.
pub const DEFAULT_SIZE_CAP: usize = 1 << 20;

/// Active element-count ceiling (read once per process).
pub fn size_cap() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("ORDEX_SIZE_CAP")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .filter(|&c| c >= 1)
            .unwrap_or(DEFAULT_SIZE_CAP)
    })
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PosetError {
    #[error("element index {index} out of range for {n} elements")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("cover relations contain a cycle")]
    CycleDetected,
    #[error("requested {requested} elements, size cap is {cap}")]
    SizeCapExceeded { requested: u128, cap: usize },
    #[error("standard example requires m >= 2, got {0}")]
    StandardExampleTooSmall(usize),
    #[error("lexicographic power requires k >= 1")]
    ZeroPower,
    #[error("density {0} outside [0, 1]")]
    InvalidDensity(f64),
    #[error("subset member {index} repeated or out of range for {n} elements")]
    BadSubsetMember { index: usize, n: usize },
}

/// Strictly increasing list of element indices of some ambient poset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Subset {
    members: Vec<usize>,
}

impl Subset {
    /// Sorts and deduplicates.
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Subset { members }
    }

    pub fn empty() -> Self {
        Subset { members: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Subset {
            members: (0..n).collect(),
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn check_in_range(&self, n: usize) -> Result<(), PosetError> {
        if let Some(&bad) = self.members.iter().find(|&&m| m >= n) {
            return Err(PosetError::BadSubsetMember { index: bad, n });
        }
        Ok(())
    }
}

impl From<Vec<usize>> for Subset {
    fn from(v: Vec<usize>) -> Self {
        Subset::new(v)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    words: usize,
    /// Row-major bit matrix; bit (x, y) set iff x < y.
    lt: Vec<u64>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("n", &self.n)
            .field("relations", &self.relation_count())
            .finish()
    }
}

fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

fn check_cap(requested: u128) -> Result<(), PosetError> {
    let cap = size_cap();
    if requested > cap as u128 {
        return Err(PosetError::SizeCapExceeded { requested, cap });
    }
    Ok(())
}

impl Poset {
    fn blank(n: usize) -> Poset {
        let words = words_for(n);
        Poset {
            n,
            words,
            lt: vec![0; n * words],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn is_lt(&self, x: usize, y: usize) -> bool {
        debug_assert!(x < self.n && y < self.n);
        (self.lt[x * self.words + y / 64] >> (y % 64)) & 1 == 1
    }

    #[inline]
    pub fn is_comparable(&self, x: usize, y: usize) -> bool {
        self.is_lt(x, y) || self.is_lt(y, x)
    }

    #[inline]
    pub fn is_incomparable(&self, x: usize, y: usize) -> bool {
        x != y && !self.is_comparable(x, y)
    }

    #[inline]
    fn set_lt(&mut self, x: usize, y: usize) {
        self.lt[x * self.words + y / 64] |= 1u64 << (y % 64);
    }

    pub(crate) fn lt_row(&self, x: usize) -> &[u64] {
        &self.lt[x * self.words..(x + 1) * self.words]
    }

    /// Elements strictly above x, ascending.
    pub fn above(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&y| self.is_lt(x, y))
    }

    /// Elements strictly below x, ascending.
    pub fn below(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&y| self.is_lt(y, x))
    }

    pub fn relation_count(&self) -> usize {
        self.lt.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of elements incomparable to x.
    pub fn incomparability_degree(&self, x: usize) -> usize {
        self.n - 1 - self.above(x).count() - self.below(x).count()
    }

    /// In-place Warshall closure; returns an error if the relation
    /// reaches the diagonal (i.e. the input digraph had a cycle).
    fn close_transitively(&mut self) -> Result<(), PosetError> {
        let words = self.words;
        let mut scratch = vec![0u64; words];
        for k in 0..self.n {
            scratch.copy_from_slice(self.lt_row(k));
            for x in 0..self.n {
                if self.is_lt(x, k) {
                    let row = &mut self.lt[x * words..(x + 1) * words];
                    for (a, b) in row.iter_mut().zip(&scratch) {
                        *a |= b;
                    }
                }
            }
        }
        for x in 0..self.n {
            if self.is_lt(x, x) {
                return Err(PosetError::CycleDetected);
            }
        }
        Ok(())
    }

    /// Full strict-order axiom check. O(n^3 / 64); test and debug aid.
    pub fn verify_invariants(&self) -> Result<(), String> {
        for x in 0..self.n {
            if self.is_lt(x, x) {
                return Err(format!("reflexive: {x} < {x}"));
            }
        }
        for x in 0..self.n {
            for y in 0..self.n {
                if self.is_lt(x, y) && self.is_lt(y, x) {
                    return Err(format!("antisymmetry violated on ({x}, {y})"));
                }
            }
        }
        for x in 0..self.n {
            for y in self.above(x).collect::<Vec<_>>() {
                // up(y) must be contained in up(x)
                let rx = self.lt_row(x);
                let ry = self.lt_row(y);
                if ry.iter().zip(rx).any(|(b, a)| b & !a != 0) {
                    return Err(format!("transitivity violated above ({x}, {y})"));
                }
            }
        }
        Ok(())
    }

    // ---- constructors ----------------------------------------------------

    /// Total order 0 < 1 < ... < k-1.
    pub fn chain(k: usize) -> Poset {
        assert!(k <= size_cap(), "chain({k}) exceeds the size cap");
        let mut p = Poset::blank(k);
        for x in 0..k {
            for y in x + 1..k {
                p.set_lt(x, y);
            }
        }
        p
    }

    /// k pairwise incomparable elements.
    pub fn antichain(k: usize) -> Poset {
        assert!(k <= size_cap(), "antichain({k}) exceeds the size cap");
        Poset::blank(k)
    }

    /// Subsets of {0..k-1} ordered by strict containment. Element i is
    /// the subset with characteristic bits i, so 0 is the bottom and
    /// 2^k - 1 the top.
    pub fn boolean_lattice(k: u32) -> Result<Poset, PosetError> {
        if k >= 64 {
            return Err(PosetError::SizeCapExceeded {
                requested: u128::MAX,
                cap: size_cap(),
            });
        }
        let n = 1u128 << k;
        check_cap(n)?;
        let n = n as usize;
        let mut p = Poset::blank(n);
        for i in 0..n {
            for j in 0..n {
                if i != j && i & j == i {
                    p.set_lt(i, j);
                }
            }
        }
        Ok(p)
    }

    /// The standard example S_m on 2m elements: minimal elements
    /// a_1..a_m at indices 0..m-1, maximal elements b_1..b_m at indices
    /// m..2m-1, and a_i < b_j exactly when i != j.
    pub fn standard_example(m: usize) -> Result<Poset, PosetError> {
        if m < 2 {
            return Err(PosetError::StandardExampleTooSmall(m));
        }
        check_cap(2 * m as u128)?;
        let mut p = Poset::blank(2 * m);
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    p.set_lt(i, m + j);
                }
            }
        }
        Ok(p)
    }

    /// Arbitrary poset from a strict cover (or any acyclic) relation.
    pub fn from_cover_relations(
        n: usize,
        covers: &[(usize, usize)],
    ) -> Result<Poset, PosetError> {
        check_cap(n as u128)?;
        let mut p = Poset::blank(n);
        for &(i, j) in covers {
            for &e in &[i, j] {
                if e >= n {
                    return Err(PosetError::IndexOutOfRange { index: e, n });
                }
            }
            if i == j {
                return Err(PosetError::CycleDetected);
            }
            p.set_lt(i, j);
        }
        p.close_transitively()?;
        Ok(p)
    }

    /// Left block keeps its indices, right block is shifted by
    /// `self.n()`; no cross relations.
    pub fn disjoint_union(&self, other: &Poset) -> Result<Poset, PosetError> {
        check_cap(self.n as u128 + other.n as u128)?;
        let n = self.n + other.n;
        let mut p = Poset::blank(n);
        for x in 0..self.n {
            for y in self.above(x) {
                p.set_lt(x, y);
            }
        }
        for x in 0..other.n {
            for y in other.above(x) {
                p.set_lt(self.n + x, self.n + y);
            }
        }
        Ok(p)
    }

    /// Lexicographic product: element (p, q) is stored row-major at
    /// index `p * other.n() + q`, and (p, q) < (p', q') iff p < p' in
    /// `self`, or p = p' and q < q' in `other`.
    pub fn lex_product(&self, other: &Poset) -> Result<Poset, PosetError> {
        check_cap(self.n as u128 * other.n as u128)?;
        let n = self.n * other.n;
        let mut r = Poset::blank(n);
        let nq = other.n;
        for p in 0..self.n {
            for q in 0..nq {
                let row = p * nq + q;
                for p2 in 0..self.n {
                    if self.is_lt(p, p2) {
                        for q2 in 0..nq {
                            r.set_lt(row, p2 * nq + q2);
                        }
                    }
                }
                for q2 in 0..nq {
                    if other.is_lt(q, q2) {
                        r.set_lt(row, p * nq + q2);
                    }
                }
            }
        }
        Ok(r)
    }

    /// Left-associated lexicographic power P^k with row-major tuple
    /// indexing: the tuple (t_0, .., t_{k-1}) sits at index
    /// sum t_i * n^(k-1-i), first coordinate most significant.
    pub fn lex_power(&self, k: u32) -> Result<Poset, PosetError> {
        if k == 0 {
            return Err(PosetError::ZeroPower);
        }
        let requested = (self.n as u128)
            .checked_pow(k)
            .ok_or(PosetError::SizeCapExceeded {
                requested: u128::MAX,
                cap: size_cap(),
            })?;
        check_cap(requested)?;
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.lex_product(self)?;
        }
        Ok(acc)
    }

    /// Induced subposet; member i of the sorted subset becomes element i.
    pub fn induced(&self, s: &Subset) -> Result<Poset, PosetError> {
        s.check_in_range(self.n)?;
        let m = s.members();
        let mut p = Poset::blank(m.len());
        for (i, &x) in m.iter().enumerate() {
            for (j, &y) in m.iter().enumerate() {
                if self.is_lt(x, y) {
                    p.set_lt(i, j);
                }
            }
        }
        Ok(p)
    }

    /// Deterministic random order: draw a permutation from ChaCha8
    /// seeded with `seed`, keep each of the C(n,2) position pairs with
    /// probability `density`, then close transitively. Density 1 gives
    /// a chain, density 0 an antichain.
    pub fn random(n: usize, density: f64, seed: u64) -> Result<Poset, PosetError> {
        check_cap(n as u128)?;
        if !(0.0..=1.0).contains(&density) || density.is_nan() {
            return Err(PosetError::InvalidDensity(density));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = ((rng.next_u64() as u128 * (i as u128 + 1)) >> 64) as usize;
            perm.swap(i, j);
        }
        let mut p = Poset::blank(n);
        let always = density >= 1.0;
        let threshold = (density * u64::MAX as f64) as u64;
        for a in 0..n {
            for b in a + 1..n {
                let draw = rng.next_u64();
                if always || draw < threshold {
                    p.set_lt(perm[a], perm[b]);
                }
            }
        }
        p.close_transitively()
            .expect("edges follow a fixed permutation, so no cycle is possible");
        Ok(p)
    }

    // ---- derived relations -----------------------------------------------

    /// Cover pairs (x, y): x < y with nothing strictly between. Sorted
    /// ascending lexicographically; this is the transitive reduction.
    pub fn cover_relations(&self) -> Vec<(usize, usize)> {
        // down[y] = bitset of elements strictly below y
        let words = self.words;
        let mut down = vec![0u64; self.n * words];
        for x in 0..self.n {
            for y in self.above(x) {
                down[y * words + x / 64] |= 1u64 << (x % 64);
            }
        }
        let mut covers = Vec::new();
        for x in 0..self.n {
            for y in self.above(x) {
                let up_x = self.lt_row(x);
                let down_y = &down[y * words..(y + 1) * words];
                let between = up_x.iter().zip(down_y).any(|(a, b)| a & b != 0);
                if !between {
                    covers.push((x, y));
                }
            }
        }
        covers
    }
}
