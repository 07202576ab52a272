//! Transitive orientation of incomparability graphs.
//!
//! A poset has dimension <= 2 exactly when its incomparability graph is
//! a comparability graph. Orientation is by forcing classes: orienting
//! edge (a, b) as a -> b forces a -> c for every neighbour c of a that
//! is not adjacent to b (orienting b -> c instead would break
//! transitivity through a), and symmetrically c -> b for neighbours of
//! b missed by a. A class whose closure forces some edge both ways is
//! self-inverse and rules the graph out; otherwise the oriented class
//! is removed and the remainder is processed the same way.

use super::{verify_realizer, LinearExtension, Realizer};
use crate::bits::Mask;
use crate::poset::Poset;

/// Orients the incomparability graph of `p` transitively. Returns the
/// oriented pairs, or None when some forcing class conflicts with its
/// own inverse (dimension > 2).
pub(crate) fn transitive_orientation(p: &Poset) -> Option<Vec<(usize, usize)>> {
    let n = p.n();
    let words = n.div_ceil(64).max(1);
    let mut rem = vec![0u64; n * words];
    for x in 0..n {
        for y in x + 1..n {
            if p.is_incomparable(x, y) {
                rem[x * words + y / 64] |= 1 << (y % 64);
                rem[y * words + x / 64] |= 1 << (x % 64);
            }
        }
    }
    let mut dir = vec![0u64; n * words];
    let mut forward = Vec::new();
    let mut queue: Vec<(u32, u32)> = Vec::new();

    // Records x -> y unless y -> x is already forced (a conflict).
    // Returns None on conflict, Some(true) when newly recorded.
    let force = |dir: &mut [u64], queue: &mut Vec<(u32, u32)>, x: usize, y: usize| {
        if dir[y * words + x / 64] >> (x % 64) & 1 == 1 {
            return None;
        }
        let cell = &mut dir[x * words + y / 64];
        let bit = 1u64 << (y % 64);
        if *cell & bit != 0 {
            return Some(false);
        }
        *cell |= bit;
        queue.push((x as u32, y as u32));
        Some(true)
    };

    for x in 0..n {
        loop {
            let seed_y = match lowest_bit(&rem[x * words..(x + 1) * words]) {
                Some(y) => y,
                None => break,
            };
            queue.clear();
            force(&mut dir, &mut queue, x, seed_y)?;
            let mut cursor = 0;
            while cursor < queue.len() {
                let (a, b) = queue[cursor];
                cursor += 1;
                let (a, b) = (a as usize, b as usize);
                for w in 0..words {
                    // neighbours of a that b does not see
                    let mut bits = rem[a * words + w] & !rem[b * words + w];
                    if b / 64 == w {
                        bits &= !(1 << (b % 64));
                    }
                    while bits != 0 {
                        let c = w * 64 + bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        force(&mut dir, &mut queue, a, c)?;
                    }
                    // neighbours of b that a does not see
                    let mut bits = rem[b * words + w] & !rem[a * words + w];
                    if a / 64 == w {
                        bits &= !(1 << (a % 64));
                    }
                    while bits != 0 {
                        let c = w * 64 + bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        force(&mut dir, &mut queue, c, b)?;
                    }
                }
            }
            for &(u, v) in &queue {
                let (u, v) = (u as usize, v as usize);
                rem[u * words + v / 64] &= !(1 << (v % 64));
                rem[v * words + u / 64] &= !(1 << (u % 64));
                forward.push((u, v));
            }
        }
    }
    Some(forward)
}

fn lowest_bit(row: &[u64]) -> Option<usize> {
    for (k, w) in row.iter().enumerate() {
        if *w != 0 {
            return Some(k * 64 + w.trailing_zeros() as usize);
        }
    }
    None
}

/// Builds the two-extension realizer from a transitive orientation F:
/// sort by the number of predecessors under p ∪ F and under p ∪ F⁻¹.
/// Returns None unless the result verifies.
pub(crate) fn realizer_from_orientation(
    p: &Poset,
    forward: &[(usize, usize)],
) -> Option<Realizer> {
    let n = p.n();
    let mut below1: Vec<usize> = (0..n).map(|x| p.below(x).count()).collect();
    let mut below2 = below1.clone();
    for &(u, v) in forward {
        below1[v] += 1;
        below2[u] += 1;
    }
    let extension = |below: &[usize]| -> Option<LinearExtension> {
        let mut order = vec![usize::MAX; n];
        for x in 0..n {
            if below[x] >= n || order[below[x]] != usize::MAX {
                return None;
            }
            order[below[x]] = x;
        }
        Some(LinearExtension::new(order))
    };
    let r = Realizer::new(vec![extension(&below1)?, extension(&below2)?]);
    match verify_realizer(p, &r) {
        Ok(true) => Some(r),
        _ => None,
    }
}

/// Reusable dimension <= 2 test for induced subposets, the inner loop
/// of the extremal search. Scratch rows are recycled across calls;
/// only rows inside the queried mask are ever read or written.
#[derive(Clone)]
pub(crate) struct SubsetDimTester<M: Mask> {
    inc: Vec<M>,
    cmp: Vec<M>,
    rem: Vec<M>,
    dir: Vec<M>,
    queue: Vec<(u16, u16)>,
}

impl<M: Mask> SubsetDimTester<M> {
    pub fn new(p: &Poset) -> Self {
        let n = p.n();
        assert!(n <= M::CAPACITY, "poset too large for this mask width");
        let mut inc = vec![M::zero(); n];
        let mut cmp = vec![M::zero(); n];
        for x in 0..n {
            for y in 0..n {
                if x == y {
                    continue;
                }
                if p.is_comparable(x, y) {
                    cmp[x].set(y);
                } else {
                    inc[x].set(y);
                }
            }
        }
        SubsetDimTester {
            inc,
            cmp,
            rem: vec![M::zero(); n],
            dir: vec![M::zero(); n],
            queue: Vec::new(),
        }
    }

    /// True iff the subposet induced on `mask` is a chain.
    pub fn is_chain(&self, mask: M) -> bool {
        mask.ones().all(|x| {
            let mut rest = mask;
            rest.unset(x);
            self.cmp[x].and(&mask) == rest
        })
    }

    /// True iff the subposet induced on `mask` has dimension <= 2.
    /// Same forcing-class orientation as `transitive_orientation`,
    /// restricted to the mask.
    pub fn dim_le_2(&mut self, mask: M) -> bool {
        if mask.count() <= 5 {
            // dim <= 2 on <= 3 points, dim <= floor(n/2) for n >= 4
            return true;
        }
        for x in mask.ones() {
            self.rem[x] = self.inc[x].and(&mask);
            self.dir[x] = M::zero();
        }
        for x in mask.ones() {
            while let Some(seed_y) = self.rem[x].lowest() {
                self.queue.clear();
                if !self.force(x, seed_y) {
                    return false;
                }
                let mut cursor = 0;
                while cursor < self.queue.len() {
                    let (a, b) = self.queue[cursor];
                    cursor += 1;
                    let (a, b) = (a as usize, b as usize);
                    let mut cand = self.rem[a].minus(&self.rem[b]);
                    cand.unset(b);
                    for c in cand.ones() {
                        if !self.force(a, c) {
                            return false;
                        }
                    }
                    let mut cand = self.rem[b].minus(&self.rem[a]);
                    cand.unset(a);
                    for c in cand.ones() {
                        if !self.force(c, b) {
                            return false;
                        }
                    }
                }
                for i in 0..self.queue.len() {
                    let (u, v) = self.queue[i];
                    self.rem[u as usize].unset(v as usize);
                    self.rem[v as usize].unset(u as usize);
                }
            }
        }
        true
    }

    fn force(&mut self, x: usize, y: usize) -> bool {
        if self.dir[y].get(x) {
            return false;
        }
        if self.dir[x].get(y) {
            return true;
        }
        self.dir[x].set(y);
        self.queue.push((x as u16, y as u16));
        true
    }
}
