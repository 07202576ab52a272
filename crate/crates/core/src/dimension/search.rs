//! Exact backtracking search for a realizer with a prescribed number of
//! extensions.
//!
//! All d extensions grow in lockstep: each node extends the currently
//! shortest prefix by one minimal element of the unplaced remainder.
//! Once an incomparable pair has been decided the same way in every
//! extension the branch is dead (the pair would survive the
//! intersection), which prunes most of the tree. Extensions are forced
//! to be lexicographically non-decreasing across the family, so
//! permutations of the d slots are never explored twice.

use super::{verify_realizer, BudgetExceeded, LinearExtension, Realizer};
use crate::poset::Poset;

/// Searches for a realizer of `p` with exactly `d` extensions.
///
/// Ok(None) is a proof that dim(p) > d; Err means the node budget ran
/// out first. Instances beyond 64 elements are reported as budget
/// failures outright: the state space is far outside what any node
/// budget reaches.
pub fn realizer_search(
    p: &Poset,
    d: usize,
    max_nodes: u64,
) -> Result<Option<Realizer>, BudgetExceeded> {
    assert!(d >= 1);
    let n = p.n();
    if n == 0 {
        return Ok(Some(Realizer::new(
            (0..d).map(|_| LinearExtension::new(Vec::new())).collect(),
        )));
    }
    if n > 64 || d > 64 {
        return Err(BudgetExceeded);
    }

    let mut below = vec![0u64; n];
    for x in 0..n {
        for y in p.below(x) {
            below[x] |= 1 << y;
        }
    }
    let mut pair_id = vec![u16::MAX; n * n];
    let mut pair_count = 0usize;
    for x in 0..n {
        for y in x + 1..n {
            if p.is_incomparable(x, y) {
                pair_id[x * n + y] = pair_count as u16;
                pair_id[y * n + x] = pair_count as u16;
                pair_count += 1;
            }
        }
    }

    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let all_exts = if d == 64 { u64::MAX } else { (1u64 << d) - 1 };
    let mut state = State {
        p,
        d,
        below,
        pair_id,
        // low[k]: extensions where the lower-index element of pair k
        // was placed first; high[k]: the converse
        low: vec![0u64; pair_count],
        high: vec![0u64; pair_count],
        exts: vec![Vec::with_capacity(n); d],
        placed: vec![0u64; d],
        eq_prev: vec![true; d],
        full,
        all_exts,
        nodes: 0,
        max_nodes,
    };
    if state.dfs()? {
        let r = Realizer::new(state.exts.into_iter().map(LinearExtension::new).collect());
        debug_assert_eq!(verify_realizer(p, &r), Ok(true));
        Ok(Some(r))
    } else {
        Ok(None)
    }
}

struct State<'a> {
    p: &'a Poset,
    d: usize,
    below: Vec<u64>,
    pair_id: Vec<u16>,
    low: Vec<u64>,
    high: Vec<u64>,
    exts: Vec<Vec<usize>>,
    placed: Vec<u64>,
    eq_prev: Vec<bool>,
    full: u64,
    all_exts: u64,
    nodes: u64,
    max_nodes: u64,
}

impl State<'_> {
    fn dfs(&mut self) -> Result<bool, BudgetExceeded> {
        let j = match (0..self.d).min_by_key(|&j| self.exts[j].len()) {
            Some(j) if self.exts[j].len() < self.p.n() => j,
            _ => return Ok(true), // every extension is complete
        };
        let pos = self.exts[j].len();
        let unplaced = self.full & !self.placed[j];
        let mut cand = unplaced;
        while cand != 0 {
            let e = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            if self.below[e] & unplaced != 0 {
                continue; // not minimal in the remainder
            }
            if j > 0 && self.eq_prev[j] {
                // identical prefixes: only continue at or above the
                // previous extension's choice here
                let prev = self.exts[j - 1][pos];
                if e < prev {
                    continue;
                }
            }
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return Err(BudgetExceeded);
            }
            if self.place(j, pos, e)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    // Places e, propagates pair decisions, recurses, undoes.
    fn place(&mut self, j: usize, pos: usize, e: usize) -> Result<bool, BudgetExceeded> {
        let saved_eq = self.eq_prev[j];
        self.eq_prev[j] = j > 0 && saved_eq && self.exts[j - 1][pos] == e;
        self.exts[j].push(e);
        self.placed[j] |= 1 << e;
        let n = self.p.n();
        let bit = 1u64 << j;
        let mut touched: Vec<u16> = Vec::new();
        let mut dead = false;
        let mut rest = self.full & !self.placed[j];
        while rest != 0 {
            let f = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let k = self.pair_id[e * n + f];
            if k == u16::MAX {
                continue; // comparable pair, ordered by the poset itself
            }
            let k = k as usize;
            let side = if e < f {
                &mut self.low[k]
            } else {
                &mut self.high[k]
            };
            *side |= bit;
            touched.push(k as u16);
            if *side == self.all_exts {
                // decided the same way everywhere: pair never reversed
                dead = true;
                break;
            }
        }
        let result = if dead { Ok(false) } else { self.dfs() };
        if result == Ok(true) {
            return result; // keep the completed assignment for extraction
        }
        for &k in &touched {
            let k = k as usize;
            // e was placed first in extension j, so exactly one side
            // gained this bit
            if self.low[k] & bit != 0 && self.high[k] & bit == 0 {
                self.low[k] &= !bit;
            } else {
                self.high[k] &= !bit;
            }
        }
        self.placed[j] &= !(1 << e);
        self.exts[j].pop();
        self.eq_prev[j] = saved_eq;
        result
    }
}
