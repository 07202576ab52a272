//! Chain/antichain invariants: height with a witness chain, maximum
//! antichains and minimum chain covers as a certified Dilworth pair, and
//! the width-threshold extraction of a large low-dimension subposet.

use crate::matching::{alternating_reachability, hopcroft_karp};
use crate::poset::{Poset, Subset};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractionError {
    #[error("extraction requires a nonempty poset")]
    EmptyPoset,
    #[error("extraction requires d >= 2, got {0}")]
    DimensionTooSmall(usize),
}

/// Pairwise incomparable elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AntichainCertificate {
    pub members: Subset,
}

/// Chains partitioning the ground set, each listed bottom-to-top.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainFamily {
    pub chains: Vec<Vec<usize>>,
}

impl ChainFamily {
    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ExtractionKind {
    /// A maximum antichain (dimension <= 2 on its own).
    Antichain,
    /// Union of at most d cover chains (dimension <= d on its own).
    ChainUnion { chains: Vec<Vec<usize>> },
}

/// Subposet extracted by the width threshold argument: if the width w
/// satisfies w^2 >= d * n take a maximum antichain, otherwise the d
/// largest chains of a minimum chain cover together hold at least
/// d * n / w >= sqrt(d * n) elements.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtractionResult {
    pub subset: Subset,
    pub kind: ExtractionKind,
    /// sqrt(d * n), the guaranteed size as a real number.
    pub guarantee: f64,
    /// ceil(sqrt(d * n)) computed in exact integer arithmetic.
    pub integer_guarantee: usize,
}

/// Length of the longest chain; 0 for the empty poset.
pub fn height(p: &Poset) -> usize {
    longest_chain(p).len()
}

/// A longest chain, bottom-to-top. Ties broken toward smaller indices.
pub fn longest_chain(p: &Poset) -> Vec<usize> {
    let n = p.n();
    if n == 0 {
        return Vec::new();
    }
    // process in topological order: down-set size is monotone along <
    let mut order: Vec<usize> = (0..n).collect();
    let down_size: Vec<usize> = (0..n).map(|x| p.below(x).count()).collect();
    order.sort_by_key(|&x| (down_size[x], x));
    let mut len = vec![1usize; n];
    let mut parent = vec![usize::MAX; n];
    for &x in &order {
        for y in p.below(x) {
            if len[y] + 1 > len[x] {
                len[x] = len[y] + 1;
                parent[x] = y;
            }
        }
    }
    let top = (0..n).max_by_key(|&x| (len[x], n - x)).unwrap();
    let mut chain = vec![top];
    let mut cur = top;
    while parent[cur] != usize::MAX {
        cur = parent[cur];
        chain.push(cur);
    }
    chain.reverse();
    chain
}

/// Split-digraph bipartite adjacency over the full comparability
/// relation: left x joins right y iff x < y.
fn comparability_adjacency(p: &Poset) -> Vec<Vec<usize>> {
    (0..p.n()).map(|x| p.above(x).collect()).collect()
}

/// Width of the poset (maximum antichain size).
pub fn width(p: &Poset) -> usize {
    p.n() - hopcroft_karp(p.n(), p.n(), &comparability_adjacency(p)).size
}

/// A maximum antichain via the König cover complement on the split
/// digraph. Pairwise incomparability is re-checked in debug builds.
pub fn max_antichain(p: &Poset) -> AntichainCertificate {
    let n = p.n();
    let adj = comparability_adjacency(p);
    let m = hopcroft_karp(n, n, &adj);
    let (in_left, in_right) = alternating_reachability(n, &adj, &m);
    let members: Vec<usize> = (0..n).filter(|&x| in_left[x] && !in_right[x]).collect();
    debug_assert_eq!(members.len(), n - m.size);
    debug_assert!(members
        .iter()
        .all(|&x| members.iter().all(|&y| x == y || p.is_incomparable(x, y))));
    AntichainCertificate {
        members: Subset::new(members),
    }
}

/// Minimum chain cover (Dilworth dual): exactly `width(p)` chains
/// partitioning the elements, derived from the same maximum matching.
pub fn min_chain_cover(p: &Poset) -> ChainFamily {
    let n = p.n();
    let adj = comparability_adjacency(p);
    let m = hopcroft_karp(n, n, &adj);
    let mut chains = Vec::with_capacity(n - m.size);
    for start in 0..n {
        if m.right_match[start].is_some() {
            continue; // not a chain bottom
        }
        let mut chain = vec![start];
        let mut cur = start;
        while let Some(next) = m.left_match[cur] {
            chain.push(next);
            cur = next;
        }
        chains.push(chain);
    }
    debug_assert_eq!(chains.len(), n - m.size);
    debug_assert_eq!(chains.iter().map(Vec::len).sum::<usize>(), n);
    ChainFamily { chains }
}

/// ceil(sqrt(v)) in integer arithmetic.
pub(crate) fn ceil_sqrt(v: u128) -> u128 {
    let g = v.isqrt();
    if g * g < v {
        g + 1
    } else {
        g
    }
}

/// Width-threshold extraction. For d <= n the result always reaches
/// ceil(sqrt(d * n)) elements; the returned kind certifies dimension
/// <= d structurally (an antichain, or a union of <= d chains).
pub fn extract_low_dim_subposet(p: &Poset, d: usize) -> Result<ExtractionResult, ExtractionError> {
    if p.is_empty() {
        return Err(ExtractionError::EmptyPoset);
    }
    if d < 2 {
        return Err(ExtractionError::DimensionTooSmall(d));
    }
    let n = p.n();
    let target = d as u128 * n as u128;
    let guarantee = (target as f64).sqrt();
    let integer_guarantee = ceil_sqrt(target) as usize;

    let antichain = max_antichain(p);
    let w = antichain.members.len();
    let result = if (w as u128) * (w as u128) >= target {
        ExtractionResult {
            subset: antichain.members,
            kind: ExtractionKind::Antichain,
            guarantee,
            integer_guarantee,
        }
    } else {
        let mut chains = min_chain_cover(p).chains;
        chains.sort_by_key(|c| (usize::MAX - c.len(), c[0]));
        chains.truncate(d);
        let union: Vec<usize> = chains.iter().flatten().copied().collect();
        ExtractionResult {
            subset: Subset::new(union),
            kind: ExtractionKind::ChainUnion { chains },
            guarantee,
            integer_guarantee,
        }
    };
    // w^2 >= dn on one branch, >= d*(n/w) > sqrt(dn) elements on the
    // other; both need d <= n to clear the integer guarantee.
    debug_assert!(d > n || result.subset.len() >= integer_guarantee);
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn height_of_basics() {
        assert_eq!(height(&Poset::chain(5)), 5);
        assert_eq!(longest_chain(&Poset::chain(5)), vec![0, 1, 2, 3, 4]);
        assert_eq!(height(&Poset::antichain(3)), 1);
        assert_eq!(height(&Poset::antichain(0)), 0);
        assert_eq!(height(&Poset::boolean_lattice(3).unwrap()), 4);
        let s3 = Poset::standard_example(3).unwrap();
        assert_eq!(height(&s3), 2);
        let chain = longest_chain(&s3);
        assert_eq!(chain.len(), 2);
        assert!(s3.is_lt(chain[0], chain[1]));
    }

    #[test]
    fn width_of_basics() {
        assert_eq!(width(&Poset::chain(7)), 1);
        assert_eq!(width(&Poset::antichain(7)), 7);
        assert_eq!(width(&Poset::standard_example(3).unwrap()), 3);
        assert_eq!(width(&Poset::boolean_lattice(4).unwrap()), 6);
        let b2_plus_point = Poset::boolean_lattice(2)
            .unwrap()
            .disjoint_union(&Poset::antichain(1))
            .unwrap();
        assert_eq!(width(&b2_plus_point), 3);
        assert_eq!(width(&Poset::antichain(0)), 0);
    }

    #[test]
    fn antichain_certificate_is_valid() {
        for p in [
            Poset::boolean_lattice(4).unwrap(),
            Poset::standard_example(4).unwrap(),
            Poset::random(20, 0.4, 7).unwrap(),
        ] {
            let cert = max_antichain(&p);
            let m = cert.members.members();
            assert_eq!(m.len(), width(&p));
            for (i, &x) in m.iter().enumerate() {
                for &y in &m[i + 1..] {
                    assert!(p.is_incomparable(x, y), "{x} vs {y} comparable");
                }
            }
        }
    }

    #[test]
    fn chain_cover_partitions() {
        let b2 = Poset::boolean_lattice(2).unwrap();
        let cover = min_chain_cover(&b2);
        assert_eq!(cover.len(), 2);
        for p in [
            Poset::boolean_lattice(3).unwrap(),
            Poset::random(15, 0.3, 3).unwrap(),
        ] {
            let cover = min_chain_cover(&p);
            assert_eq!(cover.len(), width(&p));
            let mut seen = vec![false; p.n()];
            for chain in &cover.chains {
                for w in chain.windows(2) {
                    assert!(p.is_lt(w[0], w[1]), "chain not ascending");
                }
                for &x in chain {
                    assert!(!seen[x], "element {x} covered twice");
                    seen[x] = true;
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn extraction_on_boolean_lattice() {
        let b3 = Poset::boolean_lattice(3).unwrap();
        let r = extract_low_dim_subposet(&b3, 2).unwrap();
        // width 3, 3^2 < 16: chain branch; two largest of three cover
        // chains on 8 elements hold at least ceil(2*8/3) = 6
        assert!(matches!(r.kind, ExtractionKind::ChainUnion { .. }));
        assert!(r.subset.len() >= 6);
        assert_eq!(r.integer_guarantee, 4);
        if let ExtractionKind::ChainUnion { chains } = &r.kind {
            assert!(chains.len() <= 2);
        }
    }

    #[test]
    fn extraction_branch_selection() {
        let r = extract_low_dim_subposet(&Poset::antichain(9), 2).unwrap();
        assert!(matches!(r.kind, ExtractionKind::Antichain));
        assert_eq!(r.subset.len(), 9);
        assert_eq!(r.integer_guarantee, 5); // ceil(sqrt(18))

        let r = extract_low_dim_subposet(&Poset::chain(9), 2).unwrap();
        assert!(matches!(r.kind, ExtractionKind::ChainUnion { .. }));
        assert_eq!(r.subset.len(), 9); // d >= number of chains: everything
        assert!((r.guarantee - 18f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn extraction_rejects_bad_input() {
        assert_eq!(
            extract_low_dim_subposet(&Poset::antichain(0), 2),
            Err(ExtractionError::EmptyPoset)
        );
        assert_eq!(
            extract_low_dim_subposet(&Poset::chain(3), 1),
            Err(ExtractionError::DimensionTooSmall(1))
        );
    }

    #[test]
    fn ceil_sqrt_exact() {
        assert_eq!(ceil_sqrt(0), 0);
        assert_eq!(ceil_sqrt(1), 1);
        assert_eq!(ceil_sqrt(16), 4);
        assert_eq!(ceil_sqrt(17), 5);
        assert_eq!(ceil_sqrt(24), 5);
        assert_eq!(ceil_sqrt(25), 5);
    }
}
