//! Plain-text serialization and Graphviz export.
//!
//! The on-disk format is line-oriented:
//!
//! ```text
//! poset v1
//! elements: 4
//! covers:
//! 0 1
//! 0 2
//! 1 3
//! 2 3
//! ```
//!
//! Cover pairs are `x y` meaning x is covered by y. The writer emits
//! the transitive reduction in ascending lexicographic order, so
//! writing a parsed canonical file reproduces it byte for byte. The
//! parser accepts covers in any order and closes them transitively,
//! but rejects duplicates, self-covers, and out-of-range indices with
//! the offending line number.

use crate::poset::{Poset, PosetError};
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormatError {
    #[error("line 1: expected header `poset v1`, found {found:?}")]
    BadHeader { found: String },
    #[error("line {line}: expected `elements: <count>`, found {found:?}")]
    BadElementCount { line: usize, found: String },
    #[error("line {line}: expected `covers:`, found {found:?}")]
    BadCoversHeader { line: usize, found: String },
    #[error("line {line}: expected cover pair `<x> <y>`, found {found:?}")]
    BadCoverLine { line: usize, found: String },
    #[error("line {line}: cover relates {x} to itself")]
    ReflexiveCover { line: usize, x: usize },
    #[error("line {line}: duplicate cover {x} {y}")]
    DuplicateCover { line: usize, x: usize, y: usize },
    #[error("line {line}: element {x} out of range for {n} elements")]
    CoverOutOfRange { line: usize, x: usize, n: usize },
    #[error("covers contain a cycle")]
    Cycle,
    #[error(transparent)]
    Poset(PosetError),
}

/// Parses the `poset v1` text format.
pub fn parse_poset(text: &str) -> Result<Poset, FormatError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, "poset v1")) => {}
        other => {
            return Err(FormatError::BadHeader {
                found: other.map(|(_, l)| l).unwrap_or("").to_string(),
            })
        }
    }
    let n = match lines.next() {
        Some((i, line)) => match line.strip_prefix("elements: ") {
            Some(count) => count.parse::<usize>().map_err(|_| {
                FormatError::BadElementCount {
                    line: i + 1,
                    found: line.to_string(),
                }
            })?,
            None => {
                return Err(FormatError::BadElementCount {
                    line: i + 1,
                    found: line.to_string(),
                })
            }
        },
        None => {
            return Err(FormatError::BadElementCount {
                line: 2,
                found: String::new(),
            })
        }
    };
    match lines.next() {
        Some((_, "covers:")) => {}
        Some((i, line)) => {
            return Err(FormatError::BadCoversHeader {
                line: i + 1,
                found: line.to_string(),
            })
        }
        None => {
            return Err(FormatError::BadCoversHeader {
                line: 3,
                found: String::new(),
            })
        }
    }
    let mut covers: Vec<(usize, usize)> = Vec::new();
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    for (i, line) in lines {
        let line_no = i + 1;
        let bad = || FormatError::BadCoverLine {
            line: line_no,
            found: line.to_string(),
        };
        let mut parts = line.split(' ');
        let x = parts
            .next()
            .filter(|s| !s.is_empty())
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(bad)?;
        let y = parts
            .next()
            .filter(|s| !s.is_empty())
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        if x == y {
            return Err(FormatError::ReflexiveCover { line: line_no, x });
        }
        for z in [x, y] {
            if z >= n {
                return Err(FormatError::CoverOutOfRange {
                    line: line_no,
                    x: z,
                    n,
                });
            }
        }
        if !seen.insert((x, y)) {
            return Err(FormatError::DuplicateCover {
                line: line_no,
                x,
                y,
            });
        }
        covers.push((x, y));
    }
    Poset::from_cover_relations(n, &covers).map_err(|e| match e {
        PosetError::CycleDetected => FormatError::Cycle,
        other => FormatError::Poset(other),
    })
}

/// Writes the canonical `poset v1` text: transitive reduction,
/// ascending lexicographic order, one pair per line.
pub fn write_poset(p: &Poset) -> String {
    let mut out = String::new();
    out.push_str("poset v1\n");
    out.push_str(&format!("elements: {}\n", p.n()));
    out.push_str("covers:\n");
    for (x, y) in p.cover_relations() {
        out.push_str(&format!("{x} {y}\n"));
    }
    out
}

/// Level of each element: length of the longest chain strictly below
/// it. Minimal elements sit at level 0.
fn levels(p: &Poset) -> Vec<usize> {
    let n = p.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| p.below(x).count());
    let mut level = vec![0usize; n];
    for &x in &order {
        level[x] = p
            .below(x)
            .map(|y| level[y] + 1)
            .max()
            .unwrap_or(0);
    }
    level
}

/// Graphviz rendering of the Hasse diagram, drawn bottom-up with one
/// rank per level.
pub fn write_dot(p: &Poset) -> String {
    let n = p.n();
    let level = levels(p);
    let max_level = level.iter().copied().max().unwrap_or(0);
    let mut out = String::new();
    out.push_str("digraph poset {\n");
    out.push_str("  rankdir=BT;\n");
    out.push_str("  node [shape=circle];\n");
    for l in 0..=max_level {
        let members: Vec<String> = (0..n)
            .filter(|&x| level[x] == l)
            .map(|x| format!("{x};"))
            .collect();
        if !members.is_empty() {
            out.push_str(&format!("  {{ rank=same; {} }}\n", members.join(" ")));
        }
    }
    for (x, y) in p.cover_relations() {
        out.push_str(&format!("  {x} -> {y};\n"));
    }
    out.push_str("}\n");
    out
}
