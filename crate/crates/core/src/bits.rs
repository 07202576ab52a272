//! Fixed-width bit masks used by the exact search engines.
//!
//! `u64` covers every instance the solvers are tuned for (n <= 64); the
//! `[u64; 8]` impl extends exact search to n <= 512 at a constant-factor
//! cost. Both are `Copy` so search states stay allocation-free.

use std::hash::Hash;

pub trait Mask: Copy + Eq + Hash + Send + Sync {
    const CAPACITY: usize;

    fn zero() -> Self;
    fn bit(i: usize) -> Self;
    fn get(&self, i: usize) -> bool;
    fn set(&mut self, i: usize);
    fn unset(&mut self, i: usize);
    fn or(&self, other: &Self) -> Self;
    fn and(&self, other: &Self) -> Self;
    /// Bits in `self` that are not in `other`.
    fn minus(&self, other: &Self) -> Self;
    fn count(&self) -> usize;
    fn is_zero(&self) -> bool;
    fn lowest(&self) -> Option<usize>;
    fn ones(&self) -> Ones<Self>;
}

/// Iterator over set bit positions, lowest first.
pub struct Ones<M> {
    mask: M,
}

impl<M: Mask> Iterator for Ones<M> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let i = self.mask.lowest()?;
        self.mask.unset(i);
        Some(i)
    }
}

impl Mask for u64 {
    const CAPACITY: usize = 64;

    fn zero() -> Self {
        0
    }

    fn bit(i: usize) -> Self {
        debug_assert!(i < 64);
        1u64 << i
    }

    fn get(&self, i: usize) -> bool {
        (*self >> i) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        *self |= 1u64 << i;
    }

    fn unset(&mut self, i: usize) {
        *self &= !(1u64 << i);
    }

    fn or(&self, other: &Self) -> Self {
        self | other
    }

    fn and(&self, other: &Self) -> Self {
        self & other
    }

    fn minus(&self, other: &Self) -> Self {
        self & !other
    }

    fn count(&self) -> usize {
        self.count_ones() as usize
    }

    fn is_zero(&self) -> bool {
        *self == 0
    }

    fn lowest(&self) -> Option<usize> {
        if *self == 0 {
            None
        } else {
            Some(self.trailing_zeros() as usize)
        }
    }

    fn ones(&self) -> Ones<Self> {
        Ones { mask: *self }
    }
}

pub const WIDE_WORDS: usize = 8;

impl Mask for [u64; WIDE_WORDS] {
    const CAPACITY: usize = WIDE_WORDS * 64;

    fn zero() -> Self {
        [0; WIDE_WORDS]
    }

    fn bit(i: usize) -> Self {
        let mut m = [0; WIDE_WORDS];
        m[i / 64] = 1u64 << (i % 64);
        m
    }

    fn get(&self, i: usize) -> bool {
        (self[i / 64] >> (i % 64)) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self[i / 64] |= 1u64 << (i % 64);
    }

    fn unset(&mut self, i: usize) {
        self[i / 64] &= !(1u64 << (i % 64));
    }

    fn or(&self, other: &Self) -> Self {
        let mut m = *self;
        for (a, b) in m.iter_mut().zip(other) {
            *a |= b;
        }
        m
    }

    fn and(&self, other: &Self) -> Self {
        let mut m = *self;
        for (a, b) in m.iter_mut().zip(other) {
            *a &= b;
        }
        m
    }

    fn minus(&self, other: &Self) -> Self {
        let mut m = *self;
        for (a, b) in m.iter_mut().zip(other) {
            *a &= !b;
        }
        m
    }

    fn count(&self) -> usize {
        self.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_zero(&self) -> bool {
        self.iter().all(|w| *w == 0)
    }

    fn lowest(&self) -> Option<usize> {
        for (k, w) in self.iter().enumerate() {
            if *w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    fn ones(&self) -> Ones<Self> {
        Ones { mask: *self }
    }
}

/// Collects sorted element indices into a mask. Callers guarantee
/// `i < M::CAPACITY`.
pub fn mask_of<M: Mask>(indices: impl IntoIterator<Item = usize>) -> M {
    let mut m = M::zero();
    for i in indices {
        m.set(i);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u64_roundtrip() {
        let m: u64 = mask_of([0, 3, 63]);
        assert!(m.get(0) && m.get(3) && m.get(63) && !m.get(2));
        assert_eq!(m.count(), 3);
        assert_eq!(m.ones().collect::<Vec<_>>(), vec![0, 3, 63]);
        assert_eq!(m.lowest(), Some(0));
        assert_eq!(m.minus(&u64::bit(3)).count(), 2);
    }

    #[test]
    fn wide_roundtrip() {
        let m: [u64; WIDE_WORDS] = mask_of([1, 64, 130, 511]);
        assert_eq!(m.count(), 4);
        assert_eq!(m.ones().collect::<Vec<_>>(), vec![1, 64, 130, 511]);
        assert!(m.get(130) && !m.get(129));
        let n = m.minus(&<[u64; WIDE_WORDS]>::bit(64));
        assert_eq!(n.ones().collect::<Vec<_>>(), vec![1, 130, 511]);
        assert!(<[u64; WIDE_WORDS]>::zero().is_zero());
    }
}
