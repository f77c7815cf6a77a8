//! Fixed-width bit vectors used for shortest-path target sets and pair cover
//! sets. Little-endian word layout: bit `i` lives in word `i / 64` at bit
//! `i % 64`. All binary operations require equal widths.

/// A fixed-width set of `usize` values in `0..len`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    nbits: usize,
    words: Vec<u64>,
}

impl BitSet {
    /// Creates an empty set able to hold values in `0..nbits`.
    pub fn new(nbits: usize) -> Self {
        BitSet {
            nbits,
            words: vec![0; nbits.div_ceil(64)],
        }
    }

    /// Width of the set (one more than the largest storable value).
    pub fn len(&self) -> usize {
        self.nbits
    }

    /// True when no bit is set.
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Inserts `i`. Panics if `i` is out of range.
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.nbits, "bit {i} out of range for width {}", self.nbits);
        self.words[i / 64] |= 1 << (i % 64);
    }

    /// Removes `i` if present.
    pub fn remove(&mut self, i: usize) {
        assert!(i < self.nbits, "bit {i} out of range for width {}", self.nbits);
        self.words[i / 64] &= !(1 << (i % 64));
    }

    /// Membership test.
    pub fn contains(&self, i: usize) -> bool {
        i < self.nbits && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    /// Number of set bits.
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Clears all bits, keeping the width.
    pub fn clear(&mut self) {
        self.words.fill(0);
    }

    /// Overwrites `self` with the contents of `other` without reallocating.
    /// Panics if widths differ.
    pub fn copy_from(&mut self, other: &BitSet) {
        assert_eq!(self.nbits, other.nbits, "width mismatch");
        self.words.copy_from_slice(&other.words);
    }

    /// `self |= other`.
    pub fn or_assign(&mut self, other: &BitSet) {
        debug_assert_eq!(self.nbits, other.nbits);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// `self &= !other` (set difference in place).
    pub fn and_not_assign(&mut self, other: &BitSet) {
        debug_assert_eq!(self.nbits, other.nbits);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    /// `self &= other`.
    pub fn and_assign(&mut self, other: &BitSet) {
        debug_assert_eq!(self.nbits, other.nbits);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    /// `|self \ other|` without allocating.
    pub fn and_not_count(&self, other: &BitSet) -> usize {
        debug_assert_eq!(self.nbits, other.nbits);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & !b).count_ones() as usize)
            .sum()
    }

    /// `|self ∩ other|` without allocating.
    pub fn and_count(&self, other: &BitSet) -> usize {
        debug_assert_eq!(self.nbits, other.nbits);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// True when every bit of `self` is also set in `other`.
    pub fn is_subset(&self, other: &BitSet) -> bool {
        debug_assert_eq!(self.nbits, other.nbits);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Iterates set bits in ascending order.
    pub fn ones(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            word_idx: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    /// Raw word storage (little-endian).
    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl std::fmt::Debug for BitSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.ones()).finish()
    }
}

impl FromIterator<usize> for BitSet {
    /// Collects values into a set exactly wide enough for the maximum value.
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let vals: Vec<usize> = iter.into_iter().collect();
        let width = vals.iter().max().map_or(0, |m| m + 1);
        let mut s = BitSet::new(width);
        for v in vals {
            s.insert(v);
        }
        s
    }
}

/// Iterator over set bits.
pub struct Ones<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.current == 0 {
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
        let bit = self.current.trailing_zeros() as usize;
        self.current &= self.current - 1;
        Some(self.word_idx * 64 + bit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    #[test]
    fn insert_contains_remove() {
        let mut s = BitSet::new(130);
        assert!(s.is_empty());
        s.insert(0);
        s.insert(63);
        s.insert(64);
        s.insert(129);
        assert!(s.contains(0) && s.contains(63) && s.contains(64) && s.contains(129));
        assert!(!s.contains(1) && !s.contains(128));
        assert_eq!(s.count(), 4);
        s.remove(64);
        assert!(!s.contains(64));
        assert_eq!(s.count(), 3);
    }

    #[test]
    fn ones_iterates_in_order() {
        let s: BitSet = [5usize, 64, 65, 127, 3].into_iter().collect();
        assert_eq!(s.ones().collect::<Vec<_>>(), vec![3, 5, 64, 65, 127]);
    }

    #[test]
    fn empty_width_zero() {
        let s = BitSet::new(0);
        assert_eq!(s.count(), 0);
        assert!(s.ones().next().is_none());
        assert!(!s.contains(0));
    }

    #[test]
    fn set_ops_match_hashset_model() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5e7b175);
        for _ in 0..200 {
            let width = rng.gen_range(1..300);
            let mut a = BitSet::new(width);
            let mut b = BitSet::new(width);
            let mut ha = HashSet::new();
            let mut hb = HashSet::new();
            for _ in 0..rng.gen_range(0..80) {
                let v = rng.gen_range(0..width);
                a.insert(v);
                ha.insert(v);
            }
            for _ in 0..rng.gen_range(0..80) {
                let v = rng.gen_range(0..width);
                b.insert(v);
                hb.insert(v);
            }
            assert_eq!(a.count(), ha.len());
            assert_eq!(a.and_not_count(&b), ha.difference(&hb).count());
            assert_eq!(a.and_count(&b), ha.intersection(&hb).count());
            assert_eq!(a.is_subset(&b), ha.is_subset(&hb));

            let mut u = a.clone();
            u.or_assign(&b);
            let hu: HashSet<_> = ha.union(&hb).copied().collect();
            assert_eq!(u.count(), hu.len());
            assert_eq!(u.ones().collect::<HashSet<_>>(), hu);

            let mut d = a.clone();
            d.and_not_assign(&b);
            let hd: HashSet<_> = ha.difference(&hb).copied().collect();
            assert_eq!(d.ones().collect::<HashSet<_>>(), hd);
        }
    }
}
