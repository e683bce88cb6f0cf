//! Compact graph-id sets (the `B` bitmaps used for support bookkeeping).

/// A fixed-universe bitset over dataset graph ids `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GidSet {
    words: Vec<u64>,
    universe: usize,
}

impl GidSet {
    pub fn empty(universe: usize) -> Self {
        Self {
            words: vec![0; universe.div_ceil(64)],
            universe,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for i in 0..universe {
            s.insert(i);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, gid: usize) {
        debug_assert!(gid < self.universe);
        self.words[gid / 64] |= 1 << (gid % 64);
    }

    pub fn contains(&self, gid: usize) -> bool {
        gid < self.universe && self.words[gid / 64] >> (gid % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersect_with(&mut self, other: &GidSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    /// Removes every id present in `other`.
    pub fn subtract(&mut self, other: &GidSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union_with(&mut self, other: &GidSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn is_subset_of(&self, other: &GidSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let tz = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + tz)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for GidSet {
    /// Collects ids into a set sized to the maximum id seen; mostly a test
    /// convenience, prefer `empty(universe)` + `insert` in real code.
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let ids: Vec<usize> = iter.into_iter().collect();
        let universe = ids.iter().max().map_or(0, |m| m + 1);
        let mut s = Self::empty(universe);
        for id in ids {
            s.insert(id);
        }
        s
    }
}
