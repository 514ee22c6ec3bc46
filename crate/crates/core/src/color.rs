//! Color identifiers and bit-indexed color sets.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// Index into an instance's color universe.
pub type ColorId = usize;

const WORD_BITS: usize = 64;

/// A set of colors stored as a little-endian bit vector.
///
/// Trailing zero words are always trimmed, so two sets with the same members
/// compare and hash equal regardless of how they were built.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ColorSet {
    words: SmallVec<[u64; 2]>,
}

impl ColorSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(c: ColorId) -> Self {
        let mut s = Self::new();
        s.insert(c);
        s
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn insert(&mut self, c: ColorId) {
        let (w, b) = (c / WORD_BITS, c % WORD_BITS);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << b;
    }

    pub fn remove(&mut self, c: ColorId) {
        let (w, b) = (c / WORD_BITS, c % WORD_BITS);
        if w < self.words.len() {
            self.words[w] &= !(1 << b);
            self.trim();
        }
    }

    pub fn contains(&self, c: ColorId) -> bool {
        let (w, b) = (c / WORD_BITS, c % WORD_BITS);
        self.words.get(w).is_some_and(|x| x & (1 << b) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Largest member, if any.
    pub fn max_color(&self) -> Option<ColorId> {
        let w = self.words.len().checked_sub(1)?;
        let top = self.words[w];
        Some(w * WORD_BITS + (WORD_BITS - 1 - top.leading_zeros() as usize))
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn union_with(&mut self, other: &Self) {
        if self.words.len() < other.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a |= *b;
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut words: SmallVec<[u64; 2]> = self
            .words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| a & b)
            .collect();
        while words.last() == Some(&0) {
            words.pop();
        }
        Self { words }
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(other.words.iter()) {
            *a &= !*b;
        }
        out.trim();
        out
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.len() <= other.words.len()
            && self.words.iter().zip(other.words.iter()).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words.iter().zip(other.words.iter()).all(|(a, b)| a & b == 0)
    }

    /// `|self ∪ other|` without materializing the union.
    pub fn union_len(&self, other: &Self) -> usize {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        long.words
            .iter()
            .enumerate()
            .map(|(i, w)| (w | short.words.get(i).copied().unwrap_or(0)).count_ones() as usize)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = ColorId> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * WORD_BITS + b)
            })
        })
    }

    /// Applies `map` to every member. Members mapped to `None` are dropped.
    pub fn remap(&self, map: impl Fn(ColorId) -> Option<ColorId>) -> Self {
        self.iter().filter_map(map).collect()
    }

    /// Lexicographic comparison of the underlying bit vectors, most
    /// significant word first. Used only as a deterministic tie-breaker.
    pub fn cmp_bits(&self, other: &Self) -> Ordering {
        self.words
            .len()
            .cmp(&other.words.len())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl FromIterator<ColorId> for ColorSet {
    fn from_iter<I: IntoIterator<Item = ColorId>>(iter: I) -> Self {
        let mut s = Self::new();
        for c in iter {
            s.insert(c);
        }
        s
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Ord for ColorSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_bits(other)
    }
}

impl PartialOrd for ColorSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Enumerates the subsets of `set` in nondecreasing cardinality; subsets of
/// equal cardinality come out in increasing order of their bit pattern over
/// the members of `set`.
pub fn subsets_by_cardinality(set: &ColorSet) -> impl Iterator<Item = ColorSet> + '_ {
    let members: Vec<ColorId> = set.iter().collect();
    let m = members.len();
    assert!(m < 32, "subset enumeration over {m} colors");
    let mut masks: Vec<u32> = (0..(1u32 << m)).collect();
    masks.sort_by_key(|x| (x.count_ones(), *x));
    masks.into_iter().map(move |mask| {
        (0..m)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| members[i])
            .collect()
    })
}
