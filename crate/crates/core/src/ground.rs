//! Ground sets and compact subsets.
//!
//! A [`GroundSet`] is an ordered list of distinct element labels; iteration
//! order is always the declaration order. A [`Subset`] is a bitset of element
//! indices over a fixed universe size, so set algebra is a few word
//! operations even for the largest instances we build (PG(3,4) and its
//! extension chains).

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroundSetError {
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("invalid element label `{0}` (labels must be non-empty and whitespace-free)")]
    InvalidLabel(String),
    #[error("unknown element label `{0}`")]
    UnknownLabel(String),
}

/// Ordered set of distinct element labels with index lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSet {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl GroundSet {
    pub fn new<I, S>(labels: I) -> Result<Self, GroundSetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.chars().any(char::is_whitespace) {
                return Err(GroundSetError::InvalidLabel(l.clone()));
            }
            if index.insert(l.clone(), i).is_some() {
                return Err(GroundSetError::DuplicateLabel(l.clone()));
            }
        }
        Ok(GroundSet { labels, index })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn contains_label(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    /// Ground set extended by one fresh label (used by single-element extensions).
    pub fn with_label(&self, label: &str) -> Result<GroundSet, GroundSetError> {
        if self.contains_label(label) {
            return Err(GroundSetError::DuplicateLabel(label.to_string()));
        }
        let mut labels = self.labels.clone();
        labels.push(label.to_string());
        GroundSet::new(labels)
    }

    pub fn empty_subset(&self) -> Subset {
        Subset::empty(self.len())
    }

    pub fn full_subset(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn singleton(&self, i: usize) -> Subset {
        let mut s = self.empty_subset();
        s.insert(i);
        s
    }

    pub fn subset_from_labels<'a, I>(&self, labels: I) -> Result<Subset, GroundSetError>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut s = self.empty_subset();
        for l in labels {
            match self.index_of(l) {
                Some(i) => s.insert(i),
                None => return Err(GroundSetError::UnknownLabel(l.to_string())),
            }
        }
        Ok(s)
    }

    /// Labels of a subset, in declaration order.
    pub fn labels_of(&self, s: &Subset) -> Vec<&str> {
        s.iter().map(|i| self.label(i)).collect()
    }

    /// Space-separated labels, handy for error messages and reports.
    pub fn format_subset(&self, s: &Subset) -> String {
        let labels = self.labels_of(s);
        if labels.is_empty() {
            "{}".to_string()
        } else {
            labels.join(" ")
        }
    }
}

const WORD_BITS: usize = 64;

fn words_for(universe: usize) -> usize {
    universe.div_ceil(WORD_BITS)
}

/// Bitset of element indices over a fixed universe size.
///
/// Two subsets compare equal only if they have the same universe; all binary
/// operations require matching universes. The `Ord` instance compares the
/// ascending index sequences lexicographically, which is the canonical order
/// used everywhere deterministic output is required.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    words: SmallVec<[u64; 2]>,
    universe: u32,
}

impl Subset {
    pub fn empty(universe: usize) -> Self {
        Subset {
            words: smallvec::smallvec![0; words_for(universe)],
            universe: universe as u32,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Subset::empty(universe);
        for i in 0..universe {
            s.insert(i);
        }
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, indices: I) -> Self {
        let mut s = Subset::empty(universe);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe as usize
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.universe());
        self.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
    }

    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.universe());
        self.words[i / WORD_BITS] &= !(1 << (i % WORD_BITS));
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe() && self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union(&self, other: &Subset) -> Subset {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Subset {
        let mut words: SmallVec<[u64; 2]> = self.words.iter().map(|w| !w).collect();
        let tail = self.universe() % WORD_BITS;
        if tail != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        Subset {
            words,
            universe: self.universe,
        }
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        debug_assert_eq!(self.universe, other.universe);
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint_from(&self, other: &Subset) -> bool {
        debug_assert_eq!(self.universe, other.universe);
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let base = wi * WORD_BITS;
            BitIter { word: w }.map(move |b| base + b)
        })
    }

    /// Re-embeds into a larger universe, keeping indices.
    pub fn grown(&self, universe: usize) -> Subset {
        debug_assert!(universe >= self.universe());
        let mut s = Subset::empty(universe);
        for i in self.iter() {
            s.insert(i);
        }
        s
    }

    /// Restricts to the first `universe` indices of a smaller universe.
    pub fn shrunk(&self, universe: usize) -> Subset {
        debug_assert!(universe <= self.universe());
        Subset::from_indices(universe, self.iter().filter(|&i| i < universe))
    }
}

struct BitIter {
    word: u64,
}

impl Iterator for BitIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.word == 0 {
            None
        } else {
            let b = self.word.trailing_zeros() as usize;
            self.word &= self.word - 1;
            Some(b)
        }
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.iter();
        let mut b = other.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) => match x.cmp(&y) {
                    Ordering::Equal => continue,
                    ord => return ord,
                },
            }
        }
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl Subset {
    fn zip_with(&self, other: &Subset, op: impl Fn(u64, u64) -> u64) -> Subset {
        debug_assert_eq!(self.universe, other.universe);
        Subset {
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(&a, &b)| op(a, b))
                .collect(),
            universe: self.universe,
        }
    }
}

/// All subsets of `{0, .., universe-1}` in numeric (mask) order. Only for
/// small universes; used by exhaustive checks and oracles.
pub fn all_subsets(universe: usize) -> impl Iterator<Item = Subset> {
    assert!(universe <= 25, "exhaustive subset enumeration capped at 25");
    (0u32..1 << universe).map(move |mask| {
        Subset::from_indices(universe, (0..universe).filter(|&i| mask >> i & 1 == 1))
    })
}

/// All `k`-element subsets of `universe`, in canonical (lexicographic) order.
pub fn k_subsets(universe: usize, k: usize) -> Vec<Subset> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(universe: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Subset>) {
        if cur.len() == k {
            out.push(Subset::from_indices(universe, cur.iter().copied()));
            return;
        }
        let remaining = k - cur.len();
        for i in start..=universe.saturating_sub(remaining) {
            cur.push(i);
            rec(universe, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(universe, k, 0, &mut cur, &mut out);
    out
}
