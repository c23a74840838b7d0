use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A subset of `X × Y` given by index pairs. Every subset of a finite product is closed.
///
/// Iteration order is lexicographic, which is also the tie-breaking order used by
/// the solvers when several sets are equally good.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairSet {
    rows: usize,
    cols: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl PairSet {
    pub fn empty(rows: usize, cols: usize) -> Self {
        PairSet { rows, cols, pairs: BTreeSet::new() }
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(rows: usize, cols: usize, pairs: I) -> Result<Self> {
        let mut set = Self::empty(rows, cols);
        for (i, j) in pairs {
            set.insert(i, j)?;
        }
        Ok(set)
    }

    /// All `rows * cols` pairs.
    pub fn full(rows: usize, cols: usize) -> Self {
        let pairs = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).collect();
        PairSet { rows, cols, pairs }
    }

    pub fn diagonal(n: usize) -> Self {
        PairSet { rows: n, cols: n, pairs: (0..n).map(|i| (i, i)).collect() }
    }

    pub fn insert(&mut self, i: usize, j: usize) -> Result<bool> {
        if i >= self.rows || j >= self.cols {
            return Err(Error::IndexOutOfRange { row: i, col: j, rows: self.rows, cols: self.cols });
        }
        Ok(self.pairs.insert((i, j)))
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pairs.contains(&(i, j))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn is_subset(&self, other: &PairSet) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    pub fn union(&self, other: &PairSet) -> PairSet {
        PairSet { rows: self.rows, cols: self.cols, pairs: self.pairs.union(&other.pairs).copied().collect() }
    }

    pub fn transpose(&self) -> PairSet {
        PairSet { rows: self.cols, cols: self.rows, pairs: self.pairs.iter().map(|&(i, j)| (j, i)).collect() }
    }

    /// First-coordinate projection, ascending.
    pub fn first_projection(&self) -> Vec<usize> {
        let s: BTreeSet<usize> = self.pairs.iter().map(|p| p.0).collect();
        s.into_iter().collect()
    }

    pub fn second_projection(&self) -> Vec<usize> {
        let s: BTreeSet<usize> = self.pairs.iter().map(|p| p.1).collect();
        s.into_iter().collect()
    }

    /// Validates index bounds against the given shape.
    pub fn check_shape(&self, rows: usize, cols: usize) -> Result<()> {
        if let Some(&(i, j)) = self.pairs.iter().find(|&&(i, j)| i >= rows || j >= cols) {
            return Err(Error::IndexOutOfRange { row: i, col: j, rows, cols });
        }
        Ok(())
    }
}

impl fmt::Display for PairSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (i, j)) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({i},{j})")?;
        }
        write!(f, "}}")
    }
}
