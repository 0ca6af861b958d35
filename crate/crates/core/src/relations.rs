//! Binary relations on finite sets, their transitive closure, and maximal
//! elements in the weak sense `x s y ⇒ y s x`.
//!
//! Every subset of a finite set is finite, so every relation here is
//! countably orderable; the existence of an `s*`-maximal element reachable
//! from any start is then guaranteed, and [`find_maximal`] constructs one.

use crate::error::{check_index, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteRelation {
    n: usize,
    adj: Vec<bool>,
}

impl FiniteRelation {
    pub fn empty(n: usize) -> Self {
        FiniteRelation {
            n,
            adj: vec![false; n * n],
        }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut s = Self::empty(n);
        for (i, j) in pairs {
            s.insert(i, j);
        }
        s
    }

    /// Builds the relation `{(i, j) : holds(i, j)}`.
    pub fn from_fn(n: usize, mut holds: impl FnMut(usize, usize) -> bool) -> Self {
        let mut s = Self::empty(n);
        for i in 0..n {
            for j in 0..n {
                if holds(i, j) {
                    s.insert(i, j);
                }
            }
        }
        s
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.n + j]
    }

    pub fn insert(&mut self, i: usize, j: usize) {
        assert!(i < self.n && j < self.n, "pair ({i}, {j}) outside a set of {}", self.n);
        self.adj[i * self.n + j] = true;
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| (0..self.n).filter(move |&j| self.contains(i, j)).map(move |j| (i, j)))
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &FiniteRelation) -> bool {
        self.n == other.n && self.adj.iter().zip(&other.adj).all(|(&a, &b)| !a || b)
    }

    pub fn is_transitive(&self) -> bool {
        transitive_closure(self) == *self
    }
}

/// Warshall saturation: `i s* j` iff an `s`-chain leads from `i` to `j`.
pub fn transitive_closure(s: &FiniteRelation) -> FiniteRelation {
    let n = s.n;
    let mut c = s.clone();
    for k in 0..n {
        for i in 0..n {
            if !c.contains(i, k) {
                continue;
            }
            for j in 0..n {
                if c.contains(k, j) {
                    c.adj[i * n + j] = true;
                }
            }
        }
    }
    c
}

/// `x` is maximal when every `y` with `x s y` also has `y s x`.
pub fn is_maximal(s: &FiniteRelation, x: usize) -> Result<bool> {
    check_index(x, s.n)?;
    Ok((0..s.n).all(|y| !s.contains(x, y) || s.contains(y, x)))
}

/// Walks strict `s*`-successors from `start`, always taking the smallest
/// index, until an `s*`-maximal element is reached.
///
/// A strict successor `y` of `x` has `x s* y` but not `y s* x`, so the walk
/// never revisits a point and stops after at most `n` steps.
pub fn find_maximal(s: &FiniteRelation, start: usize) -> Result<usize> {
    check_index(start, s.n)?;
    let closure = transitive_closure(s);
    let mut x = start;
    let mut visited = vec![false; s.n];
    loop {
        visited[x] = true;
        let next = (0..s.n).find(|&y| closure.contains(x, y) && !closure.contains(y, x));
        match next {
            Some(y) => {
                debug_assert!(!visited[y]);
                x = y;
            }
            None => return Ok(x),
        }
    }
}
