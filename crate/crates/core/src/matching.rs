use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::instance::WeightMatrix;
use crate::maxplus::ExtReal;

/// A bipartite matching given as 0-based `(row, col)` pairs sorted by row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn empty() -> Self {
        Matching { pairs: Vec::new() }
    }

    /// Validates that rows and columns are pairwise distinct.
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        pairs.sort_unstable();
        let rows: BTreeSet<usize> = pairs.iter().map(|p| p.0).collect();
        let cols: BTreeSet<usize> = pairs.iter().map(|p| p.1).collect();
        if rows.len() != pairs.len() || cols.len() != pairs.len() {
            return Err(Error::InvalidMatching(format!("repeated vertex in {pairs:?}")));
        }
        Ok(Matching { pairs })
    }

    /// From 1-based pairs, as written in reports.
    pub fn from_one_based(pairs: &[(usize, usize)]) -> Result<Self> {
        if pairs.iter().any(|&(r, c)| r == 0 || c == 0) {
            return Err(Error::InvalidMatching("indices are 1-based".into()));
        }
        Self::new(pairs.iter().map(|&(r, c)| (r - 1, c - 1)).collect())
    }

    /// From a row→column map; `None` rows are unmatched.
    pub fn from_row_mates(mates: &[Option<usize>]) -> Self {
        let pairs = mates.iter().enumerate().filter_map(|(i, m)| m.map(|j| (i, j))).collect();
        Matching { pairs }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, pair: (usize, usize)) -> bool {
        self.pairs.binary_search(&pair).is_ok()
    }

    pub fn fits(&self, n: usize) -> bool {
        self.pairs.iter().all(|&(r, c)| r < n && c < n)
    }

    pub fn weight(&self, w: &WeightMatrix) -> ExtReal {
        self.pairs.iter().map(|&(i, j)| w.get(i, j)).sum()
    }

    /// Pairs in exactly one of the two matchings.
    pub fn symmetric_difference(&self, other: &Matching) -> Vec<(usize, usize)> {
        let a: BTreeSet<_> = self.pairs.iter().copied().collect();
        let b: BTreeSet<_> = other.pairs.iter().copied().collect();
        a.symmetric_difference(&b).copied().collect()
    }

    /// True when `self △ other` is one augmenting path for `self`: an
    /// alternating path with an odd number of edges whose end vertices are
    /// both unmatched in `self`.
    pub fn differs_by_one_augmenting_path(&self, other: &Matching) -> bool {
        let diff = self.symmetric_difference(other);
        if diff.len() % 2 == 0 || other.len() != self.len() + 1 {
            return false;
        }
        let in_self = |e: &(usize, usize)| self.contains(*e);
        // Vertex degrees inside the difference: rows as 2r, cols as 2c+1.
        let mut deg = std::collections::BTreeMap::<usize, usize>::new();
        for &(r, c) in &diff {
            *deg.entry(2 * r).or_default() += 1;
            *deg.entry(2 * c + 1).or_default() += 1;
        }
        if deg.values().any(|&d| d > 2) {
            return false;
        }
        let ends: Vec<usize> = deg.iter().filter(|(_, &d)| d == 1).map(|(&v, _)| v).collect();
        if ends.len() != 2 {
            return false;
        }
        // Connectivity: a single path visits |diff| + 1 vertices.
        if deg.len() != diff.len() + 1 {
            return false;
        }
        let self_rows: BTreeSet<usize> = self.pairs.iter().map(|p| p.0).collect();
        let self_cols: BTreeSet<usize> = self.pairs.iter().map(|p| p.1).collect();
        let free_in_self = |v: usize| {
            if v % 2 == 0 {
                !self_rows.contains(&(v / 2))
            } else {
                !self_cols.contains(&(v / 2))
            }
        };
        let alternating = diff.iter().filter(|e| in_self(e)).count() + 1
            == diff.iter().filter(|e| !in_self(e)).count();
        alternating && ends.iter().all(|&v| free_in_self(v)) && is_connected(&diff)
    }
}

fn is_connected(edges: &[(usize, usize)]) -> bool {
    if edges.is_empty() {
        return true;
    }
    let mut seen = BTreeSet::new();
    let mut stack = vec![2 * edges[0].0];
    while let Some(v) = stack.pop() {
        if !seen.insert(v) {
            continue;
        }
        for &(r, c) in edges {
            if 2 * r == v {
                stack.push(2 * c + 1);
            } else if 2 * c + 1 == v {
                stack.push(2 * r);
            }
        }
    }
    edges.iter().all(|&(r, c)| seen.contains(&(2 * r)) && seen.contains(&(2 * c + 1)))
}

/// 1-based `(r,c)` pairs separated by spaces.
impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(r, c)| format!("({},{})", r + 1, c + 1)).collect();
        f.write_str(&parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_shared_vertices() {
        assert!(Matching::new(vec![(0, 1), (0, 2)]).is_err());
        assert!(Matching::new(vec![(0, 1), (2, 1)]).is_err());
        assert!(Matching::from_one_based(&[(0, 1)]).is_err());
    }

    #[test]
    fn weight_and_display() {
        let w = WeightMatrix::example1();
        let m = Matching::from_one_based(&[(2, 1), (1, 2), (3, 3)]).unwrap();
        assert_eq!(m.weight(&w), ExtReal::int(23));
        assert_eq!(m.to_string(), "(1,2) (2,1) (3,3)");
    }

    #[test]
    fn augmenting_path_detection() {
        let m1 = Matching::from_one_based(&[(2, 1)]).unwrap();
        let m2 = Matching::from_one_based(&[(2, 1), (1, 2)]).unwrap();
        assert!(m1.differs_by_one_augmenting_path(&m2));

        // u1-v1 matched in a; b = {u1-v2, u2-v1}: path u2-v1-u1-v2.
        let a = Matching::from_one_based(&[(1, 1)]).unwrap();
        let b = Matching::from_one_based(&[(1, 2), (2, 1)]).unwrap();
        assert!(a.differs_by_one_augmenting_path(&b));

        // Two disjoint single-edge paths.
        let c = Matching::from_one_based(&[(1, 1), (2, 2), (3, 3)]).unwrap();
        let d = Matching::from_one_based(&[(1, 1)]).unwrap();
        assert!(!d.differs_by_one_augmenting_path(&c));
    }
}
