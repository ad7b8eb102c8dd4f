//! Successive longest augmenting paths.
//!
//! The maximisation is solved as the negated min-cost flow on
//! `s → rows → cols → t` with unit capacities. Each iteration runs a
//! label-setting search on reduced costs from `s` and augments one unit along
//! a shortest `s-t` path, so after `k` iterations the flow is an optimal
//! `k`-matching. Potentials are raised by `min(dist(v), dist(t))`, which keeps
//! every reduced cost non-negative (also for vertices the search did not
//! settle) and lets the search stop as soon as `t` is settled.
//!
//! Weights run on the integer image of the matrix, so every comparison is exact.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::Result;
use crate::instance::{ScaledMatrix, WeightMatrix};
use crate::matching::Matching;
use crate::maxplus::{ExtReal, Rational};
use crate::sequence::{AssignmentSequence, SolverKind};

const INF: i128 = i128::MAX;

/// Dual values in max orientation: `w_ij - row[i] - col[j] ≤ 0` on every
/// finite edge, with equality on matched edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Potentials {
    pub row: Vec<Rational>,
    pub col: Vec<Rational>,
}

/// Mutable solver state; one call to [`SspState::augment`] per cardinality.
pub struct SspState {
    m: ScaledMatrix,
    /// Min-cost potentials, indexed s=0, rows 1..=n, cols n+1..=2n, t=2n+1.
    pot: Vec<i128>,
    row_mate: Vec<Option<usize>>,
    col_mate: Vec<Option<usize>>,
    k: usize,
    total: i128,
    dist: Vec<i128>,
    pred: Vec<usize>,
    done: Vec<bool>,
    exhausted: bool,
}

impl SspState {
    pub fn new(w: &WeightMatrix) -> Result<Self> {
        let m = w.to_scaled()?;
        let n = m.n;
        let nodes = 2 * n + 2;
        let mut pot = vec![0i128; nodes];
        // Shortest distances on the initial DAG: rows 0, cols min_i(-w_ij).
        for j in 0..n {
            pot[1 + n + j] = (0..n).filter_map(|i| m.get(i, j)).map(|v| -(v as i128)).min().unwrap_or(0);
        }
        pot[nodes - 1] = (0..n).map(|j| pot[1 + n + j]).min().unwrap_or(0);
        Ok(SspState {
            m,
            pot,
            row_mate: vec![None; n],
            col_mate: vec![None; n],
            k: 0,
            total: 0,
            dist: vec![INF; nodes],
            pred: vec![usize::MAX; nodes],
            done: vec![false; nodes],
            exhausted: false,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Current `ω_k`.
    pub fn omega(&self) -> ExtReal {
        ExtReal::Fin(self.m.unscale(self.total))
    }

    pub fn matching(&self) -> Matching {
        Matching::from_row_mates(&self.row_mate)
    }

    pub fn potentials(&self) -> Potentials {
        let n = self.m.n;
        Potentials {
            row: (0..n).map(|i| self.m.unscale(self.pot[1 + i])).collect(),
            col: (0..n).map(|j| self.m.unscale(-self.pot[1 + n + j])).collect(),
        }
    }

    /// Finds the next augmenting path; returns `false` once no `(k+1)`-matching
    /// of finite weight exists.
    pub fn augment(&mut self) -> bool {
        if self.exhausted || self.k == self.m.n {
            return false;
        }
        let n = self.m.n;
        let t = 2 * n + 1;
        let row = |i: usize| 1 + i;
        let col = |j: usize| 1 + n + j;

        self.dist.fill(INF);
        self.pred.fill(usize::MAX);
        self.done.fill(false);
        let mut heap: BinaryHeap<Reverse<(i128, usize)>> = BinaryHeap::new();

        self.dist[0] = 0;
        heap.push(Reverse((0, 0)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if self.done[v] || d != self.dist[v] {
                continue;
            }
            self.done[v] = true;
            if v == t {
                break;
            }
            let pv = self.pot[v];
            let mut relax = |to: usize, cost: i128, dist: &mut Vec<i128>, pred: &mut Vec<usize>| {
                let nd = d + cost + pv - self.pot[to];
                debug_assert!(cost + pv - self.pot[to] >= 0, "negative reduced cost");
                if nd < dist[to] {
                    dist[to] = nd;
                    pred[to] = v;
                    heap.push(Reverse((nd, to)));
                }
            };
            if v == 0 {
                for i in 0..n {
                    if self.row_mate[i].is_none() {
                        relax(row(i), 0, &mut self.dist, &mut self.pred);
                    }
                }
            } else if v <= n {
                let i = v - 1;
                for j in 0..n {
                    if self.row_mate[i] == Some(j) {
                        continue;
                    }
                    if let Some(wij) = self.m.get(i, j) {
                        relax(col(j), -(wij as i128), &mut self.dist, &mut self.pred);
                    }
                }
            } else {
                let j = v - 1 - n;
                match self.col_mate[j] {
                    Some(i) => {
                        let wij = self.m.get(i, j).expect("matched edges are finite") as i128;
                        relax(row(i), wij, &mut self.dist, &mut self.pred);
                    }
                    None => relax(t, 0, &mut self.dist, &mut self.pred),
                }
            }
        }

        let dt = self.dist[t];
        if dt == INF {
            self.exhausted = true;
            return false;
        }
        for (p, &d) in self.pot.iter_mut().zip(&self.dist) {
            *p += d.min(dt);
        }

        // Walk back from t: col -> row (new edge) -> col (old mate) ...
        let mut c = self.pred[t];
        loop {
            let i = self.pred[c] - 1;
            let j = c - 1 - n;
            let prev_col = self.row_mate[i];
            self.row_mate[i] = Some(j);
            self.col_mate[j] = Some(i);
            match prev_col {
                Some(pc) => c = col(pc),
                None => break,
            }
        }
        // Path cost in the min problem equals the new potential of t.
        self.total -= self.pot[t];
        self.k += 1;
        true
    }

    /// Checks the dual invariant on all finite edges.
    pub fn check_potentials(&self) -> bool {
        let n = self.m.n;
        (0..n).all(|i| {
            (0..n).all(|j| match self.m.get(i, j) {
                None => true,
                Some(w) => {
                    let reduced = w as i128 - self.pot[1 + i] + self.pot[1 + n + j];
                    if self.row_mate[i] == Some(j) {
                        reduced == 0
                    } else {
                        reduced <= 0
                    }
                }
            })
        })
    }
}

/// `ω_0..ω_n` by successive augmentation; matchings are kept when requested.
pub fn solve_sequence(w: &WeightMatrix, want_matchings: bool) -> Result<AssignmentSequence> {
    let n = w.n();
    let mut state = SspState::new(w)?;
    let mut omegas = vec![ExtReal::NegInf; n + 1];
    let mut matchings: Vec<Option<Matching>> = vec![None; n + 1];
    omegas[0] = ExtReal::ZERO;
    if want_matchings {
        matchings[0] = Some(Matching::empty());
    }
    while state.augment() {
        let k = state.k();
        omegas[k] = state.omega();
        if want_matchings {
            matchings[k] = Some(state.matching());
        }
    }
    Ok(AssignmentSequence::new(omegas, matchings, SolverKind::Ssp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn i(v: i128) -> ExtReal {
        ExtReal::int(v)
    }

    #[test]
    fn example1_sequence() {
        let w = WeightMatrix::example1();
        let seq = solve_sequence(&w, true).unwrap();
        assert_eq!(seq.omegas, vec![i(0), i(10), i(18), i(23), i(23)]);
        assert_eq!(seq.matchings[1].as_ref().unwrap(), &Matching::from_one_based(&[(2, 1)]).unwrap());
        seq.validate_matchings(&w).unwrap();
        for k in 0..4 {
            let a = seq.matchings[k].as_ref().unwrap();
            let b = seq.matchings[k + 1].as_ref().unwrap();
            assert!(a.differs_by_one_augmenting_path(b), "k={k}");
        }
    }

    #[test]
    fn infeasible_matrix() {
        let w = WeightMatrix::filled(2, ExtReal::NegInf);
        let seq = solve_sequence(&w, true).unwrap();
        assert_eq!(seq.omegas, vec![i(0), ExtReal::NegInf, ExtReal::NegInf]);
        assert_eq!(seq.matchings[1], None);
    }

    #[test]
    fn diagonal_matrix() {
        let w = WeightMatrix::from_ints(&[&[Some(5), None], &[None, Some(3)]]);
        let seq = solve_sequence(&w, false).unwrap();
        assert_eq!(seq.omegas, vec![i(0), i(5), i(8)]);
    }

    #[test]
    fn negative_gains_are_taken() {
        let w = WeightMatrix::from_ints(&[&[Some(-1), Some(-7)], &[Some(-4), Some(-9)]]);
        let seq = solve_sequence(&w, false).unwrap();
        assert_eq!(seq.omegas, oracle::solve_sequence(&w).unwrap().omegas);
        assert_eq!(seq.omegas[2], i(-10));
    }

    #[test]
    fn rational_weights() {
        let w = WeightMatrix::from_rows(&[
            vec![ExtReal::ratio(1, 2), ExtReal::ratio(-1, 3)],
            vec![ExtReal::ratio(5, 6), ExtReal::NegInf],
        ]);
        let seq = solve_sequence(&w, true).unwrap();
        assert_eq!(seq.omegas, vec![i(0), ExtReal::ratio(5, 6), ExtReal::ratio(1, 2)]);
        seq.validate_matchings(&w).unwrap();
    }

    #[test]
    fn potentials_stay_feasible() {
        for seed in 0..40 {
            let w = crate::instance::generate(7, -6, 6, Rational::new(1, 4), seed).unwrap();
            let mut st = SspState::new(&w).unwrap();
            assert!(st.check_potentials());
            while st.augment() {
                assert!(st.check_potentials(), "seed {seed} k {}", st.k());
                let p = st.potentials();
                for (i, j) in st.matching().pairs().iter().copied() {
                    let ExtReal::Fin(wij) = w.get(i, j) else { panic!() };
                    assert_eq!(wij - p.row[i] - p.col[j], Rational::from_integer(0));
                }
            }
        }
    }
}
