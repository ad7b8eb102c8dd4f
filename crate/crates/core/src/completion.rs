//! Assignments of the semi-essential terms between two adjacent ones.
//!
//! For optimal assignments `M_k` and `M_{k+d}` at adjacent terms of `χ̄_W`,
//! the union `M_k ∪ M_{k+d}` falls apart into shared edges, even alternating
//! paths and cycles, and odd paths. The odd paths that are augmenting for
//! `M_k` all carry the same gain `G/d` with `G = ω_{k+d} - ω_k`, so applying
//! them one at a time to `M_k` walks through optimal assignments of every
//! intermediate cardinality.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::instance::WeightMatrix;
use crate::matching::Matching;
use crate::maxplus::{ExtReal, Rational};
use crate::parametric::{self, GkResult};
use crate::sequence::{AssignmentSequence, SolverKind};

/// An alternating path of the symmetric difference. Edges are `(row, col)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AltPath {
    /// Edges of the smaller matching `M_a`.
    pub a_edges: Vec<(usize, usize)>,
    /// Edges of the larger matching `M_b`.
    pub b_edges: Vec<(usize, usize)>,
    /// Row end point, if an end point is a row.
    pub row_end: Option<usize>,
    pub closed: bool,
}

impl AltPath {
    /// `w(p ∩ M_b) - w(p ∩ M_a)`.
    pub fn gain(&self, w: &WeightMatrix) -> ExtReal {
        let sum = |es: &[(usize, usize)]| es.iter().map(|&(i, j)| w.get(i, j)).sum::<ExtReal>();
        sum(&self.b_edges).checked_sub(sum(&self.a_edges)).unwrap_or(ExtReal::NegInf)
    }
}

/// Components of `M_a ∪ M_b`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PathDecomposition {
    pub shared: Vec<(usize, usize)>,
    /// Even paths and closed cycles.
    pub alternating_even: Vec<AltPath>,
    /// Augmenting for `M_a`: one more `M_b` edge than `M_a` edges.
    pub augmenting_fwd: Vec<AltPath>,
    /// Augmenting for `M_b`.
    pub augmenting_bwd: Vec<AltPath>,
    /// Gain of each path in `augmenting_fwd`, same order.
    pub gains: Vec<ExtReal>,
}

/// Splits `M_a ∪ M_b` into its components. Requires `|M_a| ≤ |M_b|`.
pub fn decompose(w: &WeightMatrix, a: &Matching, b: &Matching) -> Result<PathDecomposition> {
    if a.len() > b.len() {
        return Err(Error::InvalidParameter(format!(
            "first matching has {} edges, second only {}",
            a.len(),
            b.len()
        )));
    }
    let n = w.n();
    if !a.fits(n) || !b.fits(n) {
        return Err(Error::InvalidMatching(format!("matching does not fit a {n}×{n} matrix")));
    }
    let mut a_row = vec![None; n];
    let mut a_col = vec![None; n];
    let mut b_row = vec![None; n];
    let mut b_col = vec![None; n];
    for &(i, j) in a.pairs() {
        a_row[i] = Some(j);
        a_col[j] = Some(i);
    }
    for &(i, j) in b.pairs() {
        b_row[i] = Some(j);
        b_col[j] = Some(i);
    }

    let mut out = PathDecomposition::default();
    let mut row_seen = vec![false; n];
    let mut col_seen = vec![false; n];
    for &(i, j) in a.pairs() {
        if b_row[i] == Some(j) {
            out.shared.push((i, j));
            row_seen[i] = true;
            col_seen[j] = true;
        }
    }

    #[derive(Clone, Copy)]
    enum V {
        Row(usize),
        Col(usize),
    }

    // Degree of a vertex in the difference, i.e. the number of non-shared
    // incident edges among its a- and b-mates.
    let row_deg = |i: usize| {
        let shared = a_row[i].is_some() && a_row[i] == b_row[i];
        if shared {
            0
        } else {
            a_row[i].is_some() as usize + b_row[i].is_some() as usize
        }
    };
    let col_deg = |j: usize| {
        let shared = a_col[j].is_some() && a_col[j] == b_col[j];
        if shared {
            0
        } else {
            a_col[j].is_some() as usize + b_col[j].is_some() as usize
        }
    };

    let walk = |start: V, row_seen: &mut Vec<bool>, col_seen: &mut Vec<bool>| -> AltPath {
        let mut path = AltPath { a_edges: Vec::new(), b_edges: Vec::new(), row_end: None, closed: false };
        if let V::Row(i) = start {
            path.row_end = Some(i);
        }
        // The first edge is whichever one exists; afterwards the matchings alternate.
        let mut cur = start;
        let mut use_a = match start {
            V::Row(i) => a_row[i].is_some(),
            V::Col(j) => a_col[j].is_some(),
        };
        loop {
            match cur {
                V::Row(i) => row_seen[i] = true,
                V::Col(j) => col_seen[j] = true,
            }
            let next = match (cur, use_a) {
                (V::Row(i), true) => a_row[i].map(|j| ((i, j), V::Col(j))),
                (V::Row(i), false) => b_row[i].map(|j| ((i, j), V::Col(j))),
                (V::Col(j), true) => a_col[j].map(|i| ((i, j), V::Row(i))),
                (V::Col(j), false) => b_col[j].map(|i| ((i, j), V::Row(i))),
            };
            let Some((edge, to)) = next else { break };
            if use_a {
                path.a_edges.push(edge);
            } else {
                path.b_edges.push(edge);
            }
            let back = match to {
                V::Row(i) => row_seen[i],
                V::Col(j) => col_seen[j],
            };
            if back {
                path.closed = true;
                break;
            }
            cur = to;
            use_a = !use_a;
        }
        if !path.closed {
            if let V::Row(i) = cur {
                path.row_end.get_or_insert(i);
            }
        }
        path
    };

    let mut paths = Vec::new();
    for i in 0..n {
        if !row_seen[i] && row_deg(i) == 1 {
            paths.push(walk(V::Row(i), &mut row_seen, &mut col_seen));
        }
    }
    for j in 0..n {
        if !col_seen[j] && col_deg(j) == 1 {
            paths.push(walk(V::Col(j), &mut row_seen, &mut col_seen));
        }
    }
    for i in 0..n {
        if !row_seen[i] && row_deg(i) == 2 {
            let mut cycle = walk(V::Row(i), &mut row_seen, &mut col_seen);
            cycle.row_end = None;
            paths.push(cycle);
        }
    }

    for p in paths {
        match p.b_edges.len().cmp(&p.a_edges.len()) {
            std::cmp::Ordering::Greater => {
                out.gains.push(p.gain(w));
                out.augmenting_fwd.push(p);
            }
            std::cmp::Ordering::Less => out.augmenting_bwd.push(p),
            std::cmp::Ordering::Equal => out.alternating_even.push(p),
        }
    }
    Ok(out)
}

/// Gains observed on one gap between reported assignments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapReport {
    pub k: usize,
    pub kd: usize,
    /// `G/d`.
    pub expected_gain: Rational,
    /// Gains of the forward augmenting paths.
    pub gains: Vec<ExtReal>,
    pub backward_paths: usize,
}

impl GapReport {
    pub fn violations(&self) -> usize {
        self.gains.iter().filter(|g| **g != ExtReal::Fin(self.expected_gain)).count()
    }
}

/// Matchings `M_{k+1}..M_{k+d-1}` between `M_k` and `M_{k+d}`.
pub fn fill_in(w: &WeightMatrix, m_k: &Matching, m_kd: &Matching) -> Result<Vec<Matching>> {
    fill_in_with_report(w, m_k, m_kd).map(|(ms, _)| ms)
}

/// [`fill_in`] together with the observed gains.
pub fn fill_in_with_report(w: &WeightMatrix, m_k: &Matching, m_kd: &Matching) -> Result<(Vec<Matching>, GapReport)> {
    let (k, kd) = (m_k.len(), m_kd.len());
    let (plan, report) = inspect_gap(w, m_k, m_kd)?;
    if report.violations() > 0 {
        return Err(Error::NotAdjacent {
            k,
            kd,
            reason: format!(
                "augmenting path gains {} differ from {}",
                report.gains.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", "),
                ExtReal::Fin(report.expected_gain)
            ),
        });
    }
    let d = kd - k;
    if plan.len() < d {
        return Err(Error::NotAdjacent {
            k,
            kd,
            reason: format!("only {} augmenting paths for a gap of {d}", plan.len()),
        });
    }

    let mut row_mate = vec![None; w.n()];
    for &(i, j) in m_k.pairs() {
        row_mate[i] = Some(j);
    }
    let mut out = Vec::with_capacity(d.saturating_sub(1));
    for p in plan.iter().take(d.saturating_sub(1)) {
        for &(i, _) in &p.a_edges {
            row_mate[i] = None;
        }
        for &(i, j) in &p.b_edges {
            row_mate[i] = Some(j);
        }
        out.push(Matching::from_row_mates(&row_mate));
    }
    Ok((out, report))
}

/// Forward augmenting paths in application order (gain descending, then
/// smallest row end point) and the gain report, without applying anything.
pub fn inspect_gap(w: &WeightMatrix, m_k: &Matching, m_kd: &Matching) -> Result<(Vec<AltPath>, GapReport)> {
    let (k, kd) = (m_k.len(), m_kd.len());
    let (ExtReal::Fin(lo), ExtReal::Fin(hi)) = (m_k.weight(w), m_kd.weight(w)) else {
        return Err(Error::InvalidMatching("gap end points must have finite weight".into()));
    };
    if kd <= k {
        return Err(Error::InvalidParameter(format!("empty gap from k={k} to k={kd}")));
    }
    let d = (kd - k) as i128;
    let expected_gain = (hi - lo) / Rational::from_integer(d);
    let dec = decompose(w, m_k, m_kd)?;
    let report = GapReport {
        k,
        kd,
        expected_gain,
        gains: dec.gains.clone(),
        backward_paths: dec.augmenting_bwd.len(),
    };
    let mut plan: Vec<(ExtReal, AltPath)> = dec.gains.into_iter().zip(dec.augmenting_fwd).collect();
    plan.sort_by(|(ga, pa), (gb, pb)| gb.partial_cmp(ga).unwrap().then(pa.row_end.cmp(&pb.row_end)));
    Ok((plan.into_iter().map(|(_, p)| p).collect(), report))
}

/// Per-gap reports of one completion.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompletionReport {
    pub gaps: Vec<GapReport>,
}

impl CompletionReport {
    pub fn violations(&self) -> usize {
        self.gaps.iter().map(GapReport::violations).sum()
    }
}

/// Full sequence from a parametric run: reported assignments are kept and
/// every gap between consecutive ones, starting from `M_0 = ∅`, is filled.
pub fn complete_sequence(w: &WeightMatrix, gk: &GkResult) -> Result<AssignmentSequence> {
    complete_sequence_with_report(w, gk).map(|(s, _)| s)
}

pub fn complete_sequence_with_report(
    w: &WeightMatrix,
    gk: &GkResult,
) -> Result<(AssignmentSequence, CompletionReport)> {
    let n = w.n();
    let mut omegas = vec![ExtReal::NegInf; n + 1];
    let mut matchings: Vec<Option<Matching>> = vec![None; n + 1];
    omegas[0] = ExtReal::ZERO;
    matchings[0] = Some(Matching::empty());

    let mut anchors: BTreeMap<usize, Matching> = BTreeMap::new();
    anchors.insert(0, Matching::empty());
    for (&k, (omega, m)) in &gk.essential {
        if m.len() != k || m.weight(w) != *omega {
            return Err(Error::InvalidMatching(format!("reported assignment at k={k} is inconsistent")));
        }
        anchors.insert(k, m.clone());
    }

    let mut report = CompletionReport::default();
    let mut prev: Option<(usize, &Matching)> = None;
    for (&k, m) in &anchors {
        omegas[k] = m.weight(w);
        matchings[k] = Some(m.clone());
        if let Some((pk, pm)) = prev {
            if k - pk >= 2 {
                let (fills, gap) = match fill_in_with_report(w, pm, m) {
                    Ok(r) => r,
                    Err(e) => {
                        if let Ok((_, gap)) = inspect_gap(w, pm, m) {
                            report.gaps.push(gap);
                        }
                        return Err(e);
                    }
                };
                report.gaps.push(gap);
                for (idx, fm) in fills.into_iter().enumerate() {
                    omegas[pk + 1 + idx] = fm.weight(w);
                    matchings[pk + 1 + idx] = Some(fm);
                }
            }
        }
        prev = Some((k, m));
    }
    Ok((AssignmentSequence::new(omegas, matchings, SolverKind::GkFill), report))
}

/// Parametric sweep followed by completion.
pub fn solve_sequence(w: &WeightMatrix) -> Result<AssignmentSequence> {
    let gk = parametric::run(w)?;
    complete_sequence(w, &gk)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::generate;
    use crate::oracle;

    fn m(pairs: &[(usize, usize)]) -> Matching {
        Matching::from_one_based(pairs).unwrap()
    }

    fn i(v: i128) -> ExtReal {
        ExtReal::int(v)
    }

    #[test]
    fn example1_decomposition() {
        let w = WeightMatrix::example1();
        let dec = decompose(&w, &m(&[(2, 1)]), &m(&[(2, 1), (1, 2), (3, 3)])).unwrap();
        assert_eq!(dec.shared, vec![(1, 0)]);
        let fwd: Vec<&[(usize, usize)]> = dec.augmenting_fwd.iter().map(|p| p.b_edges.as_slice()).collect();
        assert_eq!(fwd, vec![&[(0, 1)][..], &[(2, 2)][..]]);
        assert_eq!(dec.gains, vec![i(8), i(5)]);
        assert!(dec.augmenting_bwd.is_empty() && dec.alternating_even.is_empty());
    }

    #[test]
    fn identical_matchings_share_everything() {
        let w = WeightMatrix::example1();
        let a = m(&[(1, 2), (2, 1)]);
        let dec = decompose(&w, &a, &a).unwrap();
        assert_eq!(dec.shared.len(), 2);
        assert!(dec.augmenting_fwd.is_empty() && dec.alternating_even.is_empty());
    }

    #[test]
    fn long_paths_and_cycles() {
        let w = WeightMatrix::zeros(5);
        // a: 1-1, 2-2 ; b: 1-2, 2-3, 3-1 → path r3 c1 r1 c2 r2 c3 (augmenting for a).
        // a: 4-4, 5-5 ; b: 4-5, 5-4 → cycle.
        let a = m(&[(1, 1), (2, 2), (4, 4), (5, 5)]);
        let b = m(&[(1, 2), (2, 3), (3, 1), (4, 5), (5, 4)]);
        let dec = decompose(&w, &a, &b).unwrap();
        assert_eq!(dec.augmenting_fwd.len(), 1);
        let p = &dec.augmenting_fwd[0];
        assert_eq!((p.a_edges.len(), p.b_edges.len(), p.row_end), (2, 3, Some(2)));
        assert_eq!(dec.alternating_even.len(), 1);
        assert!(dec.alternating_even[0].closed);
        assert_eq!(dec.gains, vec![i(0)]);
    }

    #[test]
    fn backward_paths_are_classified() {
        let w = WeightMatrix::zeros(3);
        let a = m(&[(1, 1)]);
        let b = m(&[(2, 2), (3, 3)]);
        let dec = decompose(&w, &a, &b).unwrap();
        assert_eq!(dec.augmenting_bwd.len(), 1);
        assert_eq!(dec.augmenting_fwd.len(), 2);
    }

    #[test]
    fn zero_two_by_two() {
        let w = WeightMatrix::zeros(2);
        let dec = decompose(&w, &Matching::empty(), &m(&[(1, 1), (2, 2)])).unwrap();
        assert_eq!(dec.gains, vec![i(0), i(0)]);
        let fills = fill_in(&w, &Matching::empty(), &m(&[(1, 1), (2, 2)])).unwrap();
        assert_eq!(fills, vec![m(&[(1, 1)])]);
    }

    #[test]
    fn constant_two_by_two() {
        let w = WeightMatrix::from_ints(&[&[Some(2), Some(2)], &[Some(2), Some(2)]]);
        let (fills, rep) = fill_in_with_report(&w, &Matching::empty(), &m(&[(1, 2), (2, 1)])).unwrap();
        assert_eq!(fills.len(), 1);
        assert_eq!(fills[0].weight(&w), i(2));
        assert_eq!(rep.gains, vec![i(2), i(2)]);
        assert_eq!(rep.expected_gain, Rational::from_integer(2));
    }

    #[test]
    fn unequal_gains_are_rejected() {
        let w = WeightMatrix::from_ints(&[&[Some(5), Some(0)], &[Some(0), Some(1)]]);
        let err = fill_in(&w, &Matching::empty(), &m(&[(1, 1), (2, 2)])).unwrap_err();
        assert!(matches!(err, Error::NotAdjacent { k: 0, kd: 2, .. }));
    }

    #[test]
    fn zero_matrix_is_filled_completely() {
        for n in 1..=6 {
            let w = WeightMatrix::zeros(n);
            let gk = parametric::run(&w).unwrap();
            assert_eq!(gk.essential.keys().copied().collect::<Vec<_>>(), vec![n]);
            let seq = complete_sequence(&w, &gk).unwrap();
            assert!(seq.omegas.iter().all(|o| *o == i(0)));
            seq.validate_matchings(&w).unwrap();
        }
    }

    #[test]
    fn example1_passthrough() {
        let w = WeightMatrix::example1();
        let (seq, rep) = complete_sequence_with_report(&w, &parametric::run(&w).unwrap()).unwrap();
        assert!(rep.gaps.is_empty());
        assert_eq!(seq.omegas, vec![i(0), i(10), i(18), i(23), i(23)]);
    }

    #[test]
    fn trailing_infeasible_indices() {
        let w = WeightMatrix::from_ints(&[&[Some(1), None, None], &[Some(2), None, None], &[None, Some(3), None]]);
        let seq = solve_sequence(&w).unwrap();
        assert_eq!(seq.omegas, vec![i(0), i(3), i(5), ExtReal::NegInf]);
        assert_eq!(seq.matchings[3], None);
        seq.validate_matchings(&w).unwrap();
    }

    #[test]
    fn matches_oracle_on_small_ranges() {
        for seed in 0..300u64 {
            let n = 1 + (seed % 6) as usize;
            let w = generate(n, 0, 2, Rational::new(1, 6), seed).unwrap();
            let (seq, rep) = complete_sequence_with_report(&w, &parametric::run(&w).unwrap()).unwrap();
            assert_eq!(rep.violations(), 0);
            assert_eq!(seq.omegas, oracle::solve_sequence(&w).unwrap().omegas, "seed {seed}");
            seq.validate_matchings(&w).unwrap();
        }
    }

    #[test]
    fn paths_are_disjoint() {
        for seed in 0..50u64 {
            let w = generate(12, 0, 3, Rational::from_integer(0), seed).unwrap();
            let gk = parametric::run(&w).unwrap();
            let mut prev = Matching::empty();
            for (_, mk) in gk.essential.values() {
                let (plan, _) = inspect_gap(&w, &prev, mk).unwrap();
                let mut rows = Vec::new();
                let mut cols = Vec::new();
                for p in &plan {
                    let mut pr: Vec<usize> = p.a_edges.iter().chain(&p.b_edges).map(|e| e.0).collect();
                    let mut pc: Vec<usize> = p.a_edges.iter().chain(&p.b_edges).map(|e| e.1).collect();
                    pr.sort_unstable();
                    pr.dedup();
                    pc.sort_unstable();
                    pc.dedup();
                    rows.extend(pr);
                    cols.extend(pc);
                }
                let (nr, nc) = (rows.len(), cols.len());
                rows.sort_unstable();
                rows.dedup();
                cols.sort_unstable();
                cols.dedup();
                assert_eq!((rows.len(), cols.len()), (nr, nc), "seed {seed}");
                prev = mk.clone();
            }
        }
    }
}
