//! Exhaustive ground truth for small matrices.
//!
//! Matchings of size `k` are visited with row subsets in lexicographic order
//! and, inside each subset, column assignments in lexicographic order. The
//! first matching reaching the maximum is the witness. Edges of weight `-∞`
//! are skipped, so a `-∞` optimum comes without a witness.

use crate::error::{Error, Result};
use crate::instance::WeightMatrix;
use crate::matching::Matching;
use crate::maxplus::{ExtReal, MaxPolynomial, BRUTE_FORCE_BOUND};
use crate::sequence::{AssignmentSequence, SolverKind};

fn check_bound(w: &WeightMatrix, bound: usize) -> Result<()> {
    if w.n() > bound {
        Err(Error::SizeBound { n: w.n(), bound })
    } else {
        Ok(())
    }
}

/// Visits every finite-weight matching of size `k` in the documented order.
fn for_each_k_matching(w: &WeightMatrix, k: usize, mut visit: impl FnMut(ExtReal, &[(usize, usize)])) {
    let n = w.n();
    let mut rows: Vec<usize> = Vec::with_capacity(k);
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(k);
    let mut used = vec![false; n];

    fn assign(
        w: &WeightMatrix,
        rows: &[usize],
        pos: usize,
        used: &mut [bool],
        pairs: &mut Vec<(usize, usize)>,
        acc: ExtReal,
        visit: &mut dyn FnMut(ExtReal, &[(usize, usize)]),
    ) {
        if pos == rows.len() {
            visit(acc, pairs);
            return;
        }
        let i = rows[pos];
        for j in 0..w.n() {
            let e = w.get(i, j);
            if used[j] || e.is_neg_inf() {
                continue;
            }
            used[j] = true;
            pairs.push((i, j));
            assign(w, rows, pos + 1, used, pairs, acc + e, visit);
            pairs.pop();
            used[j] = false;
        }
    }

    fn subsets(
        w: &WeightMatrix,
        k: usize,
        start: usize,
        rows: &mut Vec<usize>,
        used: &mut [bool],
        pairs: &mut Vec<(usize, usize)>,
        visit: &mut dyn FnMut(ExtReal, &[(usize, usize)]),
    ) {
        if rows.len() == k {
            assign(w, rows, 0, used, pairs, ExtReal::ZERO, visit);
            return;
        }
        let remaining = k - rows.len();
        for i in start..=w.n() - remaining {
            rows.push(i);
            subsets(w, k, i + 1, rows, used, pairs, visit);
            rows.pop();
        }
    }

    subsets(w, k, 0, &mut rows, &mut used, &mut pairs, &mut visit);
}

/// Best `k`-matching and its first-found witness.
pub fn brute_force_k(w: &WeightMatrix, k: usize) -> Result<(ExtReal, Option<Matching>)> {
    brute_force_k_bounded(w, k, BRUTE_FORCE_BOUND)
}

pub fn brute_force_k_bounded(w: &WeightMatrix, k: usize, bound: usize) -> Result<(ExtReal, Option<Matching>)> {
    check_bound(w, bound)?;
    if k > w.n() {
        return Err(Error::InvalidParameter(format!("k={k} exceeds n={}", w.n())));
    }
    let mut best = ExtReal::NegInf;
    let mut witness: Option<Vec<(usize, usize)>> = None;
    for_each_k_matching(w, k, |value, pairs| {
        if witness.is_none() || value > best {
            best = value;
            witness = Some(pairs.to_vec());
        }
    });
    let witness = witness.map(|p| Matching::new(p).expect("enumeration yields matchings"));
    Ok((best, witness))
}

/// Every optimal `k`-matching (finite optimum only).
pub fn all_optimal_k(w: &WeightMatrix, k: usize) -> Result<Vec<Matching>> {
    check_bound(w, BRUTE_FORCE_BOUND)?;
    let (best, _) = brute_force_k(w, k)?;
    let mut out = Vec::new();
    if best.is_neg_inf() {
        return Ok(out);
    }
    for_each_k_matching(w, k, |value, pairs| {
        if value == best {
            out.push(Matching::new(pairs.to_vec()).expect("enumeration yields matchings"));
        }
    });
    Ok(out)
}

/// Some optimal `(k+1)`-matching differs from some optimal `k`-matching by a
/// single augmenting path. Vacuously true when `ω_{k+1}` is `-∞`.
pub fn nested_witness_exists(w: &WeightMatrix, k: usize) -> Result<bool> {
    let upper = all_optimal_k(w, k + 1)?;
    if upper.is_empty() {
        return Ok(true);
    }
    let lower = all_optimal_k(w, k)?;
    Ok(lower.iter().any(|a| upper.iter().any(|b| a.differs_by_one_augmenting_path(b))))
}

/// `χ̄_W` with the coefficient of `x^{n-k}` equal to the best `k`-matching.
pub fn brute_force_fullchar(w: &WeightMatrix) -> Result<MaxPolynomial> {
    let seq = solve_sequence(w)?;
    Ok(seq.polynomial())
}

/// Whole sequence by enumeration, with first-found witnesses.
pub fn solve_sequence(w: &WeightMatrix) -> Result<AssignmentSequence> {
    check_bound(w, BRUTE_FORCE_BOUND)?;
    let mut omegas = Vec::with_capacity(w.n() + 1);
    let mut matchings = Vec::with_capacity(w.n() + 1);
    for k in 0..=w.n() {
        let (value, witness) = brute_force_k(w, k)?;
        omegas.push(value);
        matchings.push(witness);
    }
    Ok(AssignmentSequence::new(omegas, matchings, SolverKind::Brute))
}
