use std::fmt;

use crate::error::{Error, Result};
use crate::instance::WeightMatrix;
use crate::matching::Matching;
use crate::maxplus::{merge_singular_values, ExtReal, MaxPolynomial, SingularValue, TermClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolverKind {
    Brute,
    Ssp,
    GkFill,
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverKind::Brute => "brute",
            SolverKind::Ssp => "ssp",
            SolverKind::GkFill => "gk-fill",
        })
    }
}

/// The values `ω_0..ω_n` of the k-assignments of one matrix, optionally
/// with a witness matching per `k`.
///
/// `ω_0 = 0` is the empty product. Once some `ω_k` is `-∞` every later one is
/// as well and carries no matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssignmentSequence {
    pub n: usize,
    pub omegas: Vec<ExtReal>,
    pub matchings: Vec<Option<Matching>>,
    /// Class of the term `ω_k x^{n-k}` of the full characteristic maxpolynomial.
    pub term_class: Vec<TermClass>,
    pub source: SolverKind,
}

impl AssignmentSequence {
    /// Fills `term_class` from the omegas.
    pub fn new(omegas: Vec<ExtReal>, matchings: Vec<Option<Matching>>, source: SolverKind) -> Self {
        let n = omegas.len() - 1;
        assert_eq!(matchings.len(), n + 1);
        let poly = MaxPolynomial::from_descending(&omegas);
        let mut term_class: Vec<TermClass> = poly.classify_all();
        term_class.reverse();
        AssignmentSequence { n, omegas, matchings, term_class, source }
    }

    /// `χ̄_W(x) = ⊕_k ω_k x^{n-k}`.
    pub fn polynomial(&self) -> MaxPolynomial {
        MaxPolynomial::from_descending(&self.omegas)
    }

    /// Tropical roots of the polynomial, non-increasing, `-∞` last.
    pub fn singular_values(&self) -> Vec<SingularValue> {
        let roots = self.polynomial().roots().expect("leading coefficient is 0");
        merge_singular_values(
            roots
                .entries
                .iter()
                .map(|r| SingularValue { value: r.value, multiplicity: r.multiplicity })
                .collect(),
        )
    }

    /// Marginal gains `h_k = ω_k - ω_{k-1}` for `k = 1..n`, `-∞` once infeasible.
    pub fn gains(&self) -> Vec<ExtReal> {
        self.omegas
            .windows(2)
            .map(|w| w[1].checked_sub(w[0]).expect("-inf is absorbing along the sequence"))
            .collect()
    }

    /// Non-increasing gains, i.e. the sequence `0, ω_1, .., ω_n` is concave.
    pub fn is_concave(&self) -> bool {
        if self.omegas.windows(2).any(|w| w[0].is_neg_inf() && w[1].is_finite()) {
            return false;
        }
        self.gains().windows(2).all(|g| g[0] >= g[1])
    }

    /// Checks every reported matching: size `k`, weight `ω_k`, indices in range.
    pub fn validate_matchings(&self, w: &WeightMatrix) -> Result<()> {
        for (k, m) in self.matchings.iter().enumerate() {
            let Some(m) = m else {
                if self.omegas[k].is_finite() && self.source != SolverKind::Brute {
                    return Err(Error::InvalidMatching(format!("missing matching for k={k}")));
                }
                continue;
            };
            if m.len() != k || !m.fits(w.n()) {
                return Err(Error::InvalidMatching(format!("k={k}: matching {m} has wrong size")));
            }
            if m.weight(w) != self.omegas[k] {
                return Err(Error::InvalidMatching(format!(
                    "k={k}: weight {} differs from omega {}",
                    m.weight(w),
                    self.omegas[k]
                )));
            }
        }
        Ok(())
    }
}
