//! Max-plus scalars and univariate maxpolynomials.
//!
//! A maxpolynomial `p(x) = ⊕ a_k x^k` induces the convex piecewise-affine
//! function `max_k (a_k + k·x)`. Coefficients are stored by ascending power:
//! `coeffs[k]` is the coefficient of `x^k`. For the full characteristic
//! maxpolynomial of an `n × n` matrix this means the `k`-assignment value
//! `ω_k` sits at index `n - k`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg};

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::instance::WeightMatrix;

/// Exact rational scalar.
pub type Rational = Ratio<i128>;

/// Default size limit for exhaustive enumeration.
pub const BRUTE_FORCE_BOUND: usize = 9;

/// An element of `R_max = Q ∪ {-∞}`.
///
/// The derived ordering puts `NegInf` below every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtReal {
    NegInf,
    Fin(Rational),
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal::Fin(Ratio::new_raw(0, 1));

    pub fn int(v: i128) -> Self {
        ExtReal::Fin(Rational::from_integer(v))
    }

    pub fn ratio(numer: i128, denom: i128) -> Self {
        ExtReal::Fin(Rational::new(numer, denom))
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Fin(_))
    }

    pub fn is_neg_inf(self) -> bool {
        matches!(self, ExtReal::NegInf)
    }

    pub fn finite(self) -> Option<Rational> {
        match self {
            ExtReal::Fin(r) => Some(r),
            ExtReal::NegInf => None,
        }
    }

    /// Max-plus addition `⊕`.
    pub fn oplus(self, other: Self) -> Self {
        self.max(other)
    }

    /// Subtraction with the convention `-∞ - y = -∞`. Returns `None` for
    /// `finite - (-∞)`, which is `+∞` and lies outside `R_max`.
    pub fn checked_sub(self, other: Self) -> Option<Self> {
        match (self, other) {
            (ExtReal::NegInf, _) => Some(ExtReal::NegInf),
            (ExtReal::Fin(_), ExtReal::NegInf) => None,
            (ExtReal::Fin(a), ExtReal::Fin(b)) => Some(ExtReal::Fin(a - b)),
        }
    }

    /// `k ⊙`-power, i.e. `k·self` in standard arithmetic. `x^0 = 0` even for `-∞`.
    pub fn pow(self, k: usize) -> Self {
        if k == 0 {
            return ExtReal::ZERO;
        }
        match self {
            ExtReal::NegInf => ExtReal::NegInf,
            ExtReal::Fin(r) => ExtReal::Fin(r * Rational::from_integer(k as i128)),
        }
    }
}

/// Max-plus multiplication `⊙` (standard `+`); `-∞` absorbs.
impl Add for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: ExtReal) -> ExtReal {
        match (self, rhs) {
            (ExtReal::Fin(a), ExtReal::Fin(b)) => ExtReal::Fin(a + b),
            _ => ExtReal::NegInf,
        }
    }
}

impl std::iter::Sum for ExtReal {
    fn sum<I: Iterator<Item = ExtReal>>(iter: I) -> ExtReal {
        iter.fold(ExtReal::ZERO, |acc, x| acc + x)
    }
}

impl From<Rational> for ExtReal {
    fn from(r: Rational) -> Self {
        ExtReal::Fin(r)
    }
}

impl From<i64> for ExtReal {
    fn from(v: i64) -> Self {
        ExtReal::int(v as i128)
    }
}

impl From<Option<i64>> for ExtReal {
    fn from(v: Option<i64>) -> Self {
        v.map_or(ExtReal::NegInf, ExtReal::from)
    }
}

/// Renders a rational as `p` or `p/q`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => f.write_str("-inf"),
            ExtReal::Fin(r) => f.write_str(&fmt_rational(r)),
        }
    }
}

impl Neg for ExtReal {
    type Output = Option<ExtReal>;

    /// Negation leaves `R_max` for `-∞`.
    fn neg(self) -> Option<ExtReal> {
        self.finite().map(|r| ExtReal::Fin(-r))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TermClass {
    Essential,
    SemiEssential,
    Inessential,
}

impl TermClass {
    pub fn short(self) -> &'static str {
        match self {
            TermClass::Essential => "E",
            TermClass::SemiEssential => "S",
            TermClass::Inessential => "I",
        }
    }
}

impl fmt::Display for TermClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TermClass::Essential => "essential",
            TermClass::SemiEssential => "semi-essential",
            TermClass::Inessential => "inessential",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Root {
    pub value: ExtReal,
    pub multiplicity: usize,
}

/// Tropical roots sorted ascending, `-∞` first, equal roots merged.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RootList {
    pub entries: Vec<Root>,
}

impl RootList {
    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|r| r.multiplicity).sum()
    }

    /// Roots repeated by multiplicity, ascending.
    pub fn expanded(&self) -> Vec<ExtReal> {
        self.entries
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
            .collect()
    }
}

/// A max-plus singular value with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SingularValue {
    pub value: ExtReal,
    pub multiplicity: usize,
}

impl fmt::Display for SingularValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.value, self.multiplicity)
    }
}

/// Sorts by value non-increasing and merges equal values.
pub fn merge_singular_values(mut raw: Vec<SingularValue>) -> Vec<SingularValue> {
    raw.sort_by(|a, b| b.value.cmp(&a.value));
    let mut out: Vec<SingularValue> = Vec::with_capacity(raw.len());
    for sv in raw {
        match out.last_mut() {
            Some(last) if last.value == sv.value => last.multiplicity += sv.multiplicity,
            _ => out.push(sv),
        }
    }
    out
}

/// Formal maxpolynomial with coefficients by ascending power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxPolynomial {
    coeffs: Vec<ExtReal>,
}

impl MaxPolynomial {
    /// Panics on an empty coefficient vector; the formal degree is `len - 1`.
    pub fn new(coeffs: Vec<ExtReal>) -> Self {
        assert!(!coeffs.is_empty(), "a maxpolynomial needs at least one coefficient");
        MaxPolynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[Option<i64>]) -> Self {
        Self::new(coeffs.iter().map(|&c| ExtReal::from(c)).collect())
    }

    /// Builds `⊕_k ω_k x^{n-k}` from `ω_0..ω_n`.
    pub fn from_descending(desc: &[ExtReal]) -> Self {
        Self::new(desc.iter().rev().copied().collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ExtReal] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> ExtReal {
        self.coeffs[k]
    }

    /// Coefficient of `x^{d-k}`, the indexing used for characteristic
    /// maxpolynomials.
    pub fn coeff_descending(&self, k: usize) -> ExtReal {
        self.coeffs[self.degree() - k]
    }

    pub fn is_identically_neg_inf(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_neg_inf())
    }

    fn finite_support(&self) -> Option<(usize, usize)> {
        let lo = self.coeffs.iter().position(|c| c.is_finite())?;
        let hi = self.coeffs.iter().rposition(|c| c.is_finite())?;
        Some((lo, hi))
    }

    /// `max_k (a_k + k·x)`; at `x = -∞` this is `a_0`.
    pub fn eval(&self, x: ExtReal) -> ExtReal {
        if x.is_neg_inf() {
            return self.coeffs[0];
        }
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &a)| a + x.pow(k))
            .max()
            .unwrap_or(ExtReal::NegInf)
    }

    /// Full canonical form test: the finite coefficients occupy a contiguous
    /// index range and are concave there, `2·a_k ≥ a_{k-1} + a_{k+1}`.
    pub fn is_fcf(&self) -> bool {
        let Some((lo, hi)) = self.finite_support() else {
            return true;
        };
        let fin: Vec<Rational> = match self.coeffs[lo..=hi].iter().map(|c| c.finite()).collect() {
            Some(v) => v,
            None => return false,
        };
        let two = Rational::from_integer(2);
        fin.windows(3).all(|w| two * w[1] >= w[0] + w[2])
    }

    /// Coefficientwise-maximal representation of the same function: the
    /// upper concave majorant of the finite points `(k, a_k)`. Leading and
    /// trailing `-∞` runs are kept.
    pub fn canonicalize(&self) -> MaxPolynomial {
        let Some((lo, hi)) = self.finite_support() else {
            return self.clone();
        };
        let points: Vec<(i128, Rational)> = (lo..=hi)
            .filter_map(|k| self.coeffs[k].finite().map(|a| (k as i128, a)))
            .collect();
        let hull = upper_hull(&points);

        let mut out = self.coeffs.clone();
        let mut seg = 0;
        for (k, slot) in out.iter_mut().enumerate().take(hi + 1).skip(lo) {
            let k = k as i128;
            while seg + 1 < hull.len() && hull[seg + 1].0 < k {
                seg += 1;
            }
            let (x0, y0) = hull[seg];
            let value = if x0 == k {
                y0
            } else {
                let (x1, y1) = hull[seg + 1];
                y0 + (y1 - y0) * Rational::new(k - x0, x1 - x0)
            };
            *slot = ExtReal::Fin(value);
        }
        MaxPolynomial { coeffs: out }
    }

    /// Tropical roots with multiplicities. Trailing `-∞` coefficients are
    /// dropped first, so the multiplicities sum to the index of the highest
    /// finite coefficient.
    pub fn roots(&self) -> Result<RootList> {
        let (lo, hi) = self.finite_support().ok_or(Error::DegenerateAllNegInf)?;
        let canon = MaxPolynomial::new(self.coeffs[..=hi].to_vec()).canonicalize();
        let mut entries: Vec<Root> = Vec::new();
        if lo > 0 {
            entries.push(Root { value: ExtReal::NegInf, multiplicity: lo });
        }
        for k in lo + 1..=hi {
            let lambda = canon.coeffs[k - 1]
                .checked_sub(canon.coeffs[k])
                .expect("canonical coefficients are finite on the support");
            match entries.last_mut() {
                Some(last) if last.value == lambda => last.multiplicity += 1,
                _ => entries.push(Root { value: lambda, multiplicity: 1 }),
            }
        }
        Ok(RootList { entries })
    }

    /// Classifies the term `a_k x^k` against the induced function.
    pub fn classify_term(&self, k: usize) -> Result<TermClass> {
        if k > self.degree() {
            return Err(Error::IndexOutOfRange { index: k, degree: self.degree() });
        }
        let canon = self.canonicalize();
        let a = self.coeffs[k];
        if a.is_neg_inf() || a != canon.coeffs[k] {
            return Ok(TermClass::Inessential);
        }
        let (lo, hi) = canon.finite_support().expect("a_k is finite");
        if k == lo || k == hi {
            return Ok(TermClass::Essential);
        }
        let c = |i: usize| canon.coeffs[i].finite().expect("finite on the support");
        // Slopes of the envelope switch to term k at a_{k-1} - a_k and leave
        // it at a_k - a_{k+1}; a non-empty interval means essential.
        if c(k - 1) - c(k) < c(k) - c(k + 1) {
            Ok(TermClass::Essential)
        } else {
            Ok(TermClass::SemiEssential)
        }
    }

    pub fn classify_all(&self) -> Vec<TermClass> {
        (0..=self.degree())
            .map(|k| self.classify_term(k).expect("index in range"))
            .collect()
    }
}

/// Upper hull of points sorted by strictly increasing x.
fn upper_hull(points: &[(i128, Rational)]) -> Vec<(i128, Rational)> {
    let mut hull: Vec<(i128, Rational)> = Vec::with_capacity(points.len());
    for &p in points {
        while hull.len() >= 2 {
            let (ax, ay) = hull[hull.len() - 2];
            let (bx, by) = hull[hull.len() - 1];
            // Drop b unless it lies strictly above the segment a-p.
            let cross = (by - ay) * Rational::from_integer(p.0 - ax)
                - (p.1 - ay) * Rational::from_integer(bx - ax);
            if cross.is_positive() {
                break;
            }
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

impl fmt::Display for MaxPolynomial {
    /// Descending powers joined by ` (+) `; `-∞` terms are omitted and a zero
    /// coefficient is not printed in front of a power of `x`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for k in (0..=self.degree()).rev() {
            let ExtReal::Fin(c) = self.coeffs[k] else { continue };
            let power = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            let term = if k == 0 {
                fmt_rational(&c)
            } else if c.is_zero() {
                power
            } else {
                format!("{}{}", fmt_rational(&c), power)
            };
            terms.push(term);
        }
        if terms.is_empty() {
            f.write_str("-inf")
        } else {
            f.write_str(&terms.join(" (+) "))
        }
    }
}

/// Max-plus permanent by enumerating all permutations.
pub fn maxperm(a: &WeightMatrix) -> Result<ExtReal> {
    maxperm_bounded(a, BRUTE_FORCE_BOUND)
}

pub fn maxperm_bounded(a: &WeightMatrix, bound: usize) -> Result<ExtReal> {
    let n = a.n();
    if n > bound {
        return Err(Error::SizeBound { n, bound });
    }
    fn go(a: &WeightMatrix, row: usize, used: &mut [bool], acc: ExtReal, best: &mut ExtReal) {
        if row == a.n() {
            *best = (*best).max(acc);
            return;
        }
        for j in 0..a.n() {
            let w = a.get(row, j);
            if used[j] || w.is_neg_inf() {
                continue;
            }
            used[j] = true;
            go(a, row + 1, used, acc + w, best);
            used[j] = false;
        }
    }
    let mut best = ExtReal::NegInf;
    go(a, 0, &mut vec![false; n], ExtReal::ZERO, &mut best);
    Ok(best)
}

impl PartialOrd<Rational> for ExtReal {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(self.cmp(&ExtReal::Fin(*other)))
    }
}

impl PartialEq<Rational> for ExtReal {
    fn eq(&self, other: &Rational) -> bool {
        *self == ExtReal::Fin(*other)
    }
}
