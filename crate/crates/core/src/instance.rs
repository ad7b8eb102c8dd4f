//! Instances: the text format, padding of rectangular inputs, the min/max
//! transform and seeded random generation.
//!
//! File format:
//!
//! ```text
//! # comment
//! max 2 3
//! 0 1.5 -inf
//! 2 -3 4
//! ```
//!
//! The header is `max|min <rows> <cols>`, followed by one line per row with
//! `cols` whitespace-separated tokens. A token is a decimal, `-inf` (an absent
//! edge of a `max` instance) or `inf` (an absent edge of a `min` instance).
//! Lines whose first non-blank character is `#` and blank lines are ignored.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::maxplus::{fmt_rational, ExtReal, Rational};

/// Identifier of the generator behind [`generate`], written into generated files.
pub const GENERATOR_ID: &str = "chacha8-rand_chacha-0.9/seed_from_u64";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    Max,
    Min,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::Max => "max",
            Objective::Min => "min",
        })
    }
}

/// A possibly rectangular instance as written in a file. `None` entries are
/// absent edges (`-inf` for max, `inf` for min).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceSpec {
    pub rows: usize,
    pub cols: usize,
    pub objective: Objective,
    pub entries: Vec<Option<Rational>>,
}

impl InstanceSpec {
    pub fn get(&self, i: usize, j: usize) -> Option<Rational> {
        self.entries[i * self.cols + j]
    }
}

/// Square `n × n` max-plus weight matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMatrix {
    n: usize,
    entries: Vec<ExtReal>,
}

impl WeightMatrix {
    pub fn new(n: usize, entries: Vec<ExtReal>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMatrix("size must be positive".into()));
        }
        if entries.len() != n * n {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(WeightMatrix { n, entries })
    }

    /// Panics unless `rows` is square and non-empty.
    pub fn from_rows(rows: &[Vec<ExtReal>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        WeightMatrix::new(n, rows.concat()).expect("non-empty square matrix")
    }

    /// Integer convenience constructor; `None` is `-∞`.
    pub fn from_ints(rows: &[&[Option<i64>]]) -> Self {
        let rows: Vec<Vec<ExtReal>> =
            rows.iter().map(|r| r.iter().map(|&v| ExtReal::from(v)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(n: usize) -> Self {
        WeightMatrix::new(n, vec![ExtReal::ZERO; n * n]).expect("positive size")
    }

    pub fn filled(n: usize, v: ExtReal) -> Self {
        WeightMatrix::new(n, vec![v; n * n]).expect("positive size")
    }

    /// The 4×4 matrix used as the running example throughout the docs and tests.
    pub fn example1() -> Self {
        Self::from_ints(&[
            &[None, Some(8), Some(5), Some(0)],
            &[Some(10), Some(8), Some(5), None],
            &[Some(8), Some(0), Some(5), Some(4)],
            &[Some(5), Some(4), None, None],
        ])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> ExtReal {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[ExtReal] {
        &self.entries
    }

    pub fn max_entry(&self) -> ExtReal {
        self.entries.iter().copied().max().unwrap_or(ExtReal::NegInf)
    }

    /// Multiplies all finite entries by the least common denominator so that
    /// every weight becomes an integer.
    pub fn to_scaled(&self) -> Result<ScaledMatrix> {
        let mut scale: i128 = 1;
        for r in self.entries.iter().filter_map(|e| e.finite()) {
            scale = scale.lcm(r.denom());
            if scale > i64::MAX as i128 {
                return Err(Error::Overflow);
            }
        }
        let mut w = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            w.push(match e {
                ExtReal::NegInf => None,
                ExtReal::Fin(r) => {
                    let v = r.numer().checked_mul(scale / r.denom()).ok_or(Error::Overflow)?;
                    // Leave headroom so that sums of n weights stay far from overflow.
                    if v.abs() > (i64::MAX / 4) as i128 {
                        return Err(Error::Overflow);
                    }
                    Some(v as i64)
                }
            });
        }
        Ok(ScaledMatrix { n: self.n, scale, w })
    }
}

impl fmt::Display for WeightMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Integer image of a [`WeightMatrix`]: `w[i*n+j] = scale · W_ij`.
#[derive(Clone, Debug)]
pub struct ScaledMatrix {
    pub n: usize,
    pub scale: i128,
    pub w: Vec<Option<i64>>,
}

impl ScaledMatrix {
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Option<i64> {
        self.w[i * self.n + j]
    }

    pub fn unscale(&self, v: i128) -> Rational {
        Rational::new(v, self.scale)
    }

    pub fn unscale_ext(&self, v: Option<i128>) -> ExtReal {
        v.map_or(ExtReal::NegInf, |v| ExtReal::Fin(self.unscale(v)))
    }
}

/// A reported objective value; minimisation can produce `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObjValue {
    NegInf,
    Fin(Rational),
    PosInf,
}

impl fmt::Display for ObjValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjValue::NegInf => f.write_str("-inf"),
            ObjValue::PosInf => f.write_str("inf"),
            ObjValue::Fin(r) => f.write_str(&fmt_rational(r)),
        }
    }
}

/// Records how a user instance was turned into a square max instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transform {
    pub objective: Objective,
    pub rows: usize,
    pub cols: usize,
    pub n: usize,
}

impl Transform {
    pub fn is_identity(&self) -> bool {
        self.objective == Objective::Max && self.rows == self.cols
    }

    /// Maps a max-plus value of the normalised matrix back to the user's objective.
    pub fn report(&self, v: ExtReal) -> ObjValue {
        match (self.objective, v) {
            (Objective::Max, ExtReal::NegInf) => ObjValue::NegInf,
            (Objective::Max, ExtReal::Fin(r)) => ObjValue::Fin(r),
            (Objective::Min, ExtReal::NegInf) => ObjValue::PosInf,
            (Objective::Min, ExtReal::Fin(r)) => ObjValue::Fin(-r),
        }
    }
}

/// Pads to `n = max(rows, cols)` with absent edges and negates a min instance.
pub fn normalize(spec: &InstanceSpec) -> (WeightMatrix, Transform) {
    let n = spec.rows.max(spec.cols);
    let mut entries = vec![ExtReal::NegInf; n * n];
    for i in 0..spec.rows {
        for j in 0..spec.cols {
            entries[i * n + j] = match (spec.objective, spec.get(i, j)) {
                (_, None) => ExtReal::NegInf,
                (Objective::Max, Some(r)) => ExtReal::Fin(r),
                (Objective::Min, Some(r)) => ExtReal::Fin(-r),
            };
        }
    }
    let transform = Transform { objective: spec.objective, rows: spec.rows, cols: spec.cols, n };
    (WeightMatrix::new(n, entries).expect("rows, cols >= 1"), transform)
}

fn parse_err(line: usize, column: usize, reason: impl Into<String>) -> Error {
    Error::Parse { line, column, reason: reason.into() }
}

/// Parses a decimal such as `-12`, `3.25` or `.5` exactly.
pub fn parse_decimal(tok: &str) -> Option<Rational> {
    let (neg, body) = match tok.as_bytes().first()? {
        b'-' => (true, &tok[1..]),
        b'+' => (false, &tok[1..]),
        _ => (false, tok),
    };
    let (int, frac) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    // Keep numerator and denominator comfortably inside i128.
    if int.len() + frac.len() > 30 {
        return None;
    }
    let digits = format!("{int}{frac}");
    let numer: i128 = if digits.is_empty() { 0 } else { digits.parse().ok()? };
    let denom = 10i128.pow(frac.len() as u32);
    let r = Rational::new(numer, denom);
    Some(if neg { -r } else { r })
}

/// Parses the instance text format.
pub fn parse(text: &str) -> Result<InstanceSpec> {
    let mut header: Option<(Objective, usize, usize)> = None;
    let mut entries: Vec<Option<Rational>> = Vec::new();
    let mut rows_seen = 0;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<(usize, &str)> = tokenize(raw);

        let Some((objective, rows, cols)) = header else {
            if tokens.len() != 3 {
                return Err(parse_err(line_no, 1, "header must be `max|min <rows> <cols>`"));
            }
            let objective = match tokens[0].1 {
                "max" => Objective::Max,
                "min" => Objective::Min,
                other => {
                    return Err(parse_err(line_no, tokens[0].0, format!("unknown objective `{other}`")))
                }
            };
            let dim = |(col, tok): (usize, &str), what: &str| -> Result<usize> {
                match tok.parse::<usize>() {
                    Ok(v) if v >= 1 => Ok(v),
                    _ => Err(parse_err(line_no, col, format!("{what} must be a positive integer, got `{tok}`"))),
                }
            };
            let rows = dim(tokens[1], "rows")?;
            let cols = dim(tokens[2], "cols")?;
            entries.reserve(rows * cols);
            header = Some((objective, rows, cols));
            continue;
        };

        if rows_seen == rows {
            return Err(parse_err(line_no, tokens[0].0, format!("more than {rows} rows")));
        }
        if tokens.len() != cols {
            let col = tokens.get(cols).map_or(raw.len() + 1, |t| t.0);
            return Err(parse_err(
                line_no,
                col,
                format!("expected {cols} entries, found {}", tokens.len()),
            ));
        }
        for (col, tok) in tokens {
            let value = match (tok, objective) {
                ("-inf", Objective::Max) | ("inf", Objective::Min) => None,
                ("-inf", Objective::Min) => {
                    return Err(parse_err(line_no, col, "`-inf` is not allowed in a min instance"))
                }
                ("inf", Objective::Max) => {
                    return Err(parse_err(line_no, col, "`inf` is not allowed in a max instance"))
                }
                _ => Some(
                    parse_decimal(tok)
                        .ok_or_else(|| parse_err(line_no, col, format!("invalid number `{tok}`")))?,
                ),
            };
            entries.push(value);
        }
        rows_seen += 1;
    }

    let Some((objective, rows, cols)) = header else {
        return Err(parse_err(last_line.max(1), 1, "missing header"));
    };
    if rows_seen != rows {
        return Err(parse_err(
            last_line + 1,
            1,
            format!("expected {rows} rows, found {rows_seen}"),
        ));
    }
    Ok(InstanceSpec { rows, cols, objective, entries })
}

/// Tokens with their 1-based starting column.
fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

/// Writes a rational as a terminating decimal.
pub fn format_decimal(r: &Rational) -> Result<String> {
    let mut d = *r.denom();
    let (mut twos, mut fives) = (0u32, 0u32);
    while d % 2 == 0 {
        d /= 2;
        twos += 1;
    }
    while d % 5 == 0 {
        d /= 5;
        fives += 1;
    }
    if d != 1 {
        return Err(Error::NotDecimal(fmt_rational(r)));
    }
    let places = twos.max(fives);
    if places == 0 {
        return Ok(r.numer().to_string());
    }
    let scaled = r * Rational::from_integer(10i128.pow(places));
    debug_assert!(scaled.is_integer());
    let digits = scaled.numer().abs().to_string();
    let places = places as usize;
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (int, frac) = padded.split_at(padded.len() - places);
    let sign = if r < &Rational::zero() { "-" } else { "" };
    Ok(format!("{sign}{int}.{frac}"))
}

/// Renders an instance in the text format.
pub fn serialize(spec: &InstanceSpec) -> Result<String> {
    let absent = match spec.objective {
        Objective::Max => "-inf",
        Objective::Min => "inf",
    };
    let mut out = format!("{} {} {}\n", spec.objective, spec.rows, spec.cols);
    for i in 0..spec.rows {
        let row = (0..spec.cols)
            .map(|j| match spec.get(i, j) {
                None => Ok(absent.to_string()),
                Some(r) => format_decimal(&r),
            })
            .collect::<Result<Vec<_>>>()?;
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    Ok(out)
}

/// Converts a square max-plus matrix into an instance description.
pub fn spec_from_matrix(w: &WeightMatrix) -> InstanceSpec {
    InstanceSpec {
        rows: w.n(),
        cols: w.n(),
        objective: Objective::Max,
        entries: w.entries().iter().map(|e| e.finite()).collect(),
    }
}

/// Seeded random matrix: each entry is `-∞` with probability `neginf_density`
/// and otherwise uniform on the integers `lo..=hi`.
pub fn generate(n: usize, lo: i64, hi: i64, neginf_density: Rational, seed: u64) -> Result<WeightMatrix> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if lo > hi {
        return Err(Error::InvalidParameter(format!("lo ({lo}) exceeds hi ({hi})")));
    }
    if neginf_density < Rational::zero() || neginf_density > Rational::one() {
        return Err(Error::InvalidParameter("density must lie in [0, 1]".into()));
    }
    let num = u64::try_from(*neginf_density.numer())
        .map_err(|_| Error::InvalidParameter("density numerator too large".into()))?;
    let den = u64::try_from(*neginf_density.denom())
        .map_err(|_| Error::InvalidParameter("density denominator too large".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = (0..n * n)
        .map(|_| {
            let absent = rng.random_range(0..den) < num;
            let value = rng.random_range(lo..=hi);
            if absent {
                ExtReal::NegInf
            } else {
                ExtReal::from(value)
            }
        })
        .collect();
    WeightMatrix::new(n, entries)
}
