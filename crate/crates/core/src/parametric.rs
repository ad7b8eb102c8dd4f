//! Parametric assignment sweep.
//!
//! The graph has a root `r`, row vertices `u_i` and column vertices `v_j`.
//! Every pair `(i, j)` carries a constant edge of weight `w_ij` (absent when
//! `w_ij = -∞`) and a parametric edge of weight `x`; the root reaches every
//! `u_i` with weight `0`. A perfect matching `M(x)` of constant and
//! parametric edges is kept; its edges are reversed and negated in the
//! residual graph.
//!
//! Starting above the largest entry with `M(x)` made of the diagonal
//! parametric edges, `x` is lowered while a longest-path tree from `r` is
//! maintained. Every vertex weight is affine, `c + m·x`. The key of a
//! non-tree edge `p → q` is the value of `x` below which the path through it
//! becomes longer than the tree path to `q`; the largest key is processed
//! next. Re-hanging `q` below `p` either keeps a tree, or closes a cycle
//! through `q` that is positive below the key `b`. A cycle swaps the matching
//! along itself, which trades `d` parametric edges for constant ones: `b` is
//! a max-plus singular value of multiplicity `d`, and the constant edges of
//! the new matching form an optimal `k`-assignment for the new `k`.
//!
//! Ties are broken by the largest key, then the lowest vertex index
//! (`r`, then `u_1..u_n`, then `v_1..v_n`), then the lowest source vertex of
//! the edge, then constant edges before parametric ones.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::instance::{ScaledMatrix, WeightMatrix};
use crate::matching::Matching;
use crate::maxplus::{merge_singular_values, ExtReal, Rational, SingularValue};

/// Index of the root vertex.
pub const ROOT: usize = 0;

/// Affine weight `c + m·x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ParametricWeight {
    pub c: i128,
    pub m: i64,
}

impl ParametricWeight {
    pub fn new(c: i128, m: i64) -> Self {
        ParametricWeight { c, m }
    }
}

impl std::ops::Add for ParametricWeight {
    type Output = ParametricWeight;
    fn add(self, o: ParametricWeight) -> ParametricWeight {
        ParametricWeight { c: self.c + o.c, m: self.m + o.m }
    }
}

impl std::ops::Sub for ParametricWeight {
    type Output = ParametricWeight;
    fn sub(self, o: ParametricWeight) -> ParametricWeight {
        ParametricWeight { c: self.c - o.c, m: self.m - o.m }
    }
}

/// Breakpoint `num / den` with `den > 0`, or `-∞`.
#[derive(Clone, Copy, Debug)]
pub enum Key {
    NegInf,
    Fin { num: i128, den: i128 },
}

impl Key {
    fn new(num: i128, den: i128) -> Key {
        if den <= 0 {
            Key::NegInf
        } else {
            Key::Fin { num, den }
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Key::Fin { .. })
    }

    /// Value in the units of a matrix scaled by `scale`.
    pub fn to_ext(self, scale: i128) -> ExtReal {
        match self {
            Key::NegInf => ExtReal::NegInf,
            Key::Fin { num, den } => ExtReal::Fin(Rational::new(num, den * scale)),
        }
    }

    pub fn value(self) -> ExtReal {
        self.to_ext(1)
    }

    /// `w(x) ≤ 0` at `x = self`; at `-∞` this asks for the limit.
    fn weight_le_zero_at(self, w: ParametricWeight) -> bool {
        match self {
            Key::NegInf => w.m > 0 || (w.m == 0 && w.c <= 0),
            Key::Fin { num, den } => w.c * den + w.m as i128 * num <= 0,
        }
    }
}

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Key::NegInf, Key::NegInf) => Ordering::Equal,
            (Key::NegInf, _) => Ordering::Less,
            (_, Key::NegInf) => Ordering::Greater,
            (Key::Fin { num: a, den: b }, Key::Fin { num: c, den: d }) => (a * d).cmp(&(c * b)),
        }
    }
}

/// Key of an edge `p → q` from the tree weights of its end points and its
/// own weight: `((c_p + c_e) - c_q) / (m_q - (m_p + m_e))`, or `-∞` when the
/// denominator is not positive.
pub fn edge_key_of(p: ParametricWeight, e: ParametricWeight, q: ParametricWeight) -> Key {
    let alt = p + e;
    Key::new(alt.c - q.c, (q.m - alt.m) as i128)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    Root,
    Constant,
    Parametric,
}

/// A directed residual edge between vertex indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
}

/// A cycle closed by a pivot: the tree path `q → ... → p'` followed by the
/// pivot edge `p' → q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    /// Vertices from `q` down the tree to `p'`.
    pub path: Vec<usize>,
    pub pivot: Edge,
    pub bound: ExtReal,
    key: Key,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PivotOutcome {
    /// No finite key is left, or `k = n`.
    Exhausted,
    TreeUpdated { vertex: usize, edge: Edge, key: ExtReal },
    CycleFound(Cycle),
}

/// One cycle: singular value `value` of multiplicity `multiplicity`, after
/// which the matching has `k` constant edges of total weight `omega`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleEvent {
    pub value: ExtReal,
    pub multiplicity: usize,
    pub k: usize,
    pub omega: ExtReal,
    pub matching: Matching,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    Pivot { vertex: String, from: String, key: ExtReal },
    Cycle { bound: ExtReal, multiplicity: usize, k: usize },
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::Pivot { vertex, from, key } => {
                write!(f, "PIVOT q={vertex} e={from}->{vertex} key={key}")
            }
            TraceEvent::Cycle { bound, multiplicity, k } => {
                write!(f, "CYCLE b={bound} d={multiplicity} k={k}")
            }
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Record a [`TraceEvent`] per pivot and per cycle.
    pub trace: bool,
    /// Run [`GkState::audit`] after every pivot. Quadratic per pivot.
    pub audit: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkResult {
    pub n: usize,
    /// Reported assignments by cardinality, with their weights.
    pub essential: BTreeMap<usize, (ExtReal, Matching)>,
    /// Merged, non-increasing; multiplicities sum to `n`.
    pub singular_values: Vec<SingularValue>,
    /// Unmerged cycle events in discovery order.
    pub events: Vec<CycleEvent>,
    pub trace: Vec<TraceEvent>,
    pub pivots: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Mate {
    other: usize,
    kind: EdgeKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Best {
    key: Key,
    edge: Option<Edge>,
}

impl Best {
    const NONE: Best = Best { key: Key::NegInf, edge: None };
}

/// Is `(key, edge)` preferred over `cur`?
fn better(key: Key, edge: Edge, cur: &Best) -> bool {
    if !key.is_finite() {
        return false;
    }
    match key.cmp(&cur.key) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => match cur.edge {
            None => true,
            Some(c) => (edge.from, edge.kind) < (c.from, c.kind),
        },
    }
}

/// State of one sweep.
pub struct GkState {
    n: usize,
    m: ScaledMatrix,
    row_mate: Vec<Mate>,
    col_mate: Vec<Mate>,
    parent: Vec<Option<Edge>>,
    children: Vec<Vec<usize>>,
    weight: Vec<ParametricWeight>,
    reachable: Vec<bool>,
    best: Vec<Best>,
    mark: Vec<u32>,
    scratch: Vec<Edge>,
    epoch: u32,
    k: usize,
    bound: Option<Key>,
    start_bound: ExtReal,
    essential: BTreeMap<usize, (ExtReal, Matching)>,
    events: Vec<CycleEvent>,
    trace: Option<Vec<TraceEvent>>,
    pivots: usize,
}

impl GkState {
    /// Diagonal parametric matching; tree of the root edges, `u_1 → v_j`
    /// for `j ≥ 2` and `u_2 → v_1` (all parametric).
    pub fn init(w: &WeightMatrix) -> Result<GkState> {
        let m = w.to_scaled()?;
        let n = m.n;
        let nv = 2 * n + 1;
        let start_bound = match w.max_entry() {
            ExtReal::NegInf => ExtReal::ZERO,
            ExtReal::Fin(r) => ExtReal::Fin(r + Rational::from_integer(1)),
        };
        let mut st = GkState {
            n,
            m,
            row_mate: (0..n).map(|i| Mate { other: i, kind: EdgeKind::Parametric }).collect(),
            col_mate: (0..n).map(|j| Mate { other: j, kind: EdgeKind::Parametric }).collect(),
            parent: vec![None; nv],
            children: vec![Vec::new(); nv],
            weight: vec![ParametricWeight::default(); nv],
            reachable: vec![false; nv],
            best: vec![Best::NONE; nv],
            scratch: Vec::new(),
            mark: vec![0; nv],
            epoch: 0,
            k: 0,
            bound: None,
            start_bound,
            essential: BTreeMap::new(),
            events: Vec::new(),
            trace: None,
            pivots: 0,
        };
        st.reachable[ROOT] = true;
        for i in 0..n {
            let u = st.u(i);
            st.attach(u, Edge { from: ROOT, to: u, kind: EdgeKind::Root });
        }
        if n >= 2 {
            for j in 1..n {
                let e = Edge { from: st.u(0), to: st.v(j), kind: EdgeKind::Parametric };
                st.attach(e.to, e);
            }
            let e = Edge { from: st.u(1), to: st.v(0), kind: EdgeKind::Parametric };
            st.attach(e.to, e);
        } else if st.m.get(0, 0).is_some() {
            // The only parametric edge of a 1×1 matrix is matched, so v_1
            // hangs off the constant edge when there is one.
            let e = Edge { from: st.u(0), to: st.v(0), kind: EdgeKind::Constant };
            st.attach(e.to, e);
        }
        st.recompute_weights_from(ROOT);
        st.recompute_all_keys();
        Ok(st)
    }

    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    #[inline]
    pub fn u(&self, i: usize) -> usize {
        1 + i
    }

    #[inline]
    pub fn v(&self, j: usize) -> usize {
        1 + self.n + j
    }

    #[inline]
    fn is_u(&self, x: usize) -> bool {
        x >= 1 && x <= self.n
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.n + 1
    }

    pub fn vertex_name(&self, x: usize) -> String {
        if x == ROOT {
            "r".into()
        } else if self.is_u(x) {
            format!("u{x}")
        } else {
            format!("v{}", x - self.n)
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn pivots(&self) -> usize {
        self.pivots
    }

    /// `1 +` the largest finite entry (`0` for an all `-∞` matrix); the
    /// initial tree is a longest-path tree for every `x` from there on.
    pub fn start_bound(&self) -> ExtReal {
        self.start_bound
    }

    /// Key of the last pivot, `None` before the first one.
    pub fn current_bound(&self) -> Option<ExtReal> {
        self.bound.map(|b| b.to_ext(self.m.scale))
    }

    pub fn parent(&self, x: usize) -> Option<Edge> {
        self.parent[x]
    }

    /// Tree weight `(c, m)` of a vertex, `c` in matrix units.
    pub fn vertex_weight(&self, x: usize) -> (Rational, i64) {
        (self.m.unscale(self.weight[x].c), self.weight[x].m)
    }

    /// Constant edges of the current matching.
    pub fn matching(&self) -> Matching {
        let mates: Vec<Option<usize>> = self
            .row_mate
            .iter()
            .map(|mt| (mt.kind == EdgeKind::Constant).then_some(mt.other))
            .collect();
        Matching::from_row_mates(&mates)
    }

    fn edge_weight_opt(&self, e: Edge) -> Option<ParametricWeight> {
        match e.kind {
            EdgeKind::Root => Some(ParametricWeight::default()),
            EdgeKind::Constant => {
                let (i, j, sign) = if self.is_u(e.from) {
                    (e.from - 1, e.to - 1 - self.n, 1)
                } else {
                    (e.to - 1, e.from - 1 - self.n, -1)
                };
                self.m.get(i, j).map(|w| ParametricWeight { c: sign * w as i128, m: 0 })
            }
            EdgeKind::Parametric => Some(ParametricWeight { c: 0, m: if self.is_u(e.from) { 1 } else { -1 } }),
        }
    }

    #[inline]
    fn edge_weight(&self, e: Edge) -> ParametricWeight {
        self.edge_weight_opt(e).expect("constant edges exist only for finite weights")
    }

    #[inline]
    fn raw_edge_key(&self, e: Edge) -> Key {
        if !self.reachable[e.from] {
            return Key::NegInf;
        }
        edge_key_of(self.weight[e.from], self.edge_weight(e), self.weight[e.to])
    }

    /// Key of a residual edge; `-∞` for absent constant edges.
    pub fn edge_key(&self, e: Edge) -> ExtReal {
        match self.edge_weight_opt(e) {
            None => ExtReal::NegInf,
            Some(_) => self.raw_edge_key(e).to_ext(self.m.scale),
        }
    }

    /// Stored key of a vertex together with the edge attaining it.
    pub fn vertex_key(&self, x: usize) -> (ExtReal, Option<Edge>) {
        (self.best[x].key.to_ext(self.m.scale), self.best[x].edge)
    }

    fn for_each_in_edge(&self, q: usize, mut f: impl FnMut(Edge)) {
        if q == ROOT {
            return;
        }
        if self.is_u(q) {
            f(Edge { from: ROOT, to: q, kind: EdgeKind::Root });
            let mate = self.row_mate[q - 1];
            f(Edge { from: self.v(mate.other), to: q, kind: mate.kind });
        } else {
            let j = q - 1 - self.n;
            let mate = self.col_mate[j];
            for i in 0..self.n {
                let from = self.u(i);
                if self.m.get(i, j).is_some() && !(mate.other == i && mate.kind == EdgeKind::Constant) {
                    f(Edge { from, to: q, kind: EdgeKind::Constant });
                }
                if !(mate.other == i && mate.kind == EdgeKind::Parametric) {
                    f(Edge { from, to: q, kind: EdgeKind::Parametric });
                }
            }
        }
    }

    fn for_each_out_edge(&self, p: usize, mut f: impl FnMut(Edge)) {
        if p == ROOT {
            for i in 0..self.n {
                f(Edge { from: ROOT, to: self.u(i), kind: EdgeKind::Root });
            }
        } else if self.is_u(p) {
            let i = p - 1;
            let mate = self.row_mate[i];
            for j in 0..self.n {
                let to = self.v(j);
                if self.m.get(i, j).is_some() && !(mate.other == j && mate.kind == EdgeKind::Constant) {
                    f(Edge { from: p, to, kind: EdgeKind::Constant });
                }
                if !(mate.other == j && mate.kind == EdgeKind::Parametric) {
                    f(Edge { from: p, to, kind: EdgeKind::Parametric });
                }
            }
        } else {
            let mate = self.col_mate[p - 1 - self.n];
            f(Edge { from: p, to: self.u(mate.other), kind: mate.kind });
        }
    }

    fn compute_best(&self, q: usize) -> Best {
        let mut best = Best::NONE;
        self.for_each_in_edge(q, |e| {
            let key = self.raw_edge_key(e);
            if better(key, e, &best) {
                best = Best { key, edge: Some(e) };
            }
        });
        best
    }

    fn recompute_all_keys(&mut self) {
        for q in 1..self.vertex_count() {
            self.best[q] = self.compute_best(q);
        }
    }

    /// Lowers `e.to`'s key to the key of `e` when that is preferred.
    fn offer(&mut self, e: Edge) {
        let key = self.raw_edge_key(e);
        if better(key, e, &self.best[e.to]) {
            self.best[e.to] = Best { key, edge: Some(e) };
        }
    }

    fn attach(&mut self, x: usize, e: Edge) {
        debug_assert_eq!(e.to, x);
        self.parent[x] = Some(e);
        self.children[e.from].push(x);
    }

    fn detach(&mut self, x: usize) {
        if let Some(e) = self.parent[x].take() {
            let siblings = &mut self.children[e.from];
            let pos = siblings.iter().position(|&c| c == x).expect("child registered at parent");
            siblings.swap_remove(pos);
        }
    }

    fn subtree(&self, q: usize) -> Vec<usize> {
        let mut out = vec![q];
        let mut i = 0;
        while i < out.len() {
            out.extend_from_slice(&self.children[out[i]]);
            i += 1;
        }
        out
    }

    fn recompute_weights_from(&mut self, x: usize) {
        let order = self.subtree(x);
        for &y in &order[1..] {
            let e = self.parent[y].expect("non-root subtree vertices have parents");
            self.weight[y] = self.weight[e.from] + self.edge_weight(e);
            self.reachable[y] = true;
        }
    }

    fn top_key(&self) -> Key {
        self.best.iter().map(|b| b.key).max().unwrap_or(Key::NegInf)
    }

    /// Tree path from `q` down to `p`, if `q` is an ancestor of `p`.
    fn path_from_ancestor(&self, q: usize, p: usize) -> Option<Vec<usize>> {
        let mut path = Vec::new();
        let mut x = p;
        loop {
            path.push(x);
            if x == q {
                path.reverse();
                return Some(path);
            }
            x = self.parent[x]?.from;
        }
    }

    /// Among the vertices whose key equals `key`, the lowest-index one whose
    /// pivot keeps a tree; when every one of them closes a cycle, the
    /// lowest-index one together with its cycle path.
    fn choose_among_ties(&self, key: Key) -> (usize, Option<Vec<usize>>) {
        let mut first = None;
        for q in 1..self.vertex_count() {
            if self.best[q].key != key {
                continue;
            }
            let from = self.best[q].edge.expect("finite keys come with an edge").from;
            match self.path_from_ancestor(q, from) {
                None => return (q, None),
                Some(path) => {
                    if first.is_none() {
                        first = Some((q, Some(path)));
                    }
                }
            }
        }
        first.expect("some vertex attains the top key")
    }

    /// Processes the vertex of largest key. A returned cycle must be passed to
    /// [`GkState::apply_cycle`] before the next step.
    pub fn pivot_step(&mut self) -> Result<PivotOutcome> {
        if self.k >= self.n {
            return Ok(PivotOutcome::Exhausted);
        }
        let key = self.top_key();
        if !key.is_finite() {
            return Ok(PivotOutcome::Exhausted);
        }
        if let Some(b) = self.bound {
            if key > b {
                return Err(Error::InvariantBreach(format!(
                    "key {} above the current bound {}",
                    key.to_ext(self.m.scale),
                    b.to_ext(self.m.scale)
                )));
            }
        }
        let (q, cycle_path) = self.choose_among_ties(key);
        let edge = self.best[q].edge.expect("finite keys come with an edge");
        self.bound = Some(key);
        self.pivots += 1;
        let key_ext = key.to_ext(self.m.scale);
        if self.trace.is_some() {
            let ev = TraceEvent::Pivot { vertex: self.vertex_name(q), from: self.vertex_name(edge.from), key: key_ext };
            self.trace.as_mut().unwrap().push(ev);
        }
        if let Some(path) = cycle_path {
            return Ok(PivotOutcome::CycleFound(Cycle { path, pivot: edge, bound: key_ext, key }));
        }

        let old = self.weight[q];
        self.detach(q);
        self.attach(q, edge);
        let delta = self.weight[edge.from] + self.edge_weight(edge) - old;
        let sub = self.subtree(q);
        self.epoch += 1;
        for &s in &sub {
            self.weight[s] = self.weight[s] + delta;
            self.mark[s] = self.epoch;
        }
        for &s in &sub {
            self.best[s] = self.compute_best(s);
        }
        // Edges leaving the subtree can only have gained; everything else
        // outside it is unchanged.
        let mut out = std::mem::take(&mut self.scratch);
        for &s in &sub {
            out.clear();
            self.for_each_out_edge(s, |e| out.push(e));
            for &e in &out {
                if self.mark[e.to] != self.epoch {
                    self.offer(e);
                }
            }
        }
        self.scratch = out;
        Ok(PivotOutcome::TreeUpdated { vertex: q, edge, key: key_ext })
    }

    /// Swaps the matching along the cycle, re-hangs the tree along the
    /// reversed cycle and records the new assignment.
    pub fn apply_cycle(&mut self, cycle: &Cycle) -> Result<CycleEvent> {
        let q = cycle.path[0];
        let last = *cycle.path.last().expect("non-empty cycle path");
        let alt = self.weight[last] + self.edge_weight(cycle.pivot);
        let d = self.weight[q].m - alt.m;
        if d <= 0 {
            return Err(Error::NonPositiveMultiplicity(d));
        }

        // Cycle edges: tree edges down the path, then the pivot edge.
        let mut cyc: Vec<Edge> = cycle.path[1..]
            .iter()
            .map(|&x| self.parent[x].expect("path vertices below q have parents"))
            .collect();
        cyc.push(cycle.pivot);

        for e in &cyc {
            if self.is_u(e.from) {
                let (i, j) = (e.from - 1, e.to - 1 - self.n);
                self.row_mate[i] = Mate { other: j, kind: e.kind };
                self.col_mate[j] = Mate { other: i, kind: e.kind };
            }
        }

        // New tree: q → p' → q_{t-1} → ... → q_1 along reversed cycle edges.
        let t = cycle.path.len() - 1;
        let mut new_parents: Vec<(usize, Edge)> = Vec::with_capacity(t);
        new_parents.push((last, Edge { from: q, to: last, kind: cycle.pivot.kind }));
        for idx in 1..t {
            let child = cycle.path[idx];
            let above = cycle.path[idx + 1];
            let kind = cyc[idx].kind;
            debug_assert_eq!(cyc[idx].to, above);
            new_parents.push((child, Edge { from: above, to: child, kind }));
        }
        for &(x, _) in &new_parents {
            self.detach(x);
        }
        for (x, e) in new_parents {
            self.attach(x, e);
        }

        self.k += d as usize;
        self.recompute_weights_from(q);
        self.recompute_all_keys();

        let matching = self.matching();
        if matching.len() != self.k {
            return Err(Error::InvariantBreach(format!(
                "matching has {} constant edges, expected {}",
                matching.len(),
                self.k
            )));
        }
        let omega: ExtReal = self.m.unscale_ext(Some(
            matching.pairs().iter().map(|&(i, j)| self.m.get(i, j).unwrap() as i128).sum(),
        ));
        let event = CycleEvent {
            value: cycle.key.to_ext(self.m.scale),
            multiplicity: d as usize,
            k: self.k,
            omega,
            matching: matching.clone(),
        };
        if let Some(tr) = self.trace.as_mut() {
            tr.push(TraceEvent::Cycle { bound: event.value, multiplicity: event.multiplicity, k: self.k });
        }
        self.essential.insert(self.k, (omega, matching));
        self.events.push(event.clone());
        Ok(event)
    }

    /// Full consistency check of the tree, keys and matching at the current
    /// bound.
    pub fn audit(&self) -> Result<()> {
        let breach = |msg: String| Err(Error::InvariantBreach(msg));
        let bound = match self.bound {
            Some(b) => b,
            None => match self.start_bound {
                ExtReal::Fin(r) => {
                    let scaled = r * Rational::from_integer(self.m.scale);
                    Key::Fin { num: scaled.numer() * 1, den: *scaled.denom() }
                }
                ExtReal::NegInf => Key::NegInf,
            },
        };

        for i in 0..self.n {
            let mt = self.row_mate[i];
            let back = self.col_mate[mt.other];
            if back.other != i || back.kind != mt.kind {
                return breach(format!("row {i} and column {} disagree", mt.other));
            }
            if mt.kind == EdgeKind::Constant && self.m.get(i, mt.other).is_none() {
                return breach(format!("matched constant edge ({i},{}) is absent", mt.other));
            }
        }
        let constant = self.row_mate.iter().filter(|m| m.kind == EdgeKind::Constant).count();
        if constant != self.k {
            return breach(format!("{constant} constant matched edges but k = {}", self.k));
        }

        for x in 1..self.vertex_count() {
            let Some(e) = self.parent[x] else {
                if self.reachable[x] {
                    return breach(format!("{} reachable without parent", self.vertex_name(x)));
                }
                continue;
            };
            let mut exists = false;
            self.for_each_in_edge(x, |f| exists |= f == e);
            if !exists {
                return breach(format!("tree edge into {} is not a residual edge", self.vertex_name(x)));
            }
            if self.weight[x] != self.weight[e.from] + self.edge_weight(e) {
                return breach(format!("weight of {} inconsistent with its parent", self.vertex_name(x)));
            }
            // Parent chains end at the root.
            let mut y = x;
            for _ in 0..self.vertex_count() {
                match self.parent[y] {
                    Some(p) => y = p.from,
                    None => break,
                }
            }
            if y != ROOT {
                return breach(format!("{} does not hang from the root", self.vertex_name(x)));
            }
        }

        for q in 1..self.vertex_count() {
            if self.compute_best(q) != self.best[q] {
                return breach(format!("stale key at {}", self.vertex_name(q)));
            }
            if self.best[q].key > bound {
                return breach(format!("key at {} above the bound", self.vertex_name(q)));
            }
        }
        for p in 0..self.vertex_count() {
            if !self.reachable[p] {
                continue;
            }
            let mut ok = true;
            self.for_each_out_edge(p, |e| {
                let slack = self.weight[e.from] + self.edge_weight(e) - self.weight[e.to];
                ok &= self.reachable[e.to] && bound.weight_le_zero_at(slack);
            });
            if !ok {
                return breach(format!("longest-path property fails at an edge out of {}", self.vertex_name(p)));
            }
        }
        Ok(())
    }

    /// Appends the `-∞` singular value for missing cardinalities and merges.
    pub fn finish(self) -> GkResult {
        let mut raw: Vec<SingularValue> = self
            .events
            .iter()
            .map(|e| SingularValue { value: e.value, multiplicity: e.multiplicity })
            .collect();
        if self.k < self.n {
            raw.push(SingularValue { value: ExtReal::NegInf, multiplicity: self.n - self.k });
        }
        GkResult {
            n: self.n,
            essential: self.essential,
            singular_values: merge_singular_values(raw),
            events: self.events,
            trace: self.trace.unwrap_or_default(),
            pivots: self.pivots,
        }
    }
}

/// Runs the sweep to the end.
pub fn run(w: &WeightMatrix) -> Result<GkResult> {
    run_with(w, &RunOptions::default())
}

pub fn run_with(w: &WeightMatrix, opts: &RunOptions) -> Result<GkResult> {
    let mut st = GkState::init(w)?;
    if opts.trace {
        st = st.with_trace();
    }
    if opts.audit {
        st.audit()?;
    }
    loop {
        match st.pivot_step()? {
            PivotOutcome::Exhausted => break,
            PivotOutcome::TreeUpdated { .. } => {}
            PivotOutcome::CycleFound(c) => {
                st.apply_cycle(&c)?;
            }
        }
        if opts.audit {
            st.audit()?;
        }
    }
    Ok(st.finish())
}
