//! Interval-union arithmetic, the Hausdorff metric, metric pairs and metric
//! linear combinations over finite point sets.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Intervals closer than this are merged when a [`CompactSet`] is built.
pub const MERGE_TOL: f64 = 1e-9;

/// Absolute tolerance for detecting equidistance ties in metric pairs.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum SetError {
    #[error("operation on an empty set")]
    EmptySet,
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("non-finite value {0}")]
    NonFinite(f64),
    #[error("mismatched lengths: {0} sets vs {1} weights")]
    LengthMismatch(usize, usize),
}

/// A closed interval `[lo, hi]` with `lo <= hi`. Degenerate intervals
/// (`lo == hi`) are legal; they arise at exact PCT abscissas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, SetError> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(SetError::NonFinite(if lo.is_finite() { hi } else { lo }));
        }
        if lo > hi {
            return Err(SetError::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(p: f64) -> Result<Self, SetError> {
        Interval::new(p, p)
    }

    pub fn contains(&self, p: f64) -> bool {
        self.lo <= p && p <= self.hi
    }

    /// Distance from `p` to this interval (0 if contained).
    pub fn distance(&self, p: f64) -> f64 {
        if p < self.lo {
            self.lo - p
        } else if p > self.hi {
            p - self.hi
        } else {
            0.0
        }
    }
}

/// A finite ascending union of disjoint closed intervals; the value type of
/// an SVF sample. Intervals with gaps below [`MERGE_TOL`] are merged on
/// construction, so consecutive intervals are separated by a positive gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompactSet {
    intervals: Vec<Interval>,
}

impl CompactSet {
    pub fn new(mut intervals: Vec<Interval>) -> Result<Self, SetError> {
        if intervals.is_empty() {
            return Err(SetError::EmptySet);
        }
        intervals.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut merged: Vec<Interval> = Vec::with_capacity(intervals.len());
        for iv in intervals {
            match merged.last_mut() {
                Some(last) if iv.lo - last.hi <= MERGE_TOL => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => merged.push(iv),
            }
        }
        Ok(CompactSet { intervals: merged })
    }

    /// Builds a set from `(lo, hi)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self, SetError> {
        let ivs = pairs
            .iter()
            .map(|&(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>, _>>()?;
        CompactSet::new(ivs)
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn min(&self) -> f64 {
        self.intervals[0].lo
    }

    pub fn max(&self) -> f64 {
        self.intervals[self.intervals.len() - 1].hi
    }

    pub fn contains(&self, p: f64) -> bool {
        self.intervals.iter().any(|iv| iv.contains(p))
    }

    /// Membership with an absolute tolerance; used on samples read from files
    /// with rounded values.
    pub fn contains_tol(&self, p: f64, tol: f64) -> bool {
        self.intervals.iter().any(|iv| iv.distance(p) <= tol)
    }

    /// The gaps between consecutive intervals as open `(hi_k, lo_{k+1})` pairs.
    pub fn gaps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.intervals
            .windows(2)
            .map(|w| (w[0].hi, w[1].lo))
    }

    /// Ascending interval endpoints (the discrete sample of this set).
    pub fn endpoints(&self) -> Vec<f64> {
        let mut pts = Vec::with_capacity(2 * self.intervals.len());
        for iv in &self.intervals {
            pts.push(iv.lo);
            if iv.hi > iv.lo {
                pts.push(iv.hi);
            }
        }
        pts
    }

    /// Union of two sets (intervals re-merged under [`MERGE_TOL`]).
    pub fn union(&self, other: &CompactSet) -> CompactSet {
        let mut ivs = self.intervals.clone();
        ivs.extend_from_slice(&other.intervals);
        CompactSet::new(ivs).expect("union of nonempty sets is nonempty")
    }
}

/// `min_{q in A} |p - q|`.
pub fn point_to_set_distance(p: f64, a: &CompactSet) -> f64 {
    a.intervals
        .iter()
        .map(|iv| iv.distance(p))
        .fold(f64::INFINITY, f64::min)
}

/// Directed Hausdorff distance `sup_{a in A} d(a, B)`, computed exactly from
/// interval endpoints of `A` and gap midpoints of `B` lying inside `A`.
fn directed_hausdorff(a: &CompactSet, b: &CompactSet) -> f64 {
    let mut best: f64 = 0.0;
    for iv in &a.intervals {
        best = best.max(point_to_set_distance(iv.lo, b));
        best = best.max(point_to_set_distance(iv.hi, b));
    }
    for (glo, ghi) in b.gaps() {
        let mid = 0.5 * (glo + ghi);
        if a.contains(mid) {
            best = best.max(point_to_set_distance(mid, b));
        }
    }
    best
}

/// The Hausdorff metric between two interval unions. Exact; the extremal
/// candidates are interval endpoints of each set and gap midpoints of the
/// other.
pub fn hausdorff(a: &CompactSet, b: &CompactSet) -> f64 {
    directed_hausdorff(a, b).max(directed_hausdorff(b, a))
}

/// A strictly ascending finite set of reals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretePointSet {
    points: Vec<f64>,
}

impl DiscretePointSet {
    /// Sorts and deduplicates (within an absolute `1e-12`) the given points.
    pub fn new(mut points: Vec<f64>) -> Result<Self, SetError> {
        if points.is_empty() {
            return Err(SetError::EmptySet);
        }
        if let Some(&bad) = points.iter().find(|p| !p.is_finite()) {
            return Err(SetError::NonFinite(bad));
        }
        points.sort_by(f64::total_cmp);
        points.dedup_by(|a, b| (*a - *b).abs() <= TIE_TOL);
        Ok(DiscretePointSet { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A metric pair `(v, w)`: `v` is nearest to `w` in the source set, or `w`
/// is nearest to `v` in the target set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricPair {
    pub v: f64,
    pub w: f64,
}

/// Index pairs of the metric pairs of `(V, W)`. Equidistance ties keep both
/// pairs: the defining condition is a union, not a choice.
pub fn metric_pair_indices(v: &DiscretePointSet, w: &DiscretePointSet) -> Vec<(usize, usize)> {
    let vs = v.points();
    let ws = w.points();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (i, &p) in vs.iter().enumerate() {
        let dmin = ws.iter().map(|&q| (p - q).abs()).fold(f64::INFINITY, f64::min);
        for (j, &q) in ws.iter().enumerate() {
            if (p - q).abs() <= dmin + TIE_TOL {
                pairs.push((i, j));
            }
        }
    }
    for (j, &q) in ws.iter().enumerate() {
        let dmin = vs.iter().map(|&p| (p - q).abs()).fold(f64::INFINITY, f64::min);
        for (i, &p) in vs.iter().enumerate() {
            if (p - q).abs() <= dmin + TIE_TOL {
                pairs.push((i, j));
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

/// All metric pairs of `(V, W)`.
pub fn metric_pairs(v: &DiscretePointSet, w: &DiscretePointSet) -> Vec<MetricPair> {
    metric_pair_indices(v, w)
        .into_iter()
        .map(|(i, j)| MetricPair {
            v: v.points()[i],
            w: w.points()[j],
        })
        .collect()
}

/// Enumerates all metric chains of the given sequence of sets, as value
/// tuples. Consecutive entries of each chain form metric pairs.
pub fn metric_chains(sets: &[DiscretePointSet]) -> Vec<Vec<f64>> {
    if sets.is_empty() {
        return Vec::new();
    }
    // adjacency[i][j] = successor indices of point j of layer i
    let mut adjacency: Vec<Vec<Vec<usize>>> = Vec::with_capacity(sets.len() - 1);
    for pair in sets.windows(2) {
        let mut adj = vec![Vec::new(); pair[0].len()];
        for (i, j) in metric_pair_indices(&pair[0], &pair[1]) {
            adj[i].push(j);
        }
        adjacency.push(adj);
    }
    let mut chains = Vec::new();
    let mut stack: Vec<usize> = Vec::with_capacity(sets.len());
    for start in 0..sets[0].len() {
        stack.push(start);
        extend_chains(sets, &adjacency, &mut stack, &mut chains);
        stack.pop();
    }
    chains
}

fn extend_chains(
    sets: &[DiscretePointSet],
    adjacency: &[Vec<Vec<usize>>],
    stack: &mut Vec<usize>,
    out: &mut Vec<Vec<f64>>,
) {
    let layer = stack.len() - 1;
    if layer == sets.len() - 1 {
        out.push(
            stack
                .iter()
                .enumerate()
                .map(|(i, &j)| sets[i].points()[j])
                .collect(),
        );
        return;
    }
    let last = *stack.last().unwrap();
    for &next in &adjacency[layer][last] {
        stack.push(next);
        extend_chains(sets, adjacency, stack, out);
        stack.pop();
    }
}

/// The metric linear combination `{ sum_i w_i v_i : (v_0..v_N) a metric chain }`.
pub fn metric_linear_combination(
    sets: &[DiscretePointSet],
    weights: &[f64],
) -> Result<DiscretePointSet, SetError> {
    if sets.len() != weights.len() {
        return Err(SetError::LengthMismatch(sets.len(), weights.len()));
    }
    if sets.is_empty() {
        return Err(SetError::EmptySet);
    }
    let values: Vec<f64> = metric_chains(sets)
        .into_iter()
        .map(|chain| chain.iter().zip(weights).map(|(v, w)| v * w).sum())
        .collect();
    DiscretePointSet::new(values)
}
