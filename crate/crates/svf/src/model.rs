//! Analytic ground-truth set-valued functions: construction from boundary
//! functions, evaluation, sampling, partitions and the built-in test models.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sets::{CompactSet, Interval, MERGE_TOL};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("x = {x} outside the domain [{a}, {b}]")]
    OutOfDomain { x: f64, a: f64, b: f64 },
    #[error("hole boundaries do not close: |g({x}) - h({x})| = {gap:.3e}")]
    HoleNotClosed { x: f64, gap: f64 },
    #[error("invalid hole interval [{c}, {d}] within [{a}, {b}]")]
    BadHoleInterval { c: f64, d: f64, a: f64, b: f64 },
    #[error("inconsistent model: assembled interval [{lo}, {hi}] at x = {x}")]
    Inconsistent { lo: f64, hi: f64, x: f64 },
    #[error("unknown builtin model '{0}'")]
    UnknownBuiltin(String),
    #[error("partition nodes must be strictly ascending and inside [a, b]")]
    BadPartition,
    #[error(transparent)]
    Set(#[from] crate::sets::SetError),
}

/// A real-valued boundary function together with its domain of definition.
#[derive(Clone)]
pub struct BoundaryFn {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub lo: f64,
    pub hi: f64,
}

impl fmt::Debug for BoundaryFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BoundaryFn[{}, {}]", self.lo, self.hi)
    }
}

impl BoundaryFn {
    pub fn new(lo: f64, hi: f64, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        BoundaryFn { f: Arc::new(f), lo, hi }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }
}

/// A hole of the graph: lower/upper boundary curves `g < h` over `(c, d)`,
/// closing at both ends (`g(c) = h(c)`, `g(d) = h(d)`).
#[derive(Debug, Clone)]
pub struct HoleSpec {
    pub c: f64,
    pub d: f64,
    pub g: BoundaryFn,
    pub h: BoundaryFn,
}

impl HoleSpec {
    /// Boundary values at `x`, sorted ascending. Models may list `g`/`h` in
    /// swapped roles on parts of the interval; the evaluation sorts.
    pub fn boundary_values(&self, x: f64) -> (f64, f64) {
        let gv = self.g.eval(x);
        let hv = self.h.eval(x);
        if gv <= hv { (gv, hv) } else { (hv, gv) }
    }
}

/// Ground-truth set-valued function defined by boundary functions.
#[derive(Debug, Clone)]
pub struct SvfModel {
    pub a: f64,
    pub b: f64,
    pub ell: BoundaryFn,
    pub u: BoundaryFn,
    pub holes: Vec<HoleSpec>,
    pub name: String,
}

impl SvfModel {
    pub fn new(
        a: f64,
        b: f64,
        ell: BoundaryFn,
        u: BoundaryFn,
        holes: Vec<HoleSpec>,
        name: impl Into<String>,
    ) -> Result<Self, ModelError> {
        for hole in &holes {
            if !(a < hole.c && hole.c < hole.d && hole.d < b) {
                return Err(ModelError::BadHoleInterval { c: hole.c, d: hole.d, a, b });
            }
            for x in [hole.c, hole.d] {
                let gap = (hole.g.eval(x) - hole.h.eval(x)).abs();
                if gap > 1e-12 {
                    return Err(ModelError::HoleNotClosed { x, gap });
                }
            }
        }
        Ok(SvfModel { a, b, ell, u, holes, name: name.into() })
    }

    /// Evaluates `F(x)` by assembling intervals between the sorted hole
    /// boundary values and the outer boundaries. Hole membership uses the
    /// open interval `(c, d)`.
    pub fn evaluate(&self, x: f64) -> Result<CompactSet, ModelError> {
        if x < self.a || x > self.b {
            return Err(ModelError::OutOfDomain { x, a: self.a, b: self.b });
        }
        let lo = self.ell.eval(x);
        let hi = self.u.eval(x);
        let mut cuts: Vec<(f64, f64)> = self
            .holes
            .iter()
            .filter(|hole| hole.c < x && x < hole.d)
            .map(|hole| hole.boundary_values(x))
            .collect();
        cuts.sort_by(|p, q| p.0.total_cmp(&q.0));
        let mut intervals = Vec::with_capacity(cuts.len() + 1);
        let mut cursor = lo;
        for (glo, ghi) in cuts {
            if glo < cursor - MERGE_TOL {
                return Err(ModelError::Inconsistent { lo: cursor, hi: glo, x });
            }
            intervals.push(Interval::new(cursor.min(glo), glo.max(cursor))?);
            cursor = ghi;
        }
        if hi < cursor - MERGE_TOL {
            return Err(ModelError::Inconsistent { lo: cursor, hi, x });
        }
        intervals.push(Interval::new(cursor.min(hi), hi.max(cursor))?);
        Ok(CompactSet::new(intervals)?)
    }

    /// Samples the model at every partition node.
    pub fn sample(&self, partition: &Partition) -> Result<SampleSet, ModelError> {
        let values = partition
            .nodes
            .iter()
            .map(|&x| self.evaluate(x))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SampleSet {
            a: self.a,
            b: self.b,
            partition: partition.clone(),
            values,
        })
    }

    /// True PCTs of hole `i`: `((c, g(c)), (d, g(d)))`.
    pub fn hole_pcts(&self, i: usize) -> ((f64, f64), (f64, f64)) {
        let hole = &self.holes[i];
        ((hole.c, hole.g.eval(hole.c)), (hole.d, hole.g.eval(hole.d)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartitionKind {
    Chebyshev,
    Uniform,
}

/// A strictly ascending partition of `[a, b]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub nodes: Vec<f64>,
    pub kind: PartitionKind,
}

impl Partition {
    pub fn from_nodes(nodes: Vec<f64>, kind: PartitionKind) -> Result<Self, ModelError> {
        if nodes.is_empty() || nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ModelError::BadPartition);
        }
        Ok(Partition { nodes, kind })
    }

    /// Maximum gap between consecutive nodes.
    pub fn norm(&self) -> f64 {
        self.nodes
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }
}

/// The `N+1` roots of the Chebyshev polynomial of degree `N+1`, mapped to
/// `[a, b]` and returned ascending.
pub fn chebyshev_partition(n: usize, a: f64, b: f64) -> Partition {
    let count = n + 1;
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut nodes: Vec<f64> = (0..count)
        .map(|i| mid + half * ((2 * i + 1) as f64 * PI / (2 * count) as f64).cos())
        .collect();
    nodes.sort_by(f64::total_cmp);
    Partition { nodes, kind: PartitionKind::Chebyshev }
}

/// `N+1` equally spaced nodes on `[a, b]`.
pub fn uniform_partition(n: usize, a: f64, b: f64) -> Partition {
    let delta = (b - a) / n as f64;
    let mut nodes: Vec<f64> = (0..=n).map(|i| a + i as f64 * delta).collect();
    nodes[n] = b;
    Partition { nodes, kind: PartitionKind::Uniform }
}

/// A partition together with the sampled set values, the algorithm's only
/// input.
#[derive(Debug, Clone)]
pub struct SampleSet {
    pub a: f64,
    pub b: f64,
    pub partition: Partition,
    pub values: Vec<CompactSet>,
}

impl SampleSet {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Mean node spacing `(b - a) / N`; equals the uniform spacing for
    /// uniform partitions.
    pub fn delta(&self) -> f64 {
        (self.b - self.a) / (self.partition.nodes.len() - 1).max(1) as f64
    }
}

/// On-disk form of a [`SampleSet`]: domain, partition nodes, and the value
/// intervals as `(lo, hi)` pairs per node.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleSetFile {
    pub a: f64,
    pub b: f64,
    #[serde(default = "default_kind")]
    pub kind: PartitionKind,
    pub nodes: Vec<f64>,
    pub values: Vec<Vec<(f64, f64)>>,
}

fn default_kind() -> PartitionKind {
    PartitionKind::Uniform
}

impl From<&SampleSet> for SampleSetFile {
    fn from(s: &SampleSet) -> Self {
        SampleSetFile {
            a: s.a,
            b: s.b,
            kind: s.partition.kind,
            nodes: s.partition.nodes.clone(),
            values: s
                .values
                .iter()
                .map(|v| v.intervals().iter().map(|iv| (iv.lo, iv.hi)).collect())
                .collect(),
        }
    }
}

impl TryFrom<SampleSetFile> for SampleSet {
    type Error = ModelError;

    fn try_from(f: SampleSetFile) -> Result<Self, Self::Error> {
        if f.nodes.len() != f.values.len()
            || f.nodes.first().is_some_and(|&x| x < f.a)
            || f.nodes.last().is_some_and(|&x| x > f.b)
        {
            return Err(ModelError::BadPartition);
        }
        let partition = Partition::from_nodes(f.nodes, f.kind)?;
        let values = f
            .values
            .iter()
            .map(|pairs| Ok(CompactSet::from_pairs(pairs)?))
            .collect::<Result<Vec<_>, ModelError>>()?;
        Ok(SampleSet { a: f.a, b: f.b, partition, values })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BuiltinModel {
    FA,
    FB,
    FC,
}

impl std::str::FromStr for BuiltinModel {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "FA" => Ok(BuiltinModel::FA),
            "FB" => Ok(BuiltinModel::FB),
            "FC" => Ok(BuiltinModel::FC),
            other => Err(ModelError::UnknownBuiltin(other.to_string())),
        }
    }
}

/// Builds one of the three built-in test models.
pub fn builtin(which: BuiltinModel) -> SvfModel {
    match which {
        BuiltinModel::FA => model_a(),
        BuiltinModel::FB => model_b(),
        BuiltinModel::FC => model_c(),
    }
}

/// Three Lipschitz holes between tanh envelopes on [-1, 1]. Two of the holes
/// share the same x-interval at different heights. The printed g/h labels of
/// the source formulas are swapped on parts of the domain; evaluation sorts
/// the boundary values, so only the curve pairs matter here.
fn model_a() -> SvfModel {
    let u = BoundaryFn::new(-1.0, 1.0, |x: f64| (-x).tanh() + 1.0);
    let ell = BoundaryFn::new(-1.0, 1.0, |x: f64| -(-x).tanh() - 1.0);

    // holes 1 and 2 close where 2/cosh(2x+1) = 4/3, hole 3 where
    // 2/cosh(2x-1) = 8/5
    let w12 = (1.5_f64).acosh();
    let (c12, d12) = ((-1.0 - w12) / 2.0, (-1.0 + w12) / 2.0);
    let w3 = (1.25_f64).acosh();
    let (c3, d3) = ((1.0 - w3) / 2.0, (1.0 + w3) / 2.0);

    let holes = vec![
        HoleSpec {
            c: c12,
            d: d12,
            g: BoundaryFn::new(c12, d12, |x: f64| 1.0 / (2.0 * x + 1.0).cosh() - 4.0 / 3.0),
            h: BoundaryFn::new(c12, d12, |x: f64| -1.0 / (2.0 * x + 1.0).cosh()),
        },
        HoleSpec {
            c: c12,
            d: d12,
            g: BoundaryFn::new(c12, d12, |x: f64| -1.0 / (2.0 * x + 1.0).cosh() + 4.0 / 3.0),
            h: BoundaryFn::new(c12, d12, |x: f64| 1.0 / (2.0 * x + 1.0).cosh()),
        },
        HoleSpec {
            c: c3,
            d: d3,
            g: BoundaryFn::new(c3, d3, |x: f64| -1.0 / (2.0 * x - 1.0).cosh() + 4.0 / 5.0),
            h: BoundaryFn::new(c3, d3, |x: f64| 1.0 / (2.0 * x - 1.0).cosh() - 4.0 / 5.0),
        },
    ];
    SvfModel::new(-1.0, 1.0, ell, u, holes, "FA").expect("FA model is valid")
}

/// One C^4 hole between exponential envelopes; the hole endpoints are the
/// roots of cos(2x)/2 + cos(3x)/3, found by bisection to 1e-12.
fn model_b() -> SvfModel {
    let f = |x: f64| (2.0 * x).cos() / 2.0 + (3.0 * x).cos() / 3.0;
    let xa = bisect(f, 0.6, 0.7, 1e-14, 200).expect("root of cos(2x)/2+cos(3x)/3 in [0.6,0.7]");
    let u = BoundaryFn::new(-1.0, 1.0, |x: f64| x.exp());
    let ell = BoundaryFn::new(-1.0, 1.0, |x: f64| -x.exp());
    let holes = vec![HoleSpec {
        c: -xa,
        d: xa,
        g: BoundaryFn::new(-xa, xa, |x: f64| -(3.0 * x).cos() / 3.0),
        h: BoundaryFn::new(-xa, xa, |x: f64| (2.0 * x).cos() / 2.0),
    }];
    SvfModel::new(-1.0, 1.0, ell, u, holes, "FB").expect("FB model is valid")
}

/// One elliptic hole (Hölder-type PCTs) between constant envelopes.
fn model_c() -> SvfModel {
    let u = BoundaryFn::new(-1.0, 1.0, |_| 1.5);
    let ell = BoundaryFn::new(-1.0, 1.0, |_| -1.5);
    let circ = |x: f64| (1.0 - 4.0 * x * x).max(0.0).sqrt();
    let holes = vec![HoleSpec {
        c: -0.5,
        d: 0.5,
        g: BoundaryFn::new(-0.5, 0.5, move |x| -circ(x)),
        h: BoundaryFn::new(-0.5, 0.5, circ),
    }];
    SvfModel::new(-1.0, 1.0, ell, u, holes, "FC").expect("FC model is valid")
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64, max_iter: usize) -> Option<f64> {
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo * fhi > 0.0 {
        return None;
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if fmid == 0.0 || hi - lo <= tol {
            return Some(mid);
        }
        if flo * fmid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::hausdorff;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn no_hole_evaluation() {
        let m = SvfModel::new(
            0.0,
            1.0,
            BoundaryFn::new(0.0, 1.0, |_| 0.0),
            BoundaryFn::new(0.0, 1.0, |_| 1.0),
            vec![],
            "strip",
        )
        .unwrap();
        let v = m.evaluate(0.5).unwrap();
        assert_eq!(v.intervals().len(), 1);
        assert_eq!(v.min(), 0.0);
        assert_eq!(v.max(), 1.0);
        assert!(m.evaluate(1.5).is_err());
    }

    #[test]
    fn fa_three_interval_branch() {
        let m = builtin(BuiltinModel::FA);
        let v = m.evaluate(-0.5).unwrap();
        assert_eq!(v.intervals().len(), 3, "two stacked holes cut F_A(-0.5)");
        // cosh(0) = 1 at x = -0.5, so the hole boundary values are
        // {-1, -1/3, 1/3, 1}
        let ivs = v.intervals();
        let ua = 0.5_f64.tanh() + 1.0;
        assert!((ivs[0].lo - -ua).abs() < 1e-12);
        assert!((ivs[0].hi - -1.0).abs() < 1e-12);
        assert!((ivs[1].lo - -1.0 / 3.0).abs() < 1e-12);
        assert!((ivs[1].hi - 1.0 / 3.0).abs() < 1e-12);
        assert!((ivs[2].lo - 1.0).abs() < 1e-12);
        assert!((ivs[2].hi - ua).abs() < 1e-12);
    }

    #[test]
    fn fa_swapped_labels_branch() {
        // at x = 0.5 the printed formulas give g > h; sorting yields
        // [-0.5379, -0.2] u [0.2, 0.5379] to 4 digits
        let m = builtin(BuiltinModel::FA);
        let v = m.evaluate(0.5).unwrap();
        assert_eq!(v.intervals().len(), 2);
        let ivs = v.intervals();
        assert!((ivs[0].lo - -0.5379).abs() < 1e-4);
        assert!((ivs[0].hi - -0.2).abs() < 1e-12);
        assert!((ivs[1].lo - 0.2).abs() < 1e-12);
        assert!((ivs[1].hi - 0.5379).abs() < 1e-4);
    }

    #[test]
    fn hole_collapses_at_endpoints() {
        let m = builtin(BuiltinModel::FC);
        for x in [-0.5, 0.5] {
            let v = m.evaluate(x).unwrap();
            assert_eq!(v.intervals().len(), 1, "hole closed at x = {x}");
        }
        let v = m.evaluate(0.0).unwrap();
        assert_eq!(v.intervals().len(), 2);
        assert_eq!(v.intervals()[0].hi, -1.0);
        assert_eq!(v.intervals()[1].lo, 1.0);
    }

    #[test]
    fn fb_hole_endpoint_root() {
        let m = builtin(BuiltinModel::FB);
        let xa = m.holes[0].d;
        assert!((xa - 0.6547).abs() < 1e-3);
        let f = |x: f64| (2.0 * x).cos() / 2.0 + (3.0 * x).cos() / 3.0;
        assert!(f(xa).abs() < 1e-11);
    }

    #[test]
    fn chebyshev_partition_examples() {
        let p = chebyshev_partition(0, -1.0, 1.0);
        assert_eq!(p.nodes.len(), 1);
        assert!(p.nodes[0].abs() < 1e-15);

        let p = chebyshev_partition(1, -1.0, 1.0);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((p.nodes[0] + r).abs() < 1e-15);
        assert!((p.nodes[1] - r).abs() < 1e-15);

        let p = chebyshev_partition(2, -1.0, 1.0);
        let s = 3.0_f64.sqrt() / 2.0;
        assert!((p.nodes[0] + s).abs() < 1e-15);
        assert!(p.nodes[1].abs() < 1e-15);
        assert!((p.nodes[2] - s).abs() < 1e-15);
    }

    #[test]
    fn chebyshev_gaps_grow_toward_center() {
        let p = chebyshev_partition(20, -1.0, 1.0);
        let gaps: Vec<f64> = p.nodes.windows(2).map(|w| w[1] - w[0]).collect();
        let half = gaps.len() / 2;
        for i in 1..=half {
            assert!(gaps[i] >= gaps[i - 1]);
        }
        assert!(gaps[0] <= PI * 2.0 / (2.0 * 20.0));
        assert!(p.norm() <= PI * 2.0 / (2.0 * 20.0) * 10.0);
    }

    #[test]
    fn sampling_counts_intervals() {
        let m = builtin(BuiltinModel::FC);
        let s = m.sample(&uniform_partition(8, -1.0, 1.0)).unwrap();
        for (x, v) in s.partition.nodes.iter().zip(&s.values) {
            let expect = if *x > -0.5 && *x < 0.5 { 2 } else { 1 };
            assert_eq!(v.intervals().len(), expect, "at x = {x}");
        }
    }

    #[test]
    fn lipschitz_in_hausdorff() {
        // boundary derivative bound for FA: |u'| <= 1, hole curves
        // |d/dx 1/cosh| <= 2; use a generous constant
        let m = builtin(BuiltinModel::FA);
        let lip = 3.0;
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..1000 {
            let x: f64 = rng.gen_range(-1.0..1.0);
            let y: f64 = rng.gen_range(-1.0..1.0);
            let d = hausdorff(&m.evaluate(x).unwrap(), &m.evaluate(y).unwrap());
            assert!(d <= lip * (x - y).abs() + 1e-9, "x={x} y={y} d={d}");
        }
    }
}
