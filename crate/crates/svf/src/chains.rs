//! Significant-metric-chain machinery: APCT detection, extended-PCT
//! propagation, the layered chain forest, path enumeration, gap-run tracking
//! and chain classification.

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::SampleSet;
use crate::sets::{metric_pair_indices, DiscretePointSet};

/// Membership tolerance for points against sample sets; samples may come
/// from files with rounded values.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Hard cap on enumerated chains; generic inputs stay near `2 + 4M`.
const MAX_CHAINS: usize = 100_000;

#[derive(Debug, Error)]
pub enum ChainError {
    #[error("ambiguous gap merging at node {node}: the sampled holes are not separated")]
    AmbiguousGapRun { node: usize },
    #[error("chain enumeration exceeded {MAX_CHAINS} paths")]
    TooManyChains,
    #[error("sample set is empty")]
    EmptySamples,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointRole {
    Endpoint,
    Apct,
    ExtendedPct,
}

/// The augmented point set `T_i` of one sample: interval endpoints plus
/// APCT and extended-PCT points, ascending.
#[derive(Debug, Clone)]
pub struct AugmentedSample {
    pub node_index: usize,
    pub points: Vec<f64>,
    pub roles: Vec<PointRole>,
}

impl AugmentedSample {
    pub fn as_point_set(&self) -> DiscretePointSet {
        DiscretePointSet::new(self.points.clone()).expect("augmented sample is nonempty")
    }
}

/// Layered graph whose layers are the augmented samples and whose edges are
/// the metric pairs between consecutive layers. Root-to-leaf paths are the
/// significant metric chains.
#[derive(Debug, Clone)]
pub struct ChainForest {
    pub layers: Vec<AugmentedSample>,
    /// `edges[i][j]` = indices in layer `i+1` forming metric pairs with
    /// point `j` of layer `i`.
    pub edges: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChainLabel {
    Upper,
    Lower,
    HoleUpper(usize),
    HoleLower(usize),
    Unclassified,
}

/// A significant metric chain with its classification.
#[derive(Debug, Clone)]
pub struct Chain {
    pub values: Vec<f64>,
    pub label: ChainLabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

/// The restriction of a chain to one hole's node range, tracking `g` or `h`.
#[derive(Debug, Clone)]
pub struct BoundaryChain {
    pub hole: usize,
    pub side: Side,
    /// Index of the first node whose sample shows the gap.
    pub start: usize,
    pub values: Vec<f64>,
}

impl BoundaryChain {
    /// Index of the last node in the range.
    pub fn end(&self) -> usize {
        self.start + self.values.len() - 1
    }
}

/// A maximal run of overlapping gaps across consecutive samples: one
/// sampled hole.
#[derive(Debug, Clone)]
pub struct GapRun {
    pub start: usize,
    /// Per-node `(g, h)` values: top of the interval below the gap and
    /// bottom of the interval above it.
    pub bounds: Vec<(f64, f64)>,
}

impl GapRun {
    pub fn end(&self) -> usize {
        self.start + self.bounds.len() - 1
    }
}

/// The per-node endpoint sets (the discrete samples).
pub fn discretize(samples: &SampleSet) -> Vec<DiscretePointSet> {
    samples
        .values
        .iter()
        .map(|v| DiscretePointSet::new(v.endpoints()).expect("sample values are nonempty"))
        .collect()
}

/// APCT points per node: midpoints of a neighbor sample's gaps that land
/// inside this node's sample and outside the neighbor's.
pub fn detect_apct(samples: &SampleSet) -> Vec<Vec<f64>> {
    let n = samples.len();
    let mut out: Vec<Vec<f64>> = vec![Vec::new(); n];
    for (i, row) in out.iter_mut().enumerate() {
        for j in [i.wrapping_sub(1), i + 1] {
            if j >= n {
                continue;
            }
            for (glo, ghi) in samples.values[j].gaps() {
                let p = 0.5 * (glo + ghi);
                if samples.values[i].contains_tol(p, MEMBERSHIP_TOL)
                    && !samples.values[j].contains_tol(p, MEMBERSHIP_TOL)
                    && !row.iter().any(|&q: &f64| (q - p).abs() <= 1e-12)
                {
                    row.push(p);
                }
            }
        }
    }
    for v in &mut out {
        v.sort_by(f64::total_cmp);
    }
    out
}

/// Right/left extended PCT points per node: APCT values propagated across
/// layers while they stay inside the samples.
#[allow(clippy::needless_range_loop)] // the walks break on the first exit, so index ranges read best
pub fn extend_pcts(samples: &SampleSet, apcts: &[Vec<f64>]) -> Vec<(Vec<f64>, Vec<f64>)> {
    let n = samples.len();
    let mut out = vec![(Vec::new(), Vec::new()); n];
    for (j, layer) in apcts.iter().enumerate() {
        for &p in layer {
            // rightward: i > j
            for i in j + 1..n {
                if !samples.values[i].contains_tol(p, MEMBERSHIP_TOL) {
                    break;
                }
                push_unique(&mut out[i].0, p);
            }
            // leftward: i < j
            for i in (0..j).rev() {
                if !samples.values[i].contains_tol(p, MEMBERSHIP_TOL) {
                    break;
                }
                push_unique(&mut out[i].1, p);
            }
        }
    }
    for (r, l) in &mut out {
        r.sort_by(f64::total_cmp);
        l.sort_by(f64::total_cmp);
    }
    out
}

fn push_unique(v: &mut Vec<f64>, p: f64) {
    if !v.iter().any(|&q| (q - p).abs() <= 1e-12) {
        v.push(p);
    }
}

/// Builds the layered chain forest: augmented layers `T_i` connected by
/// metric pairs.
pub fn build_chain_forest(samples: &SampleSet) -> Result<ChainForest, ChainError> {
    if samples.is_empty() {
        return Err(ChainError::EmptySamples);
    }
    let apcts = detect_apct(samples);
    let eps = extend_pcts(samples, &apcts);
    let mut layers = Vec::with_capacity(samples.len());
    for i in 0..samples.len() {
        let mut tagged: Vec<(f64, PointRole)> = samples.values[i]
            .endpoints()
            .into_iter()
            .map(|p| (p, PointRole::Endpoint))
            .collect();
        for &p in &apcts[i] {
            tagged.push((p, PointRole::Apct));
        }
        for &p in eps[i].0.iter().chain(eps[i].1.iter()) {
            tagged.push((p, PointRole::ExtendedPct));
        }
        tagged.sort_by(|a, b| a.0.total_cmp(&b.0));
        // dedup keeping the strongest role: endpoint > apct > extended
        let mut points: Vec<f64> = Vec::with_capacity(tagged.len());
        let mut roles = Vec::with_capacity(tagged.len());
        for (p, role) in tagged {
            match points.last() {
                Some(&last) if (p - last).abs() <= 1e-12 => {
                    let slot = roles.last_mut().unwrap();
                    if rank(role) < rank(*slot) {
                        *slot = role;
                    }
                }
                _ => {
                    points.push(p);
                    roles.push(role);
                }
            }
        }
        layers.push(AugmentedSample { node_index: i, points, roles });
    }
    let mut edges = Vec::with_capacity(layers.len().saturating_sub(1));
    for pair in layers.windows(2) {
        let left = pair[0].as_point_set();
        let right = pair[1].as_point_set();
        let mut adj = vec![Vec::new(); left.len()];
        for (i, j) in metric_pair_indices(&left, &right) {
            adj[i].push(j);
        }
        edges.push(adj);
    }
    Ok(ChainForest { layers, edges })
}

fn rank(role: PointRole) -> u8 {
    match role {
        PointRole::Endpoint => 0,
        PointRole::Apct => 1,
        PointRole::ExtendedPct => 2,
    }
}

/// All root-to-leaf value paths of the forest.
pub fn enumerate_chains(forest: &ChainForest) -> Result<Vec<Vec<f64>>, ChainError> {
    let mut chains = Vec::new();
    let mut stack = Vec::with_capacity(forest.layers.len());
    for start in 0..forest.layers[0].points.len() {
        stack.push(start);
        walk(forest, &mut stack, &mut chains)?;
        stack.pop();
    }
    chains.sort_by(|a, b| {
        a.iter()
            .zip(b.iter())
            .find_map(|(x, y)| {
                let ord = x.total_cmp(y);
                (ord != std::cmp::Ordering::Equal).then_some(ord)
            })
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    chains.dedup();
    Ok(chains)
}

fn walk(
    forest: &ChainForest,
    stack: &mut Vec<usize>,
    out: &mut Vec<Vec<f64>>,
) -> Result<(), ChainError> {
    let layer = stack.len() - 1;
    if layer == forest.layers.len() - 1 {
        if out.len() >= MAX_CHAINS {
            return Err(ChainError::TooManyChains);
        }
        out.push(
            stack
                .iter()
                .enumerate()
                .map(|(i, &j)| forest.layers[i].points[j])
                .collect(),
        );
        return Ok(());
    }
    let last = *stack.last().unwrap();
    for &next in &forest.edges[layer][last] {
        stack.push(next);
        walk(forest, stack, out)?;
        stack.pop();
    }
    Ok(())
}

/// Associates the gaps of consecutive samples into runs, one per sampled
/// hole. Gaps at consecutive nodes belong to the same run iff their open
/// intervals overlap; anything else is ambiguous and rejected.
pub fn gap_runs(samples: &SampleSet) -> Result<Vec<GapRun>, ChainError> {
    let mut finished: Vec<GapRun> = Vec::new();
    let mut active: Vec<GapRun> = Vec::new();
    for (i, value) in samples.values.iter().enumerate() {
        let gaps: Vec<(f64, f64)> = value.gaps().collect();
        let mut matched_runs = vec![false; active.len()];
        let mut next_active: Vec<GapRun> = Vec::new();
        for &(glo, ghi) in &gaps {
            let mut hits = Vec::new();
            for (k, run) in active.iter().enumerate() {
                let &(plo, phi) = run.bounds.last().unwrap();
                if glo < phi && ghi > plo {
                    hits.push(k);
                }
            }
            match hits.len() {
                0 => next_active.push(GapRun { start: i, bounds: vec![(glo, ghi)] }),
                1 => {
                    let k = hits[0];
                    if matched_runs[k] {
                        return Err(ChainError::AmbiguousGapRun { node: i });
                    }
                    matched_runs[k] = true;
                    let mut run = active[k].clone();
                    run.bounds.push((glo, ghi));
                    next_active.push(run);
                }
                _ => return Err(ChainError::AmbiguousGapRun { node: i }),
            }
        }
        for (k, run) in active.drain(..).enumerate() {
            if !matched_runs[k] {
                finished.push(run);
            }
        }
        active = next_active;
    }
    finished.extend(active);
    finished.sort_by(|a, b| {
        a.start
            .cmp(&b.start)
            .then(a.bounds[0].0.total_cmp(&b.bounds[0].0))
    });
    Ok(finished)
}

/// Labels the chains: pointwise max is the upper boundary, pointwise min the
/// lower; remaining chains are matched to the gap run whose endpoints they
/// track, keeping one lower and one upper representative per hole
/// (lexicographically smallest on ties).
pub fn classify_chains(chains: &[Vec<f64>], samples: &SampleSet) -> Result<Vec<Chain>, ChainError> {
    let runs = gap_runs(samples)?;
    let n = samples.len();
    let mut max_chain = vec![f64::NEG_INFINITY; n];
    let mut min_chain = vec![f64::INFINITY; n];
    for chain in chains {
        for (i, &v) in chain.iter().enumerate() {
            max_chain[i] = max_chain[i].max(v);
            min_chain[i] = min_chain[i].min(v);
        }
    }
    let mut out: Vec<Chain> = Vec::with_capacity(chains.len());
    let mut upper_done = false;
    let mut lower_done = false;
    let mut hole_done = vec![(false, false); runs.len()];
    for chain in chains {
        let mut label = ChainLabel::Unclassified;
        if !upper_done && chain == &max_chain {
            label = ChainLabel::Upper;
            upper_done = true;
        } else if !lower_done && chain == &min_chain {
            label = ChainLabel::Lower;
            lower_done = true;
        } else {
            for (j, run) in runs.iter().enumerate() {
                let lower_match = run
                    .bounds
                    .iter()
                    .enumerate()
                    .all(|(t, &(g, _))| (chain[run.start + t] - g).abs() <= MEMBERSHIP_TOL);
                if lower_match && !hole_done[j].0 {
                    label = ChainLabel::HoleLower(j);
                    hole_done[j].0 = true;
                    break;
                }
                let upper_match = run
                    .bounds
                    .iter()
                    .enumerate()
                    .all(|(t, &(_, h))| (chain[run.start + t] - h).abs() <= MEMBERSHIP_TOL);
                if upper_match && !hole_done[j].1 {
                    label = ChainLabel::HoleUpper(j);
                    hole_done[j].1 = true;
                    break;
                }
            }
        }
        out.push(Chain { values: chain.clone(), label });
    }
    Ok(out)
}

/// Per hole, the `(lower, upper)` boundary metric chains over exactly the
/// nodes whose samples show the gap.
pub fn extract_boundary_chains(
    samples: &SampleSet,
) -> Result<Vec<(BoundaryChain, BoundaryChain)>, ChainError> {
    let runs = gap_runs(samples)?;
    Ok(runs
        .iter()
        .enumerate()
        .map(|(j, run)| {
            let lower = BoundaryChain {
                hole: j,
                side: Side::Lower,
                start: run.start,
                values: run.bounds.iter().map(|&(g, _)| g).collect(),
            };
            let upper = BoundaryChain {
                hole: j,
                side: Side::Upper,
                start: run.start,
                values: run.bounds.iter().map(|&(_, h)| h).collect(),
            };
            (lower, upper)
        })
        .collect())
}

/// Text adjacency listing of the forest, for the CLI debug dump.
pub fn dump_forest(forest: &ChainForest, samples: &SampleSet) -> String {
    let mut s = String::new();
    for (i, layer) in forest.layers.iter().enumerate() {
        let x = samples.partition.nodes[i];
        let _ = writeln!(s, "layer {i} (x = {x:.6}):");
        for (j, (&p, role)) in layer.points.iter().zip(&layer.roles).enumerate() {
            let role = match role {
                PointRole::Endpoint => "endpoint",
                PointRole::Apct => "apct",
                PointRole::ExtendedPct => "extended",
            };
            let children: Vec<String> = if i < forest.edges.len() {
                forest.edges[i][j]
                    .iter()
                    .map(|&k| format!("{:.6}", forest.layers[i + 1].points[k]))
                    .collect()
            } else {
                Vec::new()
            };
            let _ = writeln!(s, "  [{j}] {p:.6} ({role}) -> [{}]", children.join(", "));
        }
    }
    s
}
