//! Convergence measurement: max-over-grid Hausdorff errors, PCT errors,
//! N-sweeps with per-method rate ratios and log-log slope estimation.

use thiserror::Error;

use crate::model::{chebyshev_partition, uniform_partition, ModelError, SvfModel};
use crate::reconstruct::{
    reconstruct_c4, reconstruct_holder, reconstruct_metric_poly, Approximant, ReconstructError,
};
use crate::sets::hausdorff;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Reconstruct(#[from] ReconstructError),
    #[error("need at least {need} data points, got {got}")]
    TooFewPoints { got: usize, need: usize },
    #[error("log-log slope needs positive values, got ({delta}, {error})")]
    NonPositive { delta: f64, error: f64 },
}

/// Reconstruction method selector for sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    MetricPoly,
    C4,
    Holder { k: usize, r: usize },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::MetricPoly => "metric-poly",
            Method::C4 => "c4",
            Method::Holder { .. } => "holder",
        }
    }

    fn default_grid(&self, n: usize) -> usize {
        match self {
            Method::MetricPoly => 2 * n,
            _ => 400,
        }
    }
}

/// One sweep row.
#[derive(Debug, Clone)]
pub struct SweepRecord {
    pub n: usize,
    pub delta: f64,
    pub max_error: f64,
    /// `max_error / (log N / N)` for the metric-polynomial method,
    /// `max_error / Δ⁴` for the C4 method, absent for the regularized
    /// method (its rate is read from the log-log slope instead).
    pub ratio: Option<f64>,
    pub pct_error_left: Option<f64>,
    pub pct_error_right: Option<f64>,
}

/// Sweep output: per-N records, per-N failures, and the overall error
/// slope (excluding the two smallest N, which are pre-asymptotic).
#[derive(Debug, Clone)]
pub struct ErrorReport {
    pub method: String,
    pub model: String,
    pub records: Vec<SweepRecord>,
    pub failures: Vec<(usize, String)>,
    pub slope: Option<f64>,
}

/// Max of the Hausdorff distance between model and approximant over
/// `grid_count` equidistant points of `[a, b]`.
pub fn max_hausdorff_error(
    model: &SvfModel,
    approx: &Approximant,
    grid_count: usize,
) -> Result<f64, BenchError> {
    if grid_count < 2 {
        return Err(BenchError::TooFewPoints { got: grid_count, need: 2 });
    }
    let mut worst: f64 = 0.0;
    for j in 0..grid_count {
        let x = model.a + (model.b - model.a) * j as f64 / (grid_count - 1) as f64;
        let truth = model.evaluate(x)?;
        let got = approx.evaluate(x)?;
        worst = worst.max(hausdorff(&truth, &got));
    }
    Ok(worst)
}

/// Euclidean distance between a true and an estimated PCT.
pub fn pct_error(true_pct: (f64, f64), approx_pct: (f64, f64)) -> f64 {
    let dx = true_pct.0 - approx_pct.0;
    let dy = true_pct.1 - approx_pct.1;
    dx.hypot(dy)
}

/// Least-squares slope of `log error` against `log Δ`.
pub fn loglog_slope(deltas: &[f64], errors: &[f64]) -> Result<f64, BenchError> {
    if deltas.len() < 2 || deltas.len() != errors.len() {
        return Err(BenchError::TooFewPoints { got: deltas.len().min(errors.len()), need: 2 });
    }
    let mut xs = Vec::with_capacity(deltas.len());
    let mut ys = Vec::with_capacity(deltas.len());
    for (&d, &e) in deltas.iter().zip(errors) {
        if d <= 0.0 || e <= 0.0 {
            return Err(BenchError::NonPositive { delta: d, error: e });
        }
        xs.push(d.ln());
        ys.push(e.ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    Ok(num / den)
}

/// Runs the reconstruction for each N, measures errors, and estimates the
/// convergence slope. Per-N failures are recorded and the sweep continues.
/// `grid_count = None` uses the method default (2N for metric-poly,
/// 400 otherwise).
pub fn sweep(
    model: &SvfModel,
    method: Method,
    n_list: &[usize],
    grid_count: Option<usize>,
) -> ErrorReport {
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for &n in n_list {
        match sweep_one(model, method, n, grid_count.unwrap_or_else(|| method.default_grid(n))) {
            Ok(rec) => records.push(rec),
            Err(e) => failures.push((n, e.to_string())),
        }
    }
    records.sort_by_key(|r| r.n);
    // slope over the asymptotic regime: drop the two smallest N
    let slope = if records.len() >= 4 {
        let deltas: Vec<f64> = records[2..].iter().map(|r| r.delta).collect();
        let errors: Vec<f64> = records[2..].iter().map(|r| r.max_error).collect();
        loglog_slope(&deltas, &errors).ok()
    } else {
        None
    };
    ErrorReport {
        method: method.name().to_string(),
        model: model.name.clone(),
        records,
        failures,
        slope,
    }
}

fn sweep_one(
    model: &SvfModel,
    method: Method,
    n: usize,
    grid_count: usize,
) -> Result<SweepRecord, BenchError> {
    let partition = match method {
        Method::MetricPoly => chebyshev_partition(n, model.a, model.b),
        _ => uniform_partition(n, model.a, model.b),
    };
    let samples = model.sample(&partition)?;
    let approx = match method {
        Method::MetricPoly => reconstruct_metric_poly(&samples)?,
        Method::C4 => reconstruct_c4(&samples)?,
        Method::Holder { k, r } => reconstruct_holder(&samples, k, r)?,
    };
    let max_error = max_hausdorff_error(model, &approx, grid_count)?;
    let delta = (model.b - model.a) / n as f64;
    let ratio = match method {
        Method::MetricPoly => {
            let nf = n as f64;
            Some(max_error / (nf.ln() / nf))
        }
        Method::C4 => Some(max_error / delta.powi(4)),
        Method::Holder { .. } => None,
    };
    let (mut left, mut right) = (None, None);
    if !model.holes.is_empty() && !approx.holes.is_empty() {
        let (true_l, true_r) = model.hole_pcts(0);
        left = Some(pct_error(true_l, approx.holes[0].pct_left));
        right = Some(pct_error(true_r, approx.holes[0].pct_right));
    }
    Ok(SweepRecord {
        n,
        delta,
        max_error,
        ratio,
        pct_error_left: left,
        pct_error_right: right,
    })
}

/// Renders a report as CSV. The overall slope is repeated on every row;
/// absent values are left empty.
pub fn to_csv(report: &ErrorReport) -> String {
    let mut out = String::from("method,model,N,delta,max_error,ratio,pct_error_left,pct_error_right,slope\n");
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in &report.records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            report.method,
            report.model,
            r.n,
            r.delta,
            r.max_error,
            opt(r.ratio),
            opt(r.pct_error_left),
            opt(r.pct_error_right),
            opt(report.slope),
        ));
    }
    out
}
