//! Scalar interpolation kernels: barycentric Lagrange polynomials,
//! not-a-knot cubic splines, square-root (half-power) expansions and small
//! root/extremum utilities.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum KernelError {
    #[error("no sign change on [{lo}, {hi}]")]
    NoRootInBracket { lo: f64, hi: f64 },
    #[error("interpolation nodes must be distinct")]
    DuplicateNodes,
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { got: usize, need: usize },
    #[error("nodes must be strictly ascending")]
    UnsortedNodes,
    #[error("non-finite value in input")]
    NonFinite,
}

fn check_finite(values: &[f64]) -> Result<(), KernelError> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(KernelError::NonFinite)
    }
}

/// Polynomial interpolant in barycentric (second) form. Exact at its nodes
/// by construction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyInterpolant {
    nodes: Vec<f64>,
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl PolyInterpolant {
    pub fn fit(nodes: &[f64], values: &[f64]) -> Result<Self, KernelError> {
        if nodes.is_empty() {
            return Err(KernelError::TooFewPoints { got: 0, need: 1 });
        }
        if nodes.len() != values.len() {
            return Err(KernelError::TooFewPoints { got: values.len(), need: nodes.len() });
        }
        check_finite(nodes)?;
        check_finite(values)?;
        let n = nodes.len();
        let mut weights = vec![1.0; n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let d = nodes[i] - nodes[j];
                    if d == 0.0 {
                        return Err(KernelError::DuplicateNodes);
                    }
                    weights[i] /= d;
                }
            }
        }
        Ok(PolyInterpolant {
            nodes: nodes.to_vec(),
            values: values.to_vec(),
            weights,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn degree(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&xj, &fj), &wj) in self.nodes.iter().zip(&self.values).zip(&self.weights) {
            let d = x - xj;
            if d == 0.0 {
                return fj;
            }
            let t = wj / d;
            num += t * fj;
            den += t;
        }
        num / den
    }

    /// First derivative. Uses the differentiation matrix at (or very near)
    /// a node and the quotient rule elsewhere.
    pub fn eval_deriv(&self, x: f64) -> f64 {
        let scale = self
            .nodes
            .iter()
            .map(|n| n.abs())
            .fold(1.0, f64::max);
        if let Some(i) = self
            .nodes
            .iter()
            .position(|&xj| (x - xj).abs() <= 1e-13 * scale)
        {
            let mut sum = 0.0;
            let mut diag = 0.0;
            for j in 0..self.nodes.len() {
                if j == i {
                    continue;
                }
                let dij = (self.weights[j] / self.weights[i]) / (self.nodes[i] - self.nodes[j]);
                sum += dij * self.values[j];
                diag -= dij;
            }
            return sum + diag * self.values[i];
        }
        let mut num = 0.0;
        let mut den = 0.0;
        let mut dnum = 0.0;
        let mut dden = 0.0;
        for ((&xj, &fj), &wj) in self.nodes.iter().zip(&self.values).zip(&self.weights) {
            let d = x - xj;
            let t = wj / d;
            num += t * fj;
            den += t;
            let t2 = wj / (d * d);
            dnum -= t2 * fj;
            dden -= t2;
        }
        let p = num / den;
        (dnum - p * dden) / den
    }
}

/// Maximum of the Lebesgue function of the node set, sampled on a dense
/// grid (ties at nodes evaluate to 1).
pub fn lebesgue_constant(nodes: &[f64], grid_points: usize) -> Result<f64, KernelError> {
    if nodes.len() < 2 {
        return Err(KernelError::TooFewPoints { got: nodes.len(), need: 2 });
    }
    let ones = vec![0.0; nodes.len()];
    let p = PolyInterpolant::fit(nodes, &ones)?; // for the weights only
    let (lo, hi) = nodes
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
    let mut best: f64 = 1.0;
    for k in 0..=grid_points {
        let x = lo + (hi - lo) * k as f64 / grid_points as f64;
        if p.nodes.contains(&x) {
            continue;
        }
        let mut den = 0.0;
        let mut sum_abs = 0.0;
        for (&xj, &wj) in p.nodes.iter().zip(&p.weights) {
            let t = wj / (x - xj);
            den += t;
            sum_abs += t.abs();
        }
        best = best.max(sum_abs / den.abs());
    }
    Ok(best)
}

/// Natural cubic spline pieces with not-a-knot end conditions, built from
/// second-derivative moments.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CubicSpline {
    nodes: Vec<f64>,
    values: Vec<f64>,
    moments: Vec<f64>,
}

impl CubicSpline {
    /// Fits the not-a-knot cubic spline through the given ascending data.
    /// Requires at least four points.
    pub fn fit(nodes: &[f64], values: &[f64]) -> Result<Self, KernelError> {
        let n = nodes.len();
        if n < 4 {
            return Err(KernelError::TooFewPoints { got: n, need: 4 });
        }
        if nodes.len() != values.len() {
            return Err(KernelError::TooFewPoints { got: values.len(), need: n });
        }
        check_finite(nodes)?;
        check_finite(values)?;
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(KernelError::UnsortedNodes);
        }
        let m = n - 1; // intervals
        let h: Vec<f64> = nodes.windows(2).map(|w| w[1] - w[0]).collect();
        let slope = |i: usize| (values[i + 1] - values[i]) / h[i];

        // tridiagonal system in the interior moments M_1 .. M_{m-1}; the end
        // moments are eliminated through third-derivative continuity at the
        // second and second-to-last nodes:
        //   M_0 = (1 + h_0/h_1) M_1 - (h_0/h_1) M_2
        //   M_m = (1 + h_{m-1}/h_{m-2}) M_{m-1} - (h_{m-1}/h_{m-2}) M_{m-2}
        let k = m - 1;
        let mut lower = vec![0.0; k];
        let mut diag = vec![0.0; k];
        let mut upper = vec![0.0; k];
        let mut rhs = vec![0.0; k];
        for t in 0..k {
            let i = t + 1; // continuity equation at node i
            lower[t] = h[i - 1];
            diag[t] = 2.0 * (h[i - 1] + h[i]);
            upper[t] = h[i];
            rhs[t] = 6.0 * (slope(i) - slope(i - 1));
        }
        let r0 = h[0] / h[1];
        diag[0] += lower[0] * (1.0 + r0);
        upper[0] -= lower[0] * r0;
        lower[0] = 0.0;
        let r1 = h[m - 1] / h[m - 2];
        diag[k - 1] += upper[k - 1] * (1.0 + r1);
        lower[k - 1] -= upper[k - 1] * r1;
        upper[k - 1] = 0.0;
        let interior = solve_tridiagonal(&lower, &diag, &upper, &rhs);

        let mut moments = vec![0.0; n];
        moments[1..m].copy_from_slice(&interior);
        moments[0] = (1.0 + r0) * moments[1] - r0 * moments[2];
        moments[m] = (1.0 + r1) * moments[m - 1] - r1 * moments[m - 2];
        Ok(CubicSpline {
            nodes: nodes.to_vec(),
            values: values.to_vec(),
            moments,
        })
    }

    fn segment(&self, x: f64) -> usize {
        self.nodes[1..self.nodes.len() - 1].partition_point(|&n| n <= x)
    }

    /// Evaluates the spline; outside the node range the end cubics are
    /// extended.
    pub fn eval(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let (x0, x1) = (self.nodes[i], self.nodes[i + 1]);
        let h = x1 - x0;
        let (m0, m1) = (self.moments[i], self.moments[i + 1]);
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let a = x1 - x;
        let b = x - x0;
        m0 * a * a * a / (6.0 * h)
            + m1 * b * b * b / (6.0 * h)
            + (y0 / h - m0 * h / 6.0) * a
            + (y1 / h - m1 * h / 6.0) * b
    }

    pub fn eval_deriv(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let (x0, x1) = (self.nodes[i], self.nodes[i + 1]);
        let h = x1 - x0;
        let (m0, m1) = (self.moments[i], self.moments[i + 1]);
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let a = x1 - x;
        let b = x - x0;
        -m0 * a * a / (2.0 * h) + m1 * b * b / (2.0 * h) + (y1 - y0) / h
            + (m0 - m1) * h / 6.0
    }
}

/// Solves a tridiagonal system by the Thomas algorithm. `lower[0]` and
/// `upper[k-1]` are ignored.
fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let k = diag.len();
    let mut c = vec![0.0; k];
    let mut d = vec![0.0; k];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..k {
        let denom = diag[i] - lower[i] * c[i - 1];
        c[i] = if i + 1 < k { upper[i] / denom } else { 0.0 };
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / denom;
    }
    let mut x = d;
    for i in (0..k - 1).rev() {
        let next = x[i + 1];
        x[i] -= c[i] * next;
    }
    x
}

/// A polynomial in `s = sqrt(|x - origin|)`, fitted by Newton divided
/// differences. Captures half-power (square-root) behavior at `origin`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SingularExpansion {
    origin: f64,
    s_nodes: Vec<f64>,
    coeffs: Vec<f64>,
}

impl SingularExpansion {
    /// Fits through `(x_i, y_i)` with `s_i = sqrt(|x_i - origin|)`; the `s_i`
    /// must be distinct.
    pub fn fit(origin: f64, data: &[(f64, f64)]) -> Result<Self, KernelError> {
        if data.is_empty() {
            return Err(KernelError::TooFewPoints { got: 0, need: 1 });
        }
        let s_nodes: Vec<f64> = data.iter().map(|&(x, _)| (x - origin).abs().sqrt()).collect();
        check_finite(&s_nodes)?;
        let ys: Vec<f64> = data.iter().map(|&(_, y)| y).collect();
        check_finite(&ys)?;
        // Newton divided-difference table, in place
        let mut coeffs = ys;
        for level in 1..coeffs.len() {
            for i in (level..coeffs.len()).rev() {
                let denom = s_nodes[i] - s_nodes[i - level];
                if denom == 0.0 {
                    return Err(KernelError::DuplicateNodes);
                }
                coeffs[i] = (coeffs[i] - coeffs[i - 1]) / denom;
            }
        }
        Ok(SingularExpansion { origin, s_nodes, coeffs })
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn eval(&self, x: f64) -> f64 {
        let s = (x - self.origin).abs().sqrt();
        let mut acc = *self.coeffs.last().unwrap();
        for i in (0..self.coeffs.len() - 1).rev() {
            acc = acc * (s - self.s_nodes[i]) + self.coeffs[i];
        }
        acc
    }
}

/// Bisection to absolute `x` tolerance `1e-12`; requires a sign change.
pub fn bracketed_root(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
) -> Result<f64, KernelError> {
    let (mut lo, mut hi) = (lo, hi);
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return Err(KernelError::NoRootInBracket { lo, hi });
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Minimum of `p` over `[lo, hi]`: scan of 1000 subintervals, refined by
/// bisection on the derivative around the grid minimum. Returns
/// `(argmin, min)`.
pub fn poly_min_on_interval(p: &PolyInterpolant, lo: f64, hi: f64) -> (f64, f64) {
    const STEPS: usize = 1000;
    let step = (hi - lo) / STEPS as f64;
    let mut best_x = lo;
    let mut best_y = p.eval(lo);
    for k in 1..=STEPS {
        let x = if k == STEPS { hi } else { lo + k as f64 * step };
        let y = p.eval(x);
        if y < best_y {
            best_x = x;
            best_y = y;
        }
    }
    let wlo = (best_x - step).max(lo);
    let whi = (best_x + step).min(hi);
    if let Ok(x) = bracketed_root(|x| p.eval_deriv(x), wlo, whi) {
        let y = p.eval(x);
        if y < best_y {
            return (x, y);
        }
    }
    (best_x, best_y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::chebyshev_partition;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn barycentric_exact_at_nodes_and_reproduces_polynomials() {
        let nodes = [-1.0, -0.3, 0.2, 0.9, 1.4];
        let f = |x: f64| 2.0 - x + 3.0 * x * x - 0.5 * x * x * x;
        let values: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
        let p = PolyInterpolant::fit(&nodes, &values).unwrap();
        for &x in &nodes {
            assert_eq!(p.eval(x), f(x));
        }
        for k in 0..50 {
            let x = -1.0 + 2.4 * k as f64 / 49.0;
            assert!((p.eval(x) - f(x)).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn barycentric_derivative_matches_analytic() {
        let nodes = [-1.0, -0.5, 0.0, 0.5, 1.0];
        let f = |x: f64| x * x * x - 2.0 * x;
        let df = |x: f64| 3.0 * x * x - 2.0;
        let values: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
        let p = PolyInterpolant::fit(&nodes, &values).unwrap();
        for k in 0..=20 {
            let x = -1.0 + 2.0 * k as f64 / 20.0;
            assert!((p.eval_deriv(x) - df(x)).abs() < 1e-10, "x = {x}");
        }
        // right on a node, the differentiation-matrix path
        assert!((p.eval_deriv(0.5) - df(0.5)).abs() < 1e-12);
    }

    #[test]
    fn duplicate_nodes_rejected() {
        assert_eq!(
            PolyInterpolant::fit(&[0.0, 0.0], &[1.0, 2.0]).unwrap_err(),
            KernelError::DuplicateNodes
        );
    }

    #[test]
    fn lebesgue_constant_chebyshev_10() {
        // frozen from a dense-grid evaluation: Lambda_10 for the Chebyshev
        // roots is about 2.49
        let nodes = chebyshev_partition(10, -1.0, 1.0).nodes;
        let lam = lebesgue_constant(&nodes, 4000).unwrap();
        assert!((2.0..=2.6).contains(&lam), "lambda = {lam}");
    }

    #[test]
    fn lebesgue_constant_grows_for_uniform_nodes() {
        let cheb = chebyshev_partition(12, -1.0, 1.0).nodes;
        let unif: Vec<f64> = (0..=12).map(|i| -1.0 + i as f64 / 6.0).collect();
        let lc = lebesgue_constant(&cheb, 4000).unwrap();
        let lu = lebesgue_constant(&unif, 4000).unwrap();
        assert!(lu > 10.0 * lc, "cheb {lc} uniform {lu}");
    }

    #[test]
    fn value_perturbation_bounded_by_lebesgue_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let nodes = chebyshev_partition(10, -1.0, 1.0).nodes;
        let lam = lebesgue_constant(&nodes, 4000).unwrap();
        for _ in 0..20 {
            let values: Vec<f64> = nodes.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
            let eps = 1e-3;
            let perturbed: Vec<f64> = values
                .iter()
                .map(|v| v + rng.gen_range(-eps..eps))
                .collect();
            let p = PolyInterpolant::fit(&nodes, &values).unwrap();
            let q = PolyInterpolant::fit(&nodes, &perturbed).unwrap();
            for k in 0..=200 {
                let x = -1.0 + k as f64 / 100.0;
                let diff = (p.eval(x) - q.eval(x)).abs();
                assert!(diff <= lam * eps * (1.0 + 1e-9), "x = {x}, diff = {diff}");
            }
        }
    }

    #[test]
    fn spline_reproduces_cubics() {
        let nodes: Vec<f64> = (0..=8).map(|i| i as f64 / 8.0).collect();
        let f = |x: f64| 1.0 + x - 2.0 * x * x + 0.7 * x * x * x;
        let values: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
        let s = CubicSpline::fit(&nodes, &values).unwrap();
        for k in 0..=100 {
            let x = k as f64 / 100.0;
            assert!((s.eval(x) - f(x)).abs() < 1e-12, "x = {x}");
        }
        // not-a-knot extends the end cubic beyond the data
        assert!((s.eval(1.1) - f(1.1)).abs() < 1e-11);
    }

    #[test]
    fn spline_fourth_order_error_ratio() {
        // halving the spacing divides the max error of a smooth function by
        // about 2^4 = 16
        let f = |x: f64| (2.5 * x).sin();
        let err = |n: usize| {
            let nodes: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
            let values: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
            let s = CubicSpline::fit(&nodes, &values).unwrap();
            (0..=2000)
                .map(|k| {
                    let x = k as f64 / 2000.0;
                    (s.eval(x) - f(x)).abs()
                })
                .fold(0.0, f64::max)
        };
        let ratio = err(16) / err(32);
        assert!((12.0..=20.0).contains(&ratio), "ratio = {ratio}");
    }

    #[test]
    fn spline_interpolates_data() {
        let nodes = [0.0, 0.3, 0.7, 1.0, 1.6];
        let values = [1.0, -0.5, 2.0, 0.0, 1.0];
        let s = CubicSpline::fit(&nodes, &values).unwrap();
        for (&x, &y) in nodes.iter().zip(&values) {
            assert!((s.eval(x) - y).abs() < 1e-12);
        }
        // derivative consistent with a central difference
        let h = 1e-6;
        for x in [0.15, 0.5, 0.85, 1.3] {
            let fd = (s.eval(x + h) - s.eval(x - h)) / (2.0 * h);
            assert!((s.eval_deriv(x) - fd).abs() < 1e-6);
        }
    }

    #[test]
    fn spline_needs_four_points() {
        assert!(matches!(
            CubicSpline::fit(&[0.0, 1.0, 2.0], &[0.0, 1.0, 0.0]),
            Err(KernelError::TooFewPoints { need: 4, .. })
        ));
    }

    #[test]
    fn singular_expansion_reproduces_half_powers() {
        // y = 2 - 3 sqrt(x) + 0.5 x = p(s) with s = sqrt(x)
        let f = |x: f64| 2.0 - 3.0 * x.sqrt() + 0.5 * x;
        let data: Vec<(f64, f64)> = [0.0, 0.1, 0.4, 0.9].iter().map(|&x| (x, f(x))).collect();
        let p = SingularExpansion::fit(0.0, &data).unwrap();
        for k in 0..=50 {
            let x = k as f64 / 50.0;
            assert!((p.eval(x) - f(x)).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn singular_expansion_shifted_origin() {
        let x0 = 0.25;
        let f = |x: f64| 1.0 + 4.0 * (x - x0).sqrt();
        let data: Vec<(f64, f64)> = [0.25, 0.5, 1.0].iter().map(|&x| (x, f(x))).collect();
        let p = SingularExpansion::fit(x0, &data).unwrap();
        assert!((p.eval(0.75) - f(0.75)).abs() < 1e-12);
        assert_eq!(p.eval(x0), 1.0);
    }

    #[test]
    fn bracketed_root_examples() {
        let r = bracketed_root(|x| x * x - 2.0, 0.0, 2.0).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-11);
        assert!(matches!(
            bracketed_root(|x| x * x + 1.0, -1.0, 1.0),
            Err(KernelError::NoRootInBracket { .. })
        ));
    }

    #[test]
    fn poly_min_examples() {
        // parabola with interior minimum
        let nodes = [0.0, 0.5, 1.0];
        let f = |x: f64| (x - 0.3) * (x - 0.3) + 1.0;
        let values: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
        let p = PolyInterpolant::fit(&nodes, &values).unwrap();
        let (x, y) = poly_min_on_interval(&p, 0.0, 1.0);
        assert!((x - 0.3).abs() < 1e-9);
        assert!((y - 1.0).abs() < 1e-12);

        // monotone restriction: minimum at the left endpoint
        let (x, y) = poly_min_on_interval(&p, 0.6, 1.0);
        assert_eq!(x, 0.6);
        assert!((y - f(0.6)).abs() < 1e-12);
    }
}
