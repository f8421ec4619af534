//! Composite Gauss–Legendre quadrature with doubling refinement.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

/// Configuration for the fixed-node composite rule.
///
/// Integration starts at `nodes` total nodes, doubles until two successive
/// estimates agree to `rel_tol` (relative, with an absolute floor of 1 in
/// the denominator scale) and errors out past `max_nodes`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub nodes: usize,
    pub max_nodes: usize,
    pub rel_tol: f64,
    /// Substitute `p = sin^2(theta)` when a beta endpoint density is
    /// unbounded (alpha < 1 or beta < 1), which turns the integrable
    /// singularity into a smooth integrand.
    pub endpoint_substitution: bool,
}

impl QuadratureSpec {
    pub const MIN_NODES: usize = 64;

    pub fn new(nodes: usize) -> Result<Self> {
        if nodes < Self::MIN_NODES {
            return Err(Error::InvalidQuadratureSpec {
                min: Self::MIN_NODES,
                got: nodes,
            });
        }
        Ok(Self {
            nodes,
            ..Self::default()
        })
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            nodes: 64,
            max_nodes: 8192,
            rel_tol: 1e-6,
            endpoint_substitution: true,
        }
    }
}

/// Gauss–Legendre nodes and weights on (-1, 1), by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n / 2 {
        // Tricomi-style initial guess, then Newton.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let delta = p / d;
            x -= delta;
            if delta.abs() <= 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        let (_, d) = legendre_with_derivative(n, 0.0);
        nodes[n / 2] = 0.0;
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrates `f` over consecutive segments with `total_nodes` distributed
/// proportionally to segment length (at least 8 per segment).
fn composite(f: &dyn Fn(f64) -> f64, segments: &[(f64, f64)], total_nodes: usize) -> f64 {
    let total_len: f64 = segments.iter().map(|(a, b)| b - a).sum();
    let mut acc = CompensatedSum::new();
    for &(a, b) in segments {
        if b <= a {
            continue;
        }
        let share = ((total_nodes as f64) * (b - a) / total_len).ceil() as usize;
        let n = share.max(8);
        let (nodes, weights) = gauss_legendre(n);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut seg = CompensatedSum::new();
        for (x, w) in nodes.iter().zip(&weights) {
            seg.add(w * f(mid + half * x));
        }
        acc.add(half * seg.total());
    }
    acc.total()
}

/// Refining composite integral of `f` over `segments`.
///
/// Segment boundaries must include every non-smooth point of `f`; the rule
/// never evaluates `f` at a boundary.
pub fn integrate(
    f: impl Fn(f64) -> f64,
    segments: &[(f64, f64)],
    spec: &QuadratureSpec,
) -> Result<f64> {
    let f: &dyn Fn(f64) -> f64 = &f;
    let mut n = spec.nodes.max(QuadratureSpec::MIN_NODES);
    let mut prev = composite(f, segments, n);
    let mut last_delta = f64::INFINITY;
    while n * 2 <= spec.max_nodes {
        n *= 2;
        let cur = composite(f, segments, n);
        last_delta = (cur - prev).abs();
        if last_delta <= spec.rel_tol * cur.abs().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::QuadratureDidNotConverge {
        delta: last_delta,
        tol: spec.rel_tol,
        nodes: n,
    })
}
