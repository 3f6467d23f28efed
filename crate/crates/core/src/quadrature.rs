//! Composite Gauss–Legendre quadrature.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Roots of `P_n` by Newton iteration from the Chebyshev-like guess
    /// `cos(π(i - 1/4)/(n + 1/2))`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let half = n.div_ceil(2);
        for i in 0..half {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Equal panels on `[a, b]`, each integrated with the same Gauss–Legendre
/// rule.
#[derive(Debug, Clone)]
pub struct CompositeRule {
    rule: GaussLegendre,
    panels: usize,
}

/// Order of the per-panel rule used by [`CompositeRule::with_nodes`].
pub const PANEL_ORDER: usize = 16;

impl CompositeRule {
    pub fn new(order: usize, panels: usize) -> Self {
        assert!(panels >= 1);
        Self {
            rule: GaussLegendre::new(order),
            panels,
        }
    }

    /// At least `nodes` evaluation points, in panels of [`PANEL_ORDER`].
    pub fn with_nodes(nodes: usize) -> Self {
        Self::new(PANEL_ORDER, nodes.div_ceil(PANEL_ORDER).max(1))
    }

    pub fn node_count(&self) -> usize {
        self.panels * self.rule.nodes().len()
    }

    /// Abscissae and weights mapped onto `[a, b]`.
    pub fn points(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let width = (b - a) / self.panels as f64;
        (0..self.panels).flat_map(move |p| {
            let mid = a + (p as f64 + 0.5) * width;
            let half = 0.5 * width;
            self.rule
                .nodes()
                .iter()
                .zip(self.rule.weights())
                .map(move |(x, w)| (mid + half * x, half * w))
        })
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.points(a, b).map(|(x, w)| w * f(x)).sum()
    }
}
