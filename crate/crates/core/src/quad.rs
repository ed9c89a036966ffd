//! Gauss-Legendre quadrature and reproducible summation.

use num_complex::Complex64;

/// Nodes and weights of an `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrates `f` over `[a, b]` with a single panel.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .collect();
        half * pairwise_sum(&terms)
    }

    pub fn integrate_complex<F: Fn(f64) -> Complex64>(&self, f: F, a: f64, b: f64) -> Complex64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let values: Vec<Complex64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| f(mid + half * x) * *w)
            .collect();
        let re: Vec<f64> = values.iter().map(|z| z.re).collect();
        let im: Vec<f64> = values.iter().map(|z| z.im).collect();
        Complex64::new(pairwise_sum(&re), pairwise_sum(&im)) * half
    }

    /// Composite rule with `panels` equal panels on `[a, b]`.
    pub fn composite<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64, panels: usize) -> f64 {
        let (nodes, weights) = self.composite_nodes(&uniform_breaks(a, b, panels));
        let terms: Vec<f64> = nodes.iter().zip(&weights).map(|(x, w)| w * f(*x)).collect();
        pairwise_sum(&terms)
    }

    pub fn composite_complex<F: Fn(f64) -> Complex64>(
        &self,
        f: F,
        a: f64,
        b: f64,
        panels: usize,
    ) -> Complex64 {
        let (nodes, weights) = self.composite_nodes(&uniform_breaks(a, b, panels));
        let values: Vec<Complex64> = nodes.iter().zip(&weights).map(|(x, w)| f(*x) * *w).collect();
        let re: Vec<f64> = values.iter().map(|z| z.re).collect();
        let im: Vec<f64> = values.iter().map(|z| z.im).collect();
        Complex64::new(pairwise_sum(&re), pairwise_sum(&im))
    }

    /// Absolute nodes and weights of the composite rule on the panels
    /// delimited by the sorted `breaks`.
    pub fn composite_nodes(&self, breaks: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut nodes = Vec::with_capacity(self.len() * breaks.len());
        let mut weights = Vec::with_capacity(self.len() * breaks.len());
        for pair in breaks.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (b + a);
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                nodes.push(mid + half * x);
                weights.push(half * w);
            }
        }
        (nodes, weights)
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `panels + 1` equally spaced break points on `[a, b]`.
pub fn uniform_breaks(a: f64, b: f64, panels: usize) -> Vec<f64> {
    let panels = panels.max(1);
    (0..=panels)
        .map(|i| a + (b - a) * i as f64 / panels as f64)
        .collect()
}

/// Pairwise (cascade) summation; the result depends only on the slice
/// contents and order, never on thread scheduling.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        values.iter().sum()
    } else {
        let mid = values.len() / 2;
        pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
    }
}

/// `n` equally spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}
