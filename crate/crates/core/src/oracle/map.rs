use num_complex::Complex64;

use crate::density::eval_rho;
use crate::error::{Error, Result};
use crate::params::GaussianAnsatz;
use crate::quad::pairwise_sum;

/// Maps must be this small (relative to their peak) along every edge before
/// they are integrated.
const EDGE_DECAY: f64 = 1e-12;

/// Density matrix sampled on a uniform `(u, v)` grid; `values[i_v][i_u]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMap {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub values: Vec<Vec<Complex64>>,
}

impl DensityMap {
    pub fn from_ansatz(ansatz: &GaussianAnsatz, u: &[f64], v: &[f64]) -> Self {
        Self::from_fn(u, v, |u, v| eval_rho(ansatz, u, v))
    }

    pub fn from_fn<F: Fn(f64, f64) -> Complex64>(u: &[f64], v: &[f64], f: F) -> Self {
        let values = v
            .iter()
            .map(|&v| u.iter().map(|&u| f(u, v)).collect())
            .collect();
        Self {
            u: u.to_vec(),
            v: v.to_vec(),
            values,
        }
    }
}

fn uniform_step(name: &'static str, x: &[f64]) -> Result<f64> {
    if x.len() < 2 {
        return Err(Error::invalid(name, "needs at least two points"));
    }
    let h = (x[x.len() - 1] - x[0]) / (x.len() - 1) as f64;
    if !(h > 0.0) {
        return Err(Error::invalid(name, "must be increasing"));
    }
    for (i, pair) in x.windows(2).enumerate() {
        if ((pair[1] - pair[0]) - h).abs() > 1e-9 * h {
            return Err(Error::invalid(name, format!("is not uniform near index {i}")));
        }
    }
    Ok(h)
}

fn trapezoid(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    let inner = pairwise_sum(&values[1..n - 1]);
    h * (inner + 0.5 * (values[0] + values[n - 1]))
}

/// Purity `∫∫ |ρ(u, v)|² du dv` by the 2-D trapezoid rule, which converges
/// spectrally for maps that have decayed at the edges.
pub fn quadrature_purity(map: &DensityMap) -> Result<f64> {
    let du = uniform_step("u", &map.u)?;
    let dv = uniform_step("v", &map.v)?;
    if map.values.len() != map.v.len() || map.values.iter().any(|r| r.len() != map.u.len()) {
        return Err(Error::invalid("values", "shape does not match the grid"));
    }
    let peak = map
        .values
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let nu = map.u.len();
    let nv = map.v.len();
    let mut edge: f64 = 0.0;
    for row in [&map.values[0], &map.values[nv - 1]] {
        edge = edge.max(row.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    for row in &map.values {
        edge = edge.max(row[0].norm()).max(row[nu - 1].norm());
    }
    if edge > EDGE_DECAY * peak {
        return Err(Error::NumericalGuard(format!(
            "map edge holds {:e} of the peak (limit {EDGE_DECAY:e})",
            edge / peak
        )));
    }
    let rows: Vec<f64> = map
        .values
        .iter()
        .map(|row| {
            let sq: Vec<f64> = row.iter().map(|z| z.norm_sqr()).collect();
            trapezoid(&sq, du)
        })
        .collect();
    Ok(trapezoid(&rows, dv))
}

/// `∫ ρ(u, v) du` of one slice by the trapezoid rule on spacing `du`.
pub fn slice_trace(values: &[Complex64], du: f64) -> Complex64 {
    let re: Vec<f64> = values.iter().map(|z| z.re).collect();
    let im: Vec<f64> = values.iter().map(|z| z.im).collect();
    Complex64::new(trapezoid(&re, du), trapezoid(&im, du))
}

/// Largest pointwise distance between two samples of equal length.
pub fn linf(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "linf needs samples of equal length");
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
