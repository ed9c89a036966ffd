//! Entire functions used to write the damped closed forms without `1/γ^k`
//! singularities.
//!
//! `phi(k, z) = Σ_{j≥0} z^j / (j + k)!`, so `phi(0, z) = e^z`,
//! `phi(1, z) = (e^z − 1)/z`, `phi(2, z) = (e^z − 1 − z)/z²` and so on.
//! The subtracted closed forms lose roughly `k·log10(1/|z|)` digits near
//! zero, so the Taylor series is used for `|z| ≤ 1`.

const SERIES_RADIUS: f64 = 1.0;

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

fn phi_series(k: u32, z: f64) -> f64 {
    let mut term = 1.0 / factorial(k);
    let mut sum = term;
    for j in 1..60 {
        term *= z / (j + k) as f64;
        sum += term;
        if term.abs() <= f64::EPSILON * 0.25 * sum.abs() {
            break;
        }
    }
    sum
}

/// `(e^z − 1) / z`, equal to 1 at `z = 0`.
pub fn phi1(z: f64) -> f64 {
    if z == 0.0 {
        1.0
    } else {
        z.exp_m1() / z
    }
}

/// `(e^z − 1 − z) / z²`, equal to 1/2 at `z = 0`.
pub fn phi2(z: f64) -> f64 {
    if z.abs() <= SERIES_RADIUS {
        phi_series(2, z)
    } else {
        (z.exp_m1() - z) / (z * z)
    }
}

/// `(e^z − 1 − z − z²/2) / z³`, equal to 1/6 at `z = 0`.
pub fn phi3(z: f64) -> f64 {
    if z.abs() <= SERIES_RADIUS {
        phi_series(3, z)
    } else {
        (z.exp_m1() - z - 0.5 * z * z) / (z * z * z)
    }
}

/// `sinh(x) / x`, equal to 1 at `x = 0`.
pub fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 + x * x / 6.0
    } else {
        x.sinh() / x
    }
}
