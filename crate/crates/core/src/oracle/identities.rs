//! Closed-form trigonometric and power sums that connect the sine expansion
//! of the 1D inverse with its piecewise-linear closed form.

use crate::error::{Error, Result};

/// `s_n(z) = sum_{k=1}^n k z^k`.
pub fn weighted_geometric_sum(n: u32, z: f64) -> f64 {
    let nf = f64::from(n);
    if z == 1.0 {
        0.5 * nf * (nf + 1.0)
    } else {
        z * (1.0 - (nf + 1.0) * z.powi(n as i32) + nf * z.powi(n as i32 + 1)) / ((1.0 - z) * (1.0 - z))
    }
}

/// `(sin(m x), cos(m x))` with the rounding error of the product `m x`
/// carried as a first-order correction.
fn sin_cos_of_product(m: f64, x: f64) -> (f64, f64) {
    let p = m * x;
    let err = m.mul_add(x, -p);
    let (s, c) = p.sin_cos();
    (s + err * c, c - err * s)
}

/// `sin(pi m / d)` with the argument reduced exactly modulo `2 pi`.
fn sin_pi_ratio(m: usize, d: usize) -> f64 {
    (std::f64::consts::PI * (m % (2 * d)) as f64 / d as f64).sin()
}

fn check_pole(x: f64) -> Result<f64> {
    let half = (x / 2.0).sin();
    // sin(x/2) vanishes exactly at the poles x = 2 p pi
    if half.abs() < 1e-8 {
        Err(Error::Domain(format!("x = {x} is a multiple of 2 pi")))
    } else {
        Ok(4.0 * half * half)
    }
}

/// `sum_{k=1}^n k sin(k x)` in closed form.
pub fn weighted_sine_sum(n: u32, x: f64) -> Result<f64> {
    let denom = check_pole(x)?;
    let nf = f64::from(n);
    let (sin_n, _) = sin_cos_of_product(nf, x);
    let (sin_n1, _) = sin_cos_of_product(nf + 1.0, x);
    Ok(((nf + 1.0) * sin_n - nf * sin_n1) / denom)
}

/// `sum_{k=1}^n k cos(k x)` in closed form.
pub fn weighted_cosine_sum(n: u32, x: f64) -> Result<f64> {
    let denom = check_pole(x)?;
    let nf = f64::from(n);
    let (_, cos_n) = sin_cos_of_product(nf, x);
    let (_, cos_n1) = sin_cos_of_product(nf + 1.0, x);
    Ok(((nf + 1.0) * cos_n - nf * cos_n1 - 1.0) / denom)
}

/// `sum_{j=1}^n sin^2(k pi j / (n+1))`, which equals `(n+1)/2` for `1 <= k <= n`.
pub fn sine_square_sum(n: usize, k: usize) -> f64 {
    (1..=n)
        .map(|j| {
            let s = sin_pi_ratio(k * j, n + 1);
            s * s
        })
        .sum()
}

/// Closed form of `sum_{j=1}^n (j-k)_+ sin(j l pi h)` with `h = 1/(n+1)`.
pub fn ramp_sine_sum(n: usize, k: usize, l: usize) -> f64 {
    let half = (l as f64 * std::f64::consts::PI / (2.0 * (n as f64 + 1.0))).sin();
    let num = (n as f64 - k as f64 + 1.0) * sin_pi_ratio(n * l, n + 1) - sin_pi_ratio(k * l, n + 1);
    num / (4.0 * half * half)
}

/// Direct summation of the ramp-weighted sine sum.
pub fn ramp_sine_sum_direct(n: usize, k: usize, l: usize) -> f64 {
    (k + 1..=n)
        .map(|j| (j - k) as f64 * sin_pi_ratio(j * l, n + 1))
        .sum()
}
