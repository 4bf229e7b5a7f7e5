use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest Hermite order accepted by [`hermite_function`].
pub const MAX_HERMITE_ORDER: usize = 2000;

/// Physicists' Hermite polynomial `H_n(ξ)` via `H_{n+1} = 2ξH_n − 2nH_{n−1}`.
///
/// Returns a range error if the value overflows `f64`.
pub fn hermite_polynomial(n: usize, xi: f64) -> Result<f64> {
    let mut h_prev = 0.0;
    let mut h = 1.0;
    for k in 0..n {
        let next = 2.0 * xi * h - 2.0 * k as f64 * h_prev;
        h_prev = h;
        h = next;
    }
    if h.is_finite() {
        Ok(h)
    } else {
        Err(Error::Range(format!("H_{n}({xi}) overflows f64")))
    }
}

/// Normalized Hermite function `h_n(ξ) = (2ⁿ n! √π)^{-1/2} e^{-ξ²/2} H_n(ξ)`.
///
/// Evaluated by the recurrence on `h_n` itself, so no factorial appears.
pub fn hermite_function(n: usize, xi: f64) -> Result<f64> {
    Ok(hermite_functions(n, xi)?[n])
}

/// All of `h_0(ξ), …, h_n(ξ)`.
pub fn hermite_functions(n: usize, xi: f64) -> Result<Vec<f64>> {
    if n > MAX_HERMITE_ORDER {
        return Err(Error::Range(format!(
            "Hermite order {n} exceeds supported maximum {MAX_HERMITE_ORDER}"
        )));
    }
    if !xi.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {xi}")));
    }
    let mut out = Vec::with_capacity(n + 1);
    out.push(PI.powf(-0.25) * (-0.5 * xi * xi).exp());
    if n >= 1 {
        out.push(2f64.sqrt() * xi * out[0]);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * xi * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    Ok(out)
}
