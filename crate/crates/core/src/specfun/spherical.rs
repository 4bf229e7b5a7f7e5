use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Orthonormal associated Legendre function `P̄_l^m(x)`, `m ≥ 0`, with the
/// Condon–Shortley phase, normalized so that `∫_{-1}^{1} P̄² dx = 1`.
pub fn normalized_legendre(l: usize, m: usize, x: f64) -> Result<f64> {
    if m > l {
        return Err(Error::Domain(format!("order m={m} exceeds degree l={l}")));
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("argument {x} outside [-1, 1]")));
    }
    Ok(legendre_xs(l, m, x, (1.0 - x * x).max(0.0).sqrt()))
}

fn legendre_xs(l: usize, m: usize, x: f64, s: f64) -> f64 {
    let mut pmm = std::f64::consts::FRAC_1_SQRT_2;
    for k in 1..=m {
        let kf = k as f64;
        pmm *= -((2.0 * kf + 1.0) / (2.0 * kf)).sqrt() * s;
    }
    if l == m {
        return pmm;
    }
    let mf = m as f64;
    let mut p_prev = pmm;
    let mut p = (2.0 * mf + 3.0).sqrt() * x * pmm;
    for deg in (m + 2)..=l {
        let lf = deg as f64;
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
        let next = a * (x * p - b * p_prev);
        p_prev = p;
        p = next;
    }
    p
}

/// The polar factor `Θ_lm(θ)` of `Y_lm = Θ_lm(θ) e^{imφ}/√(2π)`.
///
/// Normalized by `∫₀^π Θ_lm² sinθ dθ = 1`; `Θ_{l,−m} = (−1)^m Θ_{lm}`.
pub fn theta_lm(l: usize, m: i32, theta: f64) -> Result<f64> {
    let am = m.unsigned_abs() as usize;
    if am > l {
        return Err(Error::Domain(format!("|m|={am} exceeds l={l}")));
    }
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::Domain(format!("theta={theta} outside [0, π]")));
    }
    let p = legendre_xs(l, am, theta.cos(), theta.sin());
    Ok(if m < 0 && am % 2 == 1 { -p } else { p })
}

/// `Y_lm(θ, φ) = Θ_lm(θ) e^{imφ} / √(2π)`.
pub fn spherical_harmonic(l: usize, m: i32, theta: f64, phi: f64) -> Result<Complex64> {
    let t = theta_lm(l, m, theta)?;
    Ok(Complex64::from_polar(t / (2.0 * PI).sqrt(), m as f64 * phi))
}
