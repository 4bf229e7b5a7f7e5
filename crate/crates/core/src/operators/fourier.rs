//! Circle and fixed-`l` sphere states: exact evaluation through pair densities.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::Observable;
use crate::algebra::{phi_power_moment, PairDensity};
use crate::error::Result;
use crate::specfun::{gauss_legendre, theta_lm};
use crate::states::{Family, PeriodicState, SphereState};

/// `(e_m, φ^p e_r)` over `−M ≤ m, r ≤ M`; Hermitian by construction.
fn phi_power_matrix(p: u32, truncation: u32) -> DMatrix<Complex64> {
    let m_max = truncation as i32;
    let n = 2 * truncation as usize + 1;
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let (m, r) = (i as i32 - m_max, j as i32 - m_max);
            let v = phi_power_moment(p, r - m);
            out[(i, j)] = v;
            out[(j, i)] = v.conj();
        }
        out[(i, i)].im = 0.0;
    }
    out
}

/// `Φ_{mr} = (e_m, φ e_r)`: `π` on the diagonal, `i/(m − r)` off it.
pub fn phi_matrix(truncation: u32) -> DMatrix<Complex64> {
    phi_power_matrix(1, truncation)
}

/// `(e_m, φ² e_r)`: `4π²/3` on the diagonal, `−2πi/(r − m) + 2/(r − m)²` off it.
pub fn phi2_matrix(truncation: u32) -> DMatrix<Complex64> {
    phi_power_matrix(2, truncation)
}

/// Polar overlaps `O_{mr} = ∫₀^π Θ_lm Θ_lr sinθ dθ`, indexed by `m + l`.
///
/// `Θ_lm Θ_lr` is a polynomial in `cosθ` of degree at most `2l` when
/// `m + r` is even and an odd function otherwise, so Gauss–Legendre with
/// `l + 8` nodes is exact.
pub fn theta_overlaps(l: u32) -> Result<DMatrix<f64>> {
    let rule = gauss_legendre(l as usize + 8)?;
    let size = 2 * l as usize + 1;
    let li = l as i32;
    let mut table = DMatrix::zeros(rule.len(), size);
    for (k, &x) in rule.nodes.iter().enumerate() {
        let theta = x.clamp(-1.0, 1.0).acos();
        for m in -li..=li {
            table[(k, (m + li) as usize)] = theta_lm(l as usize, m, theta)?;
        }
    }
    let mut out = DMatrix::zeros(size, size);
    for i in 0..size {
        for j in i..size {
            let v: f64 = (0..rule.len()).map(|k| rule.weights[k] * table[(k, i)] * table[(k, j)]).sum();
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    Ok(out)
}

/// Exact evaluator for circle and sphere states.
#[derive(Debug, Clone)]
pub struct FourierEvaluator {
    family: Family,
    hbar: f64,
    density: PairDensity,
    boundary: Option<Complex64>,
}

impl FourierEvaluator {
    pub fn periodic(state: &PeriodicState) -> Self {
        Self {
            family: Family::Periodic,
            hbar: state.hbar(),
            density: PairDensity::from_amplitudes(&state.support()),
            boundary: Some(state.boundary_value()),
        }
    }

    pub fn sphere(state: &SphereState) -> Result<Self> {
        let overlaps = theta_overlaps(state.l())?;
        let li = state.l() as i32;
        let support = state.support();
        let mut entries = Vec::with_capacity(support.len() * support.len());
        for &(m, cm) in &support {
            for &(r, cr) in &support {
                let o = overlaps[((m + li) as usize, (r + li) as usize)];
                if o != 0.0 {
                    entries.push((m, r, cm.conj() * cr * o));
                }
            }
        }
        Ok(Self {
            family: Family::Sphere,
            hbar: state.hbar(),
            density: PairDensity::new(entries),
            boundary: None,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn norm_sqr(&self) -> f64 {
        self.density.trace().re
    }

    pub fn expectation(&self, a: &Observable) -> Result<Complex64> {
        let op = a.operator(self.family, None)?;
        Ok(self.density.expectation(&op, self.hbar))
    }

    pub fn shifted_overlap(&self, a: &Observable, alpha: f64, b: &Observable, beta: f64) -> Result<Complex64> {
        let pa = a.operator(self.family, None)?.shifted(alpha);
        let pb = b.operator(self.family, None)?.shifted(beta);
        Ok(self.density.form(&pa, &pb, self.hbar))
    }

    pub fn product_expectation(&self, a: &Observable, b: &Observable) -> Result<Complex64> {
        let pa = a.operator(self.family, None)?;
        let pb = b.operator(self.family, None)?;
        Ok(self.density.expectation(&pa.compose(&pb, self.hbar), self.hbar))
    }

    pub fn boundary_value(&self) -> Option<Complex64> {
        self.boundary
    }
}

/// `Var L_z` and `Var φ` of a fixed-`l` state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereVariances {
    pub var_lz: f64,
    pub var_phi: f64,
}

/// Both variances from coefficient sums: `Var L_z = Σ|c_m|²ħ²m² − (Σ|c_m|²ħm)²`
/// and `Var φ = Σ c_m* c_r (Y_lm, φ²Y_lr) − (Σ c_m* c_r (Y_lm, φY_lr))²`,
/// where `(Y_lm, φ^p Y_lr) = O_{mr} (e_m, φ^p e_r)`.
pub fn sphere_variances(state: &SphereState) -> Result<SphereVariances> {
    let h = state.hbar();
    let support = state.support();
    let (mut m1, mut m2) = (0.0, 0.0);
    for &(m, c) in &support {
        let p = c.norm_sqr();
        m1 += p * h * m as f64;
        m2 += p * (h * m as f64).powi(2);
    }
    let overlaps = theta_overlaps(state.l())?;
    let li = state.l() as i32;
    let (mut p1, mut p2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for &(m, cm) in &support {
        for &(r, cr) in &support {
            let w = cm.conj() * cr * overlaps[((m + li) as usize, (r + li) as usize)];
            p1 += w * phi_power_moment(1, r - m);
            p2 += w * phi_power_moment(2, r - m);
        }
    }
    Ok(SphereVariances { var_lz: m2 - m1 * m1, var_phi: p2.re - p1.re * p1.re })
}
