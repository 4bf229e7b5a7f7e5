//! Torsion-pendulum states: operators act on Hermite coefficient vectors.
//!
//! With `ξ = λφ`, the ladder relations give
//! `(ξv)_n = √((n+1)/2) v_{n+1} + √(n/2) v_{n−1}` and
//! `(d/dξ v)_n = √((n+1)/2) v_{n+1} − √(n/2) v_{n−1}`, so `φ` and `L_z` are
//! exact on a basis one level larger. `e^{iqφ}` acts through the displacement
//! matrix `E_{mn}(κ) = ∫ h_m h_n e^{iκξ} dξ` with `κ = q/λ`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{mean, Observable};
use crate::algebra::{AngleFunction, AngleOperator};
use crate::error::Result;
use crate::states::{Family, OscillatorParams, OscillatorState};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

fn xi_times(v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![ZERO; v.len() + 1];
    for (n, &c) in v.iter().enumerate() {
        if n > 0 {
            out[n - 1] += c * (n as f64 / 2.0).sqrt();
        }
        out[n + 1] += c * ((n + 1) as f64 / 2.0).sqrt();
    }
    out
}

fn d_xi(v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![ZERO; v.len() + 1];
    for (n, &c) in v.iter().enumerate() {
        if n > 0 {
            out[n - 1] += c * (n as f64 / 2.0).sqrt();
        }
        out[n + 1] -= c * ((n + 1) as f64 / 2.0).sqrt();
    }
    out
}

fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

fn axpy(acc: &mut Vec<Complex64>, a: Complex64, x: &[Complex64]) {
    if acc.len() < x.len() {
        acc.resize(x.len(), ZERO);
    }
    for (t, &v) in acc.iter_mut().zip(x) {
        *t += a * v;
    }
}

/// Rows of `E(κ)` kept when applying it to a vector of length `cols`.
fn displacement_rows(kappa: f64, cols: usize) -> usize {
    let k = kappa.abs();
    cols + 40 + (k * k + 3.0 * k * (2.0 * cols as f64 + 1.0).sqrt()).ceil() as usize
}

type DisplacementCache = Mutex<HashMap<u64, Arc<DMatrix<Complex64>>>>;

fn cache() -> &'static DisplacementCache {
    static CACHE: OnceLock<DisplacementCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Square `size × size` block of `E(κ)` for `κ ≥ 0`.
///
/// Computed as `V diag(e^{iκx}) Vᵀ` from the eigen-decomposition of the
/// position matrix truncated well beyond `size`, so every returned entry is
/// converged to rounding.
fn compute_displacement(kappa: f64, size: usize) -> DMatrix<Complex64> {
    let big = size + 60 + (2.0 * kappa * (2.0 * size as f64 + 100.0).sqrt()).ceil() as usize;
    let x = DMatrix::from_fn(big, big, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(x);
    let phases: Vec<Complex64> = eig.eigenvalues.iter().map(|&x| Complex64::from_polar(1.0, kappa * x)).collect();
    let v = eig.eigenvectors;
    let mut out = DMatrix::zeros(size, size);
    for m in 0..size {
        for n in m..size {
            let e: Complex64 = (0..big).map(|k| phases[k] * (v[(m, k)] * v[(n, k)])).sum();
            out[(m, n)] = e;
            out[(n, m)] = e;
        }
    }
    out
}

/// The `rows × cols` block of `E_{mn}(κ) = ∫ h_m(ξ) h_n(ξ) e^{iκξ} dξ`.
pub fn displacement_matrix(kappa: f64, rows: usize, cols: usize) -> DMatrix<Complex64> {
    let full = displacement_block(kappa, rows.max(cols));
    let conj = kappa < 0.0;
    DMatrix::from_fn(rows, cols, |m, n| if conj { full[(m, n)].conj() } else { full[(m, n)] })
}

/// Cached block of `E(|κ|)`; `E(−κ)` is its entrywise conjugate.
fn displacement_block(kappa: f64, size: usize) -> Arc<DMatrix<Complex64>> {
    let key = kappa.abs().to_bits();
    let hit = cache().lock().expect("displacement cache poisoned").get(&key).cloned();
    match hit {
        Some(b) if b.nrows() >= size => b,
        _ => {
            // grow in steps so repeated slightly larger requests reuse the same block
            let target = size.max(64).next_power_of_two();
            let b = Arc::new(compute_displacement(kappa.abs(), target));
            cache()
                .lock()
                .expect("displacement cache poisoned")
                .insert(key, b.clone());
            b
        }
    }
}

fn apply_displacement(kappa: f64, v: &[Complex64]) -> Vec<Complex64> {
    let rows = displacement_rows(kappa, v.len());
    let e = displacement_block(kappa, rows);
    let conj = kappa < 0.0;
    (0..rows)
        .map(|m| {
            v.iter()
                .enumerate()
                .map(|(n, &c)| if conj { e[(m, n)].conj() * c } else { e[(m, n)] * c })
                .sum()
        })
        .collect()
}

/// Exact evaluator for torsion-pendulum states.
#[derive(Debug, Clone)]
pub struct OscillatorEvaluator {
    coeffs: Vec<Complex64>,
    params: OscillatorParams,
}

impl OscillatorEvaluator {
    pub fn new(state: &OscillatorState) -> Self {
        let top = state.highest_level();
        Self { coeffs: state.amplitudes()[..=top].to_vec(), params: state.params() }
    }

    pub fn family(&self) -> Family {
        Family::Oscillator
    }

    pub fn hbar(&self) -> f64 {
        self.params.hbar
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn boundary_value(&self) -> Option<Complex64> {
        None
    }

    fn apply_function(&self, f: &AngleFunction, v: &[Complex64]) -> Vec<Complex64> {
        let lam = self.params.lambda();
        let mut acc = Vec::new();
        let mut freqs: Vec<i32> = f.terms().iter().map(|t| t.freq).collect();
        freqs.sort_unstable();
        freqs.dedup();
        for q in freqs {
            let shifted = if q == 0 { v.to_vec() } else { apply_displacement(q as f64 / lam, v) };
            for t in f.terms().iter().filter(|t| t.freq == q) {
                let mut w = shifted.clone();
                for _ in 0..t.power {
                    w = xi_times(&w);
                }
                axpy(&mut acc, t.coeff / lam.powi(t.power as i32), &w);
            }
        }
        acc
    }

    /// `Pv` in the Hermite basis, with `L_z = −iħλ d/dξ`.
    pub fn apply(&self, op: &AngleOperator, v: &[Complex64]) -> Vec<Complex64> {
        let lz = Complex64::new(0.0, -self.params.hbar * self.params.lambda());
        let mut acc = Vec::new();
        for (h, d) in op.terms() {
            let mut w = v.to_vec();
            for _ in 0..*d {
                w = d_xi(&w).into_iter().map(|c| c * lz).collect();
            }
            let hw = self.apply_function(h, &w);
            axpy(&mut acc, Complex64::new(1.0, 0.0), &hw);
        }
        acc
    }

    fn op(&self, a: &Observable) -> Result<AngleOperator> {
        a.operator(Family::Oscillator, Some(&self.params))
    }

    pub fn expectation(&self, a: &Observable) -> Result<Complex64> {
        Ok(dot(&self.coeffs, &self.apply(&self.op(a)?, &self.coeffs)))
    }

    pub fn shifted_overlap(&self, a: &Observable, alpha: f64, b: &Observable, beta: f64) -> Result<Complex64> {
        let mut x = self.apply(&self.op(a)?, &self.coeffs);
        axpy(&mut x, Complex64::new(-alpha, 0.0), &self.coeffs);
        let mut y = self.apply(&self.op(b)?, &self.coeffs);
        axpy(&mut y, Complex64::new(-beta, 0.0), &self.coeffs);
        Ok(dot(&x, &y))
    }

    pub fn product_expectation(&self, a: &Observable, b: &Observable) -> Result<Complex64> {
        let bv = self.apply(&self.op(b)?, &self.coeffs);
        Ok(dot(&self.coeffs, &self.apply(&self.op(a)?, &bv)))
    }

    pub(crate) fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }
}

/// `⟨H⟩` with `H = L_z²/(2J) + ½Jω²φ²`.
pub fn qtp_energy_mean(state: &OscillatorState) -> Result<f64> {
    mean(&OscillatorEvaluator::new(state), &Observable::Hamiltonian)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::qtp_eigenstate;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn first_row_closed_form() {
        // E_{0n} = e^{−κ²/4} (iκ/√2)^n / √n!
        for kappa in [0.3, 1.0, 2.0, 3.5] {
            let e = displacement_matrix(kappa, 1, 40);
            let mut term = c((-kappa * kappa / 4.0).exp(), 0.0);
            for n in 0..40 {
                assert!((e[(0, n)] - term).norm() < 1e-13, "κ={kappa} n={n}");
                term *= c(0.0, kappa / 2f64.sqrt()) / ((n + 1) as f64).sqrt();
            }
        }
    }

    /// `L_m^{(α)}(x)` by the three-term recurrence in `m`.
    fn laguerre(m: usize, alpha: f64, x: f64) -> f64 {
        let (mut prev, mut cur) = (0.0, 1.0);
        for k in 0..m {
            let kf = k as f64;
            let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
            prev = cur;
            cur = next;
        }
        cur
    }

    #[test]
    fn matches_laguerre_closed_form() {
        // E_mn = e^{−κ²/4} √(m!/n!) (iκ/√2)^{n−m} L_m^{(n−m)}(κ²/2), n ≥ m
        for kappa in [0.4, 1.3, 2.5] {
            let e = displacement_matrix(kappa, 30, 30);
            for (m, n) in [(0usize, 0usize), (3, 7), (5, 12), (29, 29), (1, 20), (10, 11)] {
                let ratio: f64 = (m + 1..=n).map(|k| 1.0 / (k as f64).sqrt()).product();
                let x = kappa * kappa / 2.0;
                let want = c(0.0, kappa / 2f64.sqrt()).powu((n - m) as u32)
                    * ((-kappa * kappa / 4.0).exp() * ratio * laguerre(m, (n - m) as f64, x));
                assert!((e[(m, n)] - want).norm() < 1e-12, "κ={kappa} ({m},{n})");
                assert_eq!(e[(m, n)], e[(n, m)]);
            }
        }
    }

    #[test]
    fn displacement_is_unitary_on_kept_rows() {
        let kappa = 1.7;
        let v = vec![c(0.0, 0.0); 20].into_iter().chain([c(1.0, 0.0)]).collect::<Vec<_>>();
        let w = apply_displacement(kappa, &v);
        let norm: f64 = w.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-13);
        let back = apply_displacement(-kappa, &w);
        assert!((back[20] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn lz_on_ground_state() {
        let s = qtp_eigenstate(0, 2.0, 0.5, 4).unwrap();
        let ev = OscillatorEvaluator::new(&s);
        let out = ev.apply(&AngleOperator::lz(), ev.coefficients());
        assert!(out[0].norm() < 1e-15);
        assert!((out[1] - c(0.0, 1.0 / 2f64.sqrt())).norm() < 1e-15);
        let phi = ev.apply(&AngleOperator::multiplication(AngleFunction::phi()), ev.coefficients());
        assert!((phi[1] - c(1.0 / 2f64.sqrt(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn energy_examples() {
        let s = qtp_eigenstate(0, 1.0, 1.0, 4).unwrap();
        assert!((qtp_energy_mean(&s).unwrap() - 0.5).abs() < 1e-14);
        let s = qtp_eigenstate(3, 1.0, 2.0, 4).unwrap();
        assert!((qtp_energy_mean(&s).unwrap() - 7.0).abs() < 1e-13);
        let s = OscillatorState::new(&[(0, c(1.0, 0.0)), (1, c(1.0, 0.0))], 4, OscillatorParams::default()).unwrap();
        assert!((qtp_energy_mean(&s).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn trig_moments_of_ground_state() {
        // ⟨cos φ⟩ = e^{−1/(4λ²)} for the ground state
        for (j, w) in [(1.0, 1.0), (0.25, 1.0), (3.0, 2.0)] {
            let s = qtp_eigenstate(0, j, w, 4).unwrap();
            let ev = OscillatorEvaluator::new(&s);
            let lam2 = j * w;
            let cos = ev.expectation(&Observable::CosPhi).unwrap();
            assert!((cos - c((-1.0 / (4.0 * lam2)).exp(), 0.0)).norm() < 1e-13);
            assert!(ev.expectation(&Observable::SinPhi).unwrap().norm() < 1e-14);
        }
    }
}
