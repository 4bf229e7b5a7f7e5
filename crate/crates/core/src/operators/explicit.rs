//! Explicit coefficient vectors for `Aψ`.
//!
//! On the circle `φψ` leaves every finite Fourier span, so the expansion is
//! cut at a chosen width and the dropped norm is reported exactly: the full
//! `‖Aψ‖²` comes from the pair-density forms, which involve no truncation.

use num_complex::Complex64;

use super::{fourier::theta_overlaps, hermite::OscillatorEvaluator, mean, spectral, Evaluator, Observable};
use crate::algebra::AngleOperator;
use crate::error::{Error, Result};
use crate::states::{OscillatorState, PeriodicState, SphereState, State};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Extra Fourier modes kept beyond the state's truncation by default.
const DEFAULT_EXTRA_MODES: u32 = 256;

/// Coefficients in one of the three bases.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficients {
    /// `Σ_k values[k − lowest] e_k`.
    Fourier { lowest: i32, values: Vec<Complex64> },
    /// `Σ_n values[n] √λ h_n(λφ)`.
    Hermite { values: Vec<Complex64> },
    /// `Σ_{m,k} blocks[m + l][k − lowest] Θ_lm(θ) e_k(φ)`.
    Spherical { l: u32, lowest: i32, blocks: Vec<Vec<Complex64>> },
}

/// A truncated expansion together with the norm of what was dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub coefficients: Coefficients,
    pub tail_bound: f64,
}

/// `δAψ = Aψ − ⟨A⟩ψ` for a Hermitian `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationVector {
    pub observable: Observable,
    pub mean: f64,
    pub expansion: Expansion,
}

/// The state's own coefficients.
pub fn state_coefficients(state: &State) -> Coefficients {
    match state {
        State::Periodic(s) => {
            let m = s.truncation() as i32;
            Coefficients::Fourier { lowest: -m, values: (-m..=m).map(|k| s.amplitude(k)).collect() }
        }
        State::Oscillator(s) => Coefficients::Hermite { values: s.amplitudes().to_vec() },
        State::Sphere(s) => {
            let li = s.l() as i32;
            let blocks = (-li..=li)
                .map(|m| (-li..=li).map(|k| if k == m { s.amplitude(m) } else { ZERO }).collect())
                .collect();
            Coefficients::Spherical { l: s.l(), lowest: -li, blocks }
        }
    }
}

/// Coefficient of `e_k` in `P(c e_m)`, i.e. `c Σ_d (ħm)^d (e_k, h_d e_m)`.
fn fourier_image(op: &AngleOperator, m: i32, c: Complex64, k: i32, hbar: f64) -> Complex64 {
    op.terms()
        .iter()
        .map(|(h, d)| h.fourier_moment(m - k) * (hbar * m as f64).powi(*d as i32))
        .sum::<Complex64>()
        * c
}

fn periodic_image(op: &AngleOperator, s: &PeriodicState, width: u32) -> Coefficients {
    let w = width as i32;
    let support = s.support();
    let values = (-w..=w)
        .map(|k| support.iter().map(|&(m, c)| fourier_image(op, m, c, k, s.hbar())).sum())
        .collect();
    Coefficients::Fourier { lowest: -w, values }
}

fn sphere_image(op: &AngleOperator, s: &SphereState, width: u32) -> Coefficients {
    let w = width as i32;
    let li = s.l() as i32;
    let blocks = (-li..=li)
        .map(|m| {
            let c = s.amplitude(m);
            (-w..=w)
                .map(|k| if c == ZERO { ZERO } else { fourier_image(op, m, c, k, s.hbar()) })
                .collect()
        })
        .collect();
    Coefficients::Spherical { l: s.l(), lowest: -w, blocks }
}

fn hermite_image(op: &AngleOperator, s: &OscillatorState) -> Coefficients {
    let ev = OscillatorEvaluator::new(s);
    Coefficients::Hermite { values: ev.apply(op, ev.coefficients()) }
}

/// `Aψ`, cut at Fourier width `width` on the circle and sphere (default:
/// the state's own width plus 256 modes).
pub fn apply_observable(a: &Observable, state: &State, width: Option<u32>) -> Result<Expansion> {
    let ev = spectral(state)?;
    let params = match state {
        State::Oscillator(s) => Some(s.params()),
        _ => None,
    };
    let op = a.operator(state.family(), params.as_ref())?;
    let coefficients = match state {
        State::Periodic(s) => periodic_image(&op, s, width.unwrap_or(s.truncation() + DEFAULT_EXTRA_MODES)),
        State::Sphere(s) => sphere_image(&op, s, width.unwrap_or(s.l() + DEFAULT_EXTRA_MODES)),
        State::Oscillator(s) => hermite_image(&op, s),
    };
    let tail_bound = match state {
        State::Oscillator(_) => 0.0,
        _ => {
            let exact = ev.shifted_overlap(a, 0.0, a, 0.0)?.re;
            let kept = inner_product(&coefficients, &coefficients)?.re;
            (exact - kept).max(0.0).sqrt()
        }
    };
    Ok(Expansion { coefficients, tail_bound })
}

/// `L_z ψ`; exact in the state's own basis.
pub fn apply_lz(state: &State) -> Result<Coefficients> {
    let width = match state {
        State::Periodic(s) => Some(s.truncation()),
        State::Sphere(s) => Some(s.l()),
        State::Oscillator(_) => None,
    };
    Ok(apply_observable(&Observable::Lz, state, width)?.coefficients)
}

/// `φψ` with its truncation tail.
pub fn apply_phi(state: &State, width: Option<u32>) -> Result<Expansion> {
    apply_observable(&Observable::Phi, state, width)
}

/// `(x, y)`, conjugate-linear in `x`.
pub fn inner_product(x: &Coefficients, y: &Coefficients) -> Result<Complex64> {
    let aligned = |lx: i32, vx: &[Complex64], ly: i32, vy: &[Complex64]| -> Complex64 {
        vx.iter()
            .enumerate()
            .filter_map(|(i, a)| {
                let j = i as i64 + lx as i64 - ly as i64;
                (j >= 0 && (j as usize) < vy.len()).then(|| a.conj() * vy[j as usize])
            })
            .sum()
    };
    match (x, y) {
        (Coefficients::Fourier { lowest: lx, values: vx }, Coefficients::Fourier { lowest: ly, values: vy }) => {
            Ok(aligned(*lx, vx, *ly, vy))
        }
        (Coefficients::Hermite { values: vx }, Coefficients::Hermite { values: vy }) => {
            Ok(vx.iter().zip(vy).map(|(a, b)| a.conj() * b).sum())
        }
        (
            Coefficients::Spherical { l: l1, lowest: lx, blocks: bx },
            Coefficients::Spherical { l: l2, lowest: ly, blocks: by },
        ) if l1 == l2 => {
            let o = theta_overlaps(*l1)?;
            let mut acc = ZERO;
            for (i, xb) in bx.iter().enumerate() {
                for (j, yb) in by.iter().enumerate() {
                    if o[(i, j)] != 0.0 {
                        acc += aligned(*lx, xb, *ly, yb) * o[(i, j)];
                    }
                }
            }
            Ok(acc)
        }
        _ => Err(Error::Precondition("inner product of incompatible representations".into())),
    }
}

fn axpy(y: &mut Coefficients, a: Complex64, x: &Coefficients) -> Result<()> {
    match (y, x) {
        (Coefficients::Fourier { lowest: ly, values: vy }, Coefficients::Fourier { lowest: lx, values: vx }) => {
            for (i, v) in vx.iter().enumerate() {
                let j = i as i64 + *lx as i64 - *ly as i64;
                if j < 0 || j as usize >= vy.len() {
                    return Err(Error::Precondition("state exceeds expansion width".into()));
                }
                vy[j as usize] += a * v;
            }
        }
        (Coefficients::Hermite { values: vy }, Coefficients::Hermite { values: vx }) => {
            if vy.len() < vx.len() {
                vy.resize(vx.len(), ZERO);
            }
            for (t, v) in vy.iter_mut().zip(vx) {
                *t += a * v;
            }
        }
        (
            Coefficients::Spherical { lowest: ly, blocks: by, .. },
            Coefficients::Spherical { lowest: lx, blocks: bx, .. },
        ) => {
            for (yb, xb) in by.iter_mut().zip(bx) {
                for (i, v) in xb.iter().enumerate() {
                    let j = i as i64 + *lx as i64 - *ly as i64;
                    if j < 0 || j as usize >= yb.len() {
                        return Err(Error::Precondition("state exceeds expansion width".into()));
                    }
                    yb[j as usize] += a * v;
                }
            }
        }
        _ => return Err(Error::Precondition("incompatible representations".into())),
    }
    Ok(())
}

/// `δAψ` for a Hermitian observable.
pub fn deviation_vector(a: &Observable, state: &State, width: Option<u32>) -> Result<DeviationVector> {
    let mu = mean(&spectral(state)?, a)?;
    let mut expansion = apply_observable(a, state, width)?;
    axpy(&mut expansion.coefficients, Complex64::new(-mu, 0.0), &state_coefficients(state))?;
    Ok(DeviationVector { observable: a.clone(), mean: mu, expansion })
}
