//! Reproducible random states.
//!
//! All generators draw from ChaCha8 seeded with a `u64`, which yields the
//! same stream on every platform. Amplitudes are standard complex Gaussians
//! before normalization.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::states::{
    OscillatorParams, OscillatorState, PeriodicState, SphereState, DEFAULT_FOURIER_TRUNCATION,
    DEFAULT_HERMITE_TRUNCATION,
};

/// ChaCha8 seeded from `seed`.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream `index` of the generator for `seed`; streams never overlap.
pub fn indexed_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = seeded_rng(seed);
    rng.set_stream(index);
    rng
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Between one and `max_terms` distinct indices drawn from `lo..=hi`.
fn random_support<R: Rng + ?Sized>(rng: &mut R, lo: i32, hi: i32, max_terms: usize) -> Vec<i32> {
    let count = rng.random_range(1..=max_terms.max(1));
    let mut out: Vec<i32> = (0..count).map(|_| rng.random_range(lo..=hi)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Superposition of up to four Fourier modes with `|m| ≤ max_mode`.
pub fn random_periodic<R: Rng + ?Sized>(rng: &mut R, max_mode: u32, hbar: f64) -> Result<PeriodicState> {
    let m = max_mode as i32;
    let coeffs: Vec<(i32, Complex64)> = random_support(rng, -m, m, 4)
        .into_iter()
        .map(|k| (k, complex_gaussian(rng)))
        .collect();
    PeriodicState::new(&coeffs, max_mode.max(DEFAULT_FOURIER_TRUNCATION), hbar)
}

/// Superposition of up to four levels `n ≤ max_level`.
pub fn random_oscillator<R: Rng + ?Sized>(
    rng: &mut R,
    max_level: u32,
    params: OscillatorParams,
) -> Result<OscillatorState> {
    let coeffs: Vec<(u32, Complex64)> = random_support(rng, 0, max_level as i32, 4)
        .into_iter()
        .map(|k| (k as u32, complex_gaussian(rng)))
        .collect();
    OscillatorState::new(&coeffs, max_level.max(DEFAULT_HERMITE_TRUNCATION), params)
}

/// Fixed-`l` state with every `m` populated.
pub fn random_sphere<R: Rng + ?Sized>(rng: &mut R, l: u32, hbar: f64) -> Result<SphereState> {
    let li = l as i32;
    let coeffs: Vec<(i32, Complex64)> = (-li..=li).map(|m| (m, complex_gaussian(rng))).collect();
    SphereState::new(l, &coeffs, hbar)
}
