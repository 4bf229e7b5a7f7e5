//! The three state families and their JSON document form.
//!
//! * [`PeriodicState`]: `ψ(φ) = Σ a_m e^{imφ}/√(2π)` on `[0, 2π)`.
//! * [`OscillatorState`]: `ψ(φ) = Σ b_n √λ h_n(λφ)` on the whole line, with
//!   `λ = √(Jω/ħ)`.
//! * [`SphereState`]: `ψ(θ, φ) = Σ c_m Y_lm(θ, φ)` at fixed `l`.
//!
//! States are immutable once built and always unit-normalized. Constructors
//! divide by the real norm only, so the global phase of the input survives.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{hermite_functions, spherical_harmonic};
use crate::DEFAULT_HBAR;

/// Default Fourier truncation `M` (indices `−M..=M`).
pub const DEFAULT_FOURIER_TRUNCATION: u32 = 64;
/// Default Hermite truncation `N` (indices `0..=N`).
pub const DEFAULT_HERMITE_TRUNCATION: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Periodic,
    Oscillator,
    Sphere,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Periodic => "periodic",
            Family::Oscillator => "oscillator",
            Family::Sphere => "sphere",
        })
    }
}

fn check_hbar(hbar: f64) -> Result<()> {
    if hbar.is_finite() && hbar > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidState(format!("hbar must be positive and finite, got {hbar}")))
    }
}

/// Rescales to unit norm; rejects non-finite or all-zero input.
fn normalize(values: &mut [Complex64]) -> Result<()> {
    if values.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::InvalidState("non-finite coefficient".into()));
    }
    let norm = values.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::InvalidState("all coefficients are zero".into()));
    }
    for c in values.iter_mut() {
        *c /= norm;
    }
    Ok(())
}

fn nonzero(values: &[Complex64], offset: i32) -> Vec<(i32, Complex64)> {
    values
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
        .map(|(i, c)| (i as i32 + offset, *c))
        .collect()
}

/// A state on the circle in the Fourier basis `e_m = e^{imφ}/√(2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicState {
    truncation: u32,
    /// `a_{−M}, …, a_M`.
    amplitudes: Vec<Complex64>,
    hbar: f64,
}

impl PeriodicState {
    pub fn new(coeffs: &[(i32, Complex64)], truncation: u32, hbar: f64) -> Result<Self> {
        check_hbar(hbar)?;
        if truncation == 0 {
            return Err(Error::InvalidState("Fourier truncation must be positive".into()));
        }
        let m_max = truncation as i32;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 2 * truncation as usize + 1];
        for &(m, a) in coeffs {
            if m.abs() > m_max {
                return Err(Error::InvalidState(format!(
                    "mode m={m} outside truncation M={truncation}"
                )));
            }
            amplitudes[(m + m_max) as usize] += a;
        }
        normalize(&mut amplitudes)?;
        Ok(Self { truncation, amplitudes, hbar })
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn with_hbar(&self, hbar: f64) -> Result<Self> {
        check_hbar(hbar)?;
        Ok(Self { hbar, ..self.clone() })
    }

    pub fn amplitude(&self, m: i32) -> Complex64 {
        let m_max = self.truncation as i32;
        if m.abs() > m_max {
            Complex64::new(0.0, 0.0)
        } else {
            self.amplitudes[(m + m_max) as usize]
        }
    }

    /// Nonzero `(m, a_m)` pairs in increasing `m`.
    pub fn support(&self) -> Vec<(i32, Complex64)> {
        nonzero(&self.amplitudes, -(self.truncation as i32))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `ψ(φ)` for `φ ∈ [0, 2π)`.
    pub fn evaluate(&self, phi: f64) -> Result<Complex64> {
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::Domain(format!("phi={phi} outside [0, 2π)")));
        }
        Ok(self.eval_unchecked(phi))
    }

    pub(crate) fn eval_unchecked(&self, phi: f64) -> Complex64 {
        let s = 1.0 / (2.0 * PI).sqrt();
        self.support()
            .into_iter()
            .map(|(m, a)| a * Complex64::from_polar(s, m as f64 * phi))
            .sum()
    }

    /// `ψ(2π − 0)`. Every mode is `2π`-periodic, so this equals `ψ(0)`.
    pub fn boundary_value(&self) -> Complex64 {
        self.amplitudes.iter().sum::<Complex64>() / (2.0 * PI).sqrt()
    }
}

/// Eigenstate `e^{imφ}/√(2π)` of `L_z`.
pub fn scr_eigenstate(m: i32, truncation: u32) -> Result<PeriodicState> {
    if m.unsigned_abs() > truncation {
        return Err(Error::InvalidState(format!(
            "truncation M={truncation} too small for m={m}"
        )));
    }
    PeriodicState::new(&[(m, Complex64::new(1.0, 0.0))], truncation, DEFAULT_HBAR)
}

/// Normalized superposition `Σ a_m e_m`; the truncation grows to fit.
pub fn periodic_superposition(coeffs: &[(i32, Complex64)]) -> Result<PeriodicState> {
    let widest = coeffs.iter().map(|(m, _)| m.unsigned_abs()).max().unwrap_or(0);
    PeriodicState::new(coeffs, widest.max(DEFAULT_FOURIER_TRUNCATION), DEFAULT_HBAR)
}

/// Physical parameters of the torsion pendulum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    /// Moment of inertia `J`.
    pub inertia: f64,
    pub omega: f64,
    pub hbar: f64,
}

impl Default for OscillatorParams {
    fn default() -> Self {
        Self { inertia: 1.0, omega: 1.0, hbar: DEFAULT_HBAR }
    }
}

impl OscillatorParams {
    pub fn new(inertia: f64, omega: f64, hbar: f64) -> Result<Self> {
        let p = Self { inertia, omega, hbar };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        check_hbar(self.hbar)?;
        for (name, v) in [("J", self.inertia), ("omega", self.omega)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidState(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// `λ = √(Jω/ħ)`, so that `ξ = λφ`.
    pub fn lambda(&self) -> f64 {
        (self.inertia * self.omega / self.hbar).sqrt()
    }
}

/// A torsion-pendulum state in the Hermite-function basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorState {
    /// `b_0, …, b_N`.
    amplitudes: Vec<Complex64>,
    params: OscillatorParams,
}

impl OscillatorState {
    pub fn new(coeffs: &[(u32, Complex64)], truncation: u32, params: OscillatorParams) -> Result<Self> {
        params.validate()?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); truncation as usize + 1];
        for &(n, b) in coeffs {
            if n > truncation {
                return Err(Error::InvalidState(format!(
                    "level n={n} outside truncation N={truncation}"
                )));
            }
            amplitudes[n as usize] += b;
        }
        normalize(&mut amplitudes)?;
        Ok(Self { amplitudes, params })
    }

    pub fn truncation(&self) -> u32 {
        self.amplitudes.len() as u32 - 1
    }

    pub fn params(&self) -> OscillatorParams {
        self.params
    }

    pub fn hbar(&self) -> f64 {
        self.params.hbar
    }

    pub fn lambda(&self) -> f64 {
        self.params.lambda()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Highest level with a nonzero amplitude.
    pub fn highest_level(&self) -> usize {
        self.amplitudes
            .iter()
            .rposition(|c| *c != Complex64::new(0.0, 0.0))
            .unwrap_or(0)
    }

    pub fn support(&self) -> Vec<(i32, Complex64)> {
        nonzero(&self.amplitudes, 0)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `ψ(φ)` for any finite `φ`.
    pub fn evaluate(&self, phi: f64) -> Result<Complex64> {
        if !phi.is_finite() {
            return Err(Error::Domain(format!("phi={phi} is not finite")));
        }
        let lam = self.lambda();
        let top = self.highest_level();
        let h = hermite_functions(top, lam * phi)?;
        Ok(self.amplitudes[..=top]
            .iter()
            .zip(&h)
            .map(|(b, hn)| b * *hn)
            .sum::<Complex64>()
            * lam.sqrt())
    }
}

/// Torsion-pendulum eigenstate `n` (unit `ħ`).
pub fn qtp_eigenstate(n: u32, inertia: f64, omega: f64, truncation: u32) -> Result<OscillatorState> {
    if n > truncation {
        return Err(Error::InvalidState(format!(
            "truncation N={truncation} too small for n={n}"
        )));
    }
    OscillatorState::new(
        &[(n, Complex64::new(1.0, 0.0))],
        truncation,
        OscillatorParams::new(inertia, omega, DEFAULT_HBAR)?,
    )
}

/// A fixed-`l` state `Σ c_m Y_lm` on the sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereState {
    l: u32,
    /// `c_{−l}, …, c_l`.
    amplitudes: Vec<Complex64>,
    hbar: f64,
}

impl SphereState {
    pub fn new(l: u32, coeffs: &[(i32, Complex64)], hbar: f64) -> Result<Self> {
        check_hbar(hbar)?;
        let li = l as i32;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 2 * l as usize + 1];
        for &(m, c) in coeffs {
            if m.abs() > li {
                return Err(Error::InvalidState(format!("coefficient m={m} violates |m| <= l={l}")));
            }
            amplitudes[(m + li) as usize] += c;
        }
        normalize(&mut amplitudes)?;
        Ok(Self { l, amplitudes, hbar })
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn with_hbar(&self, hbar: f64) -> Result<Self> {
        check_hbar(hbar)?;
        Ok(Self { hbar, ..self.clone() })
    }

    pub fn amplitude(&self, m: i32) -> Complex64 {
        let li = self.l as i32;
        if m.abs() > li {
            Complex64::new(0.0, 0.0)
        } else {
            self.amplitudes[(m + li) as usize]
        }
    }

    pub fn support(&self) -> Vec<(i32, Complex64)> {
        nonzero(&self.amplitudes, -(self.l as i32))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `ψ(θ, φ)` for `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
    pub fn evaluate(&self, theta: f64, phi: f64) -> Result<Complex64> {
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::Domain(format!("phi={phi} outside [0, 2π)")));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in self.support() {
            acc += c * spherical_harmonic(self.l as usize, m, theta, phi)?;
        }
        Ok(acc)
    }
}

/// Normalized fixed-`l` state with unit `ħ`.
pub fn sphere_state(l: u32, coeffs: &[(i32, Complex64)]) -> Result<SphereState> {
    SphereState::new(l, coeffs, DEFAULT_HBAR)
}

/// Any of the three families.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Periodic(PeriodicState),
    Oscillator(OscillatorState),
    Sphere(SphereState),
}

impl State {
    pub fn family(&self) -> Family {
        match self {
            State::Periodic(_) => Family::Periodic,
            State::Oscillator(_) => Family::Oscillator,
            State::Sphere(_) => Family::Sphere,
        }
    }

    pub fn hbar(&self) -> f64 {
        match self {
            State::Periodic(s) => s.hbar(),
            State::Oscillator(s) => s.hbar(),
            State::Sphere(s) => s.hbar(),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        match self {
            State::Periodic(s) => s.norm_sqr(),
            State::Oscillator(s) => s.norm_sqr(),
            State::Sphere(s) => s.norm_sqr(),
        }
    }

    /// Nonzero `(index, amplitude)` pairs: `m` on the circle and sphere, `n` on the line.
    pub fn support(&self) -> Vec<(i32, Complex64)> {
        match self {
            State::Periodic(s) => s.support(),
            State::Oscillator(s) => s.support(),
            State::Sphere(s) => s.support(),
        }
    }

    pub fn to_document(&self) -> StateDocument {
        let coefficients = self
            .support()
            .into_iter()
            .map(|(i, c)| (i as i64, c.re, c.im))
            .collect();
        let params = match self {
            State::Periodic(s) => StateParams {
                truncation: Some(s.truncation()),
                hbar: Some(s.hbar()),
                ..Default::default()
            },
            State::Oscillator(s) => StateParams {
                truncation: Some(s.truncation()),
                inertia: Some(s.params.inertia),
                omega: Some(s.params.omega),
                hbar: Some(s.hbar()),
                ..Default::default()
            },
            State::Sphere(s) => StateParams {
                l: Some(s.l()),
                hbar: Some(s.hbar()),
                ..Default::default()
            },
        };
        StateDocument { family: self.family(), params, coefficients }
    }

    pub fn from_document(doc: &StateDocument) -> Result<Self> {
        let p = &doc.params;
        let hbar = p.hbar.unwrap_or(DEFAULT_HBAR);
        let mut idx = Vec::with_capacity(doc.coefficients.len());
        for &(i, re, im) in &doc.coefficients {
            let i = i32::try_from(i)
                .map_err(|_| Error::InvalidState(format!("index {i} out of range")))?;
            idx.push((i, Complex64::new(re, im)));
        }
        match doc.family {
            Family::Periodic => {
                let widest = idx.iter().map(|(m, _)| m.unsigned_abs()).max().unwrap_or(0);
                let trunc = p.truncation.unwrap_or(widest.max(DEFAULT_FOURIER_TRUNCATION));
                Ok(State::Periodic(PeriodicState::new(&idx, trunc, hbar)?))
            }
            Family::Oscillator => {
                let inertia = p
                    .inertia
                    .ok_or_else(|| Error::InvalidState("missing parameter J".into()))?;
                let omega = p
                    .omega
                    .ok_or_else(|| Error::InvalidState("missing parameter omega".into()))?;
                let mut levels = Vec::with_capacity(idx.len());
                for (n, b) in idx {
                    let n = u32::try_from(n)
                        .map_err(|_| Error::InvalidState(format!("negative level n={n}")))?;
                    levels.push((n, b));
                }
                let widest = levels.iter().map(|(n, _)| *n).max().unwrap_or(0);
                let trunc = p.truncation.unwrap_or(widest.max(DEFAULT_HERMITE_TRUNCATION));
                Ok(State::Oscillator(OscillatorState::new(
                    &levels,
                    trunc,
                    OscillatorParams::new(inertia, omega, hbar)?,
                )?))
            }
            Family::Sphere => {
                let l = p.l.ok_or_else(|| Error::InvalidState("missing parameter l".into()))?;
                Ok(State::Sphere(SphereState::new(l, &idx, hbar)?))
            }
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_document(&serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

impl From<PeriodicState> for State {
    fn from(s: PeriodicState) -> Self {
        State::Periodic(s)
    }
}

impl From<OscillatorState> for State {
    fn from(s: OscillatorState) -> Self {
        State::Oscillator(s)
    }
}

impl From<SphereState> for State {
    fn from(s: SphereState) -> Self {
        State::Sphere(s)
    }
}

/// Serialized state: `{"family", "params", "coefficients": [[index, re, im], …]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDocument {
    pub family: Family,
    #[serde(default)]
    pub params: StateParams,
    pub coefficients: Vec<(i64, f64, f64)>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
    #[serde(default, rename = "J", skip_serializing_if = "Option::is_none")]
    pub inertia: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn scr_values() {
        let s = scr_eigenstate(0, 8).unwrap();
        let v = s.evaluate(1.234).unwrap();
        assert!((v - c((2.0 * PI).powf(-0.5), 0.0)).norm() < 1e-15);
        let s3 = scr_eigenstate(3, 8).unwrap();
        for i in 0..20 {
            let phi = 0.3 * i as f64;
            assert!((s3.evaluate(phi).unwrap().norm_sqr() - 1.0 / (2.0 * PI)).abs() < 1e-15);
        }
        let s1 = scr_eigenstate(1, 8).unwrap();
        assert!((s1.evaluate(PI).unwrap() + c((2.0 * PI).powf(-0.5), 0.0)).norm() < 1e-15);
        for m in -5..=5 {
            let b = scr_eigenstate(m, 8).unwrap().boundary_value();
            assert!((b.norm() - 0.398_942_280_4).abs() < 1e-9);
        }
        assert!(scr_eigenstate(9, 8).is_err());
    }

    #[test]
    fn superposition_normalization() {
        let s = periodic_superposition(&[(0, c(1.0, 0.0)), (1, c(1.0, 0.0))]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitude(0) - c(h, 0.0)).norm() < 1e-15);
        assert!((s.amplitude(1) - c(h, 0.0)).norm() < 1e-15);
        let s2 = periodic_superposition(&[(2, c(0.0, 3.0))]).unwrap();
        assert!((s2.amplitude(2) - c(0.0, 1.0)).norm() < 1e-15);
        assert!(periodic_superposition(&[(1, c(0.0, 0.0))]).is_err());
        assert!(periodic_superposition(&[]).is_err());
    }

    #[test]
    fn boundary_continuity() {
        let s = periodic_superposition(&[(-2, c(0.3, 0.1)), (0, c(-1.0, 0.4)), (5, c(0.2, -0.7))]).unwrap();
        let near_end = s.eval_unchecked(2.0 * PI);
        assert!((s.boundary_value() - s.evaluate(0.0).unwrap()).norm() < 1e-12);
        assert!((s.boundary_value() - near_end).norm() < 1e-12);
        assert!(s.evaluate(2.0 * PI).is_err());
        assert!(s.evaluate(-0.1).is_err());
    }

    #[test]
    fn qtp_ground_state_value() {
        let s = OscillatorState::new(&[(0, c(1.0, 0.0))], 4, OscillatorParams::new(2.0, 3.0, 0.5).unwrap()).unwrap();
        let lam = s.lambda();
        assert!((lam - 12f64.sqrt()).abs() < 1e-14);
        let want = lam.sqrt() * PI.powf(-0.25);
        assert!((s.evaluate(0.0).unwrap().re - want).abs() < 1e-14);
    }

    #[test]
    fn qtp_n2_has_two_zeros() {
        // H_2 = 4ξ² − 2 has roots ±1/√2; count sign changes on a fine grid
        let s = qtp_eigenstate(2, 1.0, 1.0, 4).unwrap();
        let vals: Vec<f64> = (0..4001).map(|i| s.evaluate(-8.0 + 0.004 * i as f64).unwrap().re).collect();
        let changes = vals.windows(2).filter(|w| w[0].signum() != w[1].signum() && w[0] != 0.0).count();
        assert_eq!(changes, 2);
        assert!(s.evaluate(0.5f64.sqrt()).unwrap().norm() < 1e-14);
    }

    #[test]
    fn sphere_construction() {
        let s = sphere_state(1, &[(-1, c(1.0, 0.0)), (1, c(1.0, 0.0))]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitude(1) - c(h, 0.0)).norm() < 1e-15);
        assert!(sphere_state(1, &[(2, c(1.0, 0.0))]).is_err());
        assert!(sphere_state(2, &[(0, c(0.0, 0.0))]).is_err());
        assert!(s.evaluate(0.3, 7.0).is_err());
    }

    #[test]
    fn bad_parameters() {
        assert!(PeriodicState::new(&[(0, c(1.0, 0.0))], 4, 0.0).is_err());
        assert!(OscillatorParams::new(-1.0, 1.0, 1.0).is_err());
        assert!(qtp_eigenstate(5, 1.0, 1.0, 4).is_err());
        assert!(PeriodicState::new(&[(0, c(f64::NAN, 0.0))], 4, 1.0).is_err());
    }

    #[test]
    fn json_document_shape() {
        let s: State = sphere_state(2, &[(-2, c(0.0, 1.0)), (1, c(2.0, 0.0))]).unwrap().into();
        let text = s.to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["family"], "sphere");
        assert_eq!(v["params"]["l"], 2);
        assert_eq!(v["coefficients"].as_array().unwrap().len(), 2);
        let back = State::from_json(&text).unwrap();
        for ((i, a), (j, b)) in back.support().into_iter().zip(s.support()) {
            assert_eq!(i, j);
            assert!((a - b).norm() < 1e-15);
        }

        let osc: State = OscillatorState::new(&[(1, c(1.0, 0.0))], 8, OscillatorParams::new(2.0, 0.5, 1.0).unwrap())
            .unwrap()
            .into();
        let v: serde_json::Value = serde_json::from_str(&osc.to_json().unwrap()).unwrap();
        assert_eq!(v["params"]["J"], 2.0);
        assert_eq!(v["params"]["omega"], 0.5);
    }

    #[test]
    fn json_errors() {
        let missing_j = r#"{"family":"oscillator","params":{"omega":1.0},"coefficients":[[0,1.0,0.0]]}"#;
        assert!(matches!(State::from_json(missing_j), Err(Error::InvalidState(m)) if m.contains("J")));
        let bad_m = r#"{"family":"sphere","params":{"l":1},"coefficients":[[2,1.0,0.0]]}"#;
        assert!(State::from_json(bad_m).is_err());
        let unknown = r#"{"family":"torus","coefficients":[]}"#;
        assert!(State::from_json(unknown).is_err());
    }
}
