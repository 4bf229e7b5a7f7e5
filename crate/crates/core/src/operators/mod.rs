//! Observables, the [`Evaluator`] abstraction and the spectral evaluators.
//!
//! An [`Evaluator`] answers three kinds of question about a fixed state `ψ`:
//! `(ψ, Aψ)`, `((A − α)ψ, (B − β)ψ)` and `(ψ, A(Bψ))`. Everything in
//! [`crate::relations`] is built from these, so the same checks run on the
//! exact spectral engine ([`SpectralEvaluator`]) and on the grid oracle
//! ([`crate::oracle::OracleEvaluator`]).

mod explicit;
mod fourier;
mod hermite;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::algebra::{AngleFunction, AngleOperator};
use crate::error::{Error, Result};
use crate::oracle::{line_half_width, Grid1D, OracleEvaluator};
use crate::states::{Family, OscillatorParams, State};

pub use explicit::{
    apply_lz, apply_observable, apply_phi, deviation_vector, inner_product, state_coefficients,
    Coefficients, DeviationVector, Expansion,
};
pub use fourier::{phi2_matrix, phi_matrix, sphere_variances, theta_overlaps, FourierEvaluator, SphereVariances};
pub use hermite::{displacement_matrix, qtp_energy_mean, OscillatorEvaluator};

/// An angular observable.
#[derive(Debug, Clone, PartialEq)]
pub enum Observable {
    /// `L_z = −iħ d/dφ`.
    Lz,
    Phi,
    Phi2,
    SinPhi,
    CosPhi,
    /// `L_z²/(2J) + ½Jω²φ²`; torsion pendulum only.
    Hamiltonian,
    Custom(CustomObservable),
}

/// A user-defined `Σ_d h_d(φ) L_z^d` with a declared Hermiticity.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomObservable {
    pub label: String,
    pub operator: AngleOperator,
    pub hermitian: bool,
}

impl Observable {
    /// Multiplication by `f`, Hermitian exactly when `f` is real.
    pub fn function(label: impl Into<String>, f: AngleFunction) -> Self {
        let hermitian = f.is_real();
        Observable::Custom(CustomObservable {
            label: label.into(),
            operator: AngleOperator::multiplication(f),
            hermitian,
        })
    }

    pub fn custom(label: impl Into<String>, operator: AngleOperator, hermitian: bool) -> Self {
        Observable::Custom(CustomObservable { label: label.into(), operator, hermitian })
    }

    pub fn is_hermitian(&self) -> bool {
        match self {
            Observable::Custom(c) => c.hermitian,
            _ => true,
        }
    }

    /// The operator this observable stands for on `family`.
    pub fn operator(&self, family: Family, params: Option<&OscillatorParams>) -> Result<AngleOperator> {
        Ok(match self {
            Observable::Lz => AngleOperator::lz(),
            Observable::Phi => AngleOperator::multiplication(AngleFunction::phi()),
            Observable::Phi2 => AngleOperator::multiplication(AngleFunction::phi_pow(2)),
            Observable::SinPhi => AngleOperator::multiplication(AngleFunction::sin()),
            Observable::CosPhi => AngleOperator::multiplication(AngleFunction::cos()),
            Observable::Hamiltonian => match (family, params) {
                (Family::Oscillator, Some(p)) => hamiltonian(p),
                _ => {
                    return Err(Error::NotApplicable {
                        observable: self.to_string(),
                        family: family.to_string(),
                    })
                }
            },
            Observable::Custom(c) => c.operator.clone(),
        })
    }
}

fn hamiltonian(p: &OscillatorParams) -> AngleOperator {
    let kinetic = AngleOperator::lz().compose(&AngleOperator::lz(), p.hbar);
    let potential = AngleOperator::multiplication(AngleFunction::phi_pow(2));
    kinetic
        .scale(Complex64::new(0.5 / p.inertia, 0.0))
        .add(&potential.scale(Complex64::new(0.5 * p.inertia * p.omega * p.omega, 0.0)))
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observable::Lz => f.write_str("Lz"),
            Observable::Phi => f.write_str("Phi"),
            Observable::Phi2 => f.write_str("Phi2"),
            Observable::SinPhi => f.write_str("SinPhi"),
            Observable::CosPhi => f.write_str("CosPhi"),
            Observable::Hamiltonian => f.write_str("Hamiltonian"),
            Observable::Custom(c) => f.write_str(&c.label),
        }
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lz" | "l" => Ok(Observable::Lz),
            "phi" => Ok(Observable::Phi),
            "phi2" | "phi^2" => Ok(Observable::Phi2),
            "sinphi" | "sin" => Ok(Observable::SinPhi),
            "cosphi" | "cos" => Ok(Observable::CosPhi),
            "hamiltonian" | "h" => Ok(Observable::Hamiltonian),
            other => Err(Error::Config(format!("unknown observable '{other}'"))),
        }
    }
}

/// Acceptance thresholds attached to an evaluator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Largest imaginary part tolerated in the mean of a Hermitian observable.
    pub imag: f64,
    /// Slack allowed in the CSF, RSUR and adjusted relations.
    pub inequality: f64,
    pub boundary: f64,
    pub gram: f64,
    /// Threshold below which a mismatch or identity residual counts as zero.
    pub identity: f64,
}

impl Tolerances {
    pub const SPECTRAL: Tolerances = Tolerances {
        imag: 1e-10,
        inequality: 1e-10,
        boundary: 1e-8,
        gram: 1e-9,
        identity: 1e-8,
    };
    pub const ORACLE: Tolerances = Tolerances {
        imag: 1e-6,
        inequality: 1e-6,
        boundary: 1e-6,
        gram: 1e-6,
        identity: 1e-6,
    };
}

/// Inner products of a fixed state under angular observables.
pub trait Evaluator: Sync {
    fn family(&self) -> Family;
    fn hbar(&self) -> f64;
    fn tolerances(&self) -> Tolerances;
    /// `(ψ, ψ)`.
    fn norm_sqr(&self) -> f64;
    /// `(ψ, Aψ)`.
    fn expectation(&self, a: &Observable) -> Result<Complex64>;
    /// `((A − α)ψ, (B − β)ψ)`.
    fn shifted_overlap(&self, a: &Observable, alpha: f64, b: &Observable, beta: f64) -> Result<Complex64>;
    /// `(ψ, A(Bψ))`.
    fn product_expectation(&self, a: &Observable, b: &Observable) -> Result<Complex64>;
    /// `ψ(2π − 0)` on the circle, `None` elsewhere.
    fn boundary_value(&self) -> Option<Complex64>;
}

/// `⟨A⟩ = (ψ, Aψ)` for a Hermitian observable.
pub fn mean<E: Evaluator + ?Sized>(ev: &E, a: &Observable) -> Result<f64> {
    if !a.is_hermitian() {
        return Err(Error::NonHermitian(a.to_string()));
    }
    let z = ev.expectation(a)?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite(format!("mean of {a}")));
    }
    let tol = ev.tolerances().imag;
    if z.im.abs() > tol * z.re.abs().max(1.0) {
        return Err(Error::NonHermitian(format!(
            "{a} (imaginary part {:e} of its mean exceeds {tol:e})",
            z.im
        )));
    }
    Ok(z.re)
}

/// `ΔA = ‖(A − ⟨A⟩)ψ‖`.
pub fn std_dev<E: Evaluator + ?Sized>(ev: &E, a: &Observable) -> Result<f64> {
    let mu = mean(ev, a)?;
    let var = ev.shifted_overlap(a, mu, a, mu)?.re;
    if !var.is_finite() {
        return Err(Error::NonFinite(format!("variance of {a}")));
    }
    Ok(var.max(0.0).sqrt())
}

/// `(δAψ, δBψ)` with `δA = A − ⟨A⟩`.
pub fn deviation_overlap<E: Evaluator + ?Sized>(ev: &E, a: &Observable, b: &Observable) -> Result<Complex64> {
    let (ma, mb) = (mean(ev, a)?, mean(ev, b)?);
    ev.shifted_overlap(a, ma, b, mb)
}

/// The exact spectral evaluator for any state.
#[derive(Debug, Clone)]
pub enum SpectralEvaluator {
    Fourier(FourierEvaluator),
    Oscillator(OscillatorEvaluator),
}

/// Builds the spectral evaluator for `state`.
pub fn spectral(state: &State) -> Result<SpectralEvaluator> {
    Ok(match state {
        State::Periodic(s) => SpectralEvaluator::Fourier(FourierEvaluator::periodic(s)),
        State::Sphere(s) => SpectralEvaluator::Fourier(FourierEvaluator::sphere(s)?),
        State::Oscillator(s) => SpectralEvaluator::Oscillator(OscillatorEvaluator::new(s)),
    })
}

macro_rules! delegate {
    ($self:ident, $e:ident => $body:expr) => {
        match $self {
            SpectralEvaluator::Fourier($e) => $body,
            SpectralEvaluator::Oscillator($e) => $body,
        }
    };
}

impl Evaluator for SpectralEvaluator {
    fn family(&self) -> Family {
        delegate!(self, e => e.family())
    }

    fn hbar(&self) -> f64 {
        delegate!(self, e => e.hbar())
    }

    fn tolerances(&self) -> Tolerances {
        Tolerances::SPECTRAL
    }

    fn norm_sqr(&self) -> f64 {
        delegate!(self, e => e.norm_sqr())
    }

    fn expectation(&self, a: &Observable) -> Result<Complex64> {
        delegate!(self, e => e.expectation(a))
    }

    fn shifted_overlap(&self, a: &Observable, alpha: f64, b: &Observable, beta: f64) -> Result<Complex64> {
        delegate!(self, e => e.shifted_overlap(a, alpha, b, beta))
    }

    fn product_expectation(&self, a: &Observable, b: &Observable) -> Result<Complex64> {
        delegate!(self, e => e.product_expectation(a, b))
    }

    fn boundary_value(&self) -> Option<Complex64> {
        delegate!(self, e => e.boundary_value())
    }
}

macro_rules! spectral_evaluator {
    ($t:ty) => {
        impl Evaluator for $t {
            fn family(&self) -> Family {
                <$t>::family(self)
            }

            fn hbar(&self) -> f64 {
                <$t>::hbar(self)
            }

            fn tolerances(&self) -> Tolerances {
                Tolerances::SPECTRAL
            }

            fn norm_sqr(&self) -> f64 {
                <$t>::norm_sqr(self)
            }

            fn expectation(&self, a: &Observable) -> Result<Complex64> {
                <$t>::expectation(self, a)
            }

            fn shifted_overlap(&self, a: &Observable, alpha: f64, b: &Observable, beta: f64) -> Result<Complex64> {
                <$t>::shifted_overlap(self, a, alpha, b, beta)
            }

            fn product_expectation(&self, a: &Observable, b: &Observable) -> Result<Complex64> {
                <$t>::product_expectation(self, a, b)
            }

            fn boundary_value(&self) -> Option<Complex64> {
                <$t>::boundary_value(self)
            }
        }
    };
}

spectral_evaluator!(FourierEvaluator);
spectral_evaluator!(OscillatorEvaluator);

/// `max |[L_z, φ]ψ + iħψ|` over interior nodes of a `points`-node grid,
/// using only the oracle's finite differences.
pub fn commutator_residual(state: &State, points: usize) -> Result<f64> {
    let grid = match state {
        State::Periodic(_) => Grid1D::circle(points)?,
        State::Oscillator(s) => Grid1D::line(line_half_width(s), points)?,
        State::Sphere(_) => {
            return Err(Error::NotApplicable {
                observable: "[Lz, Phi]".into(),
                family: Family::Sphere.to_string(),
            })
        }
    };
    let ev = OracleEvaluator::with_grid(state, grid)?;
    ev.commutator_residual()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{periodic_superposition, qtp_eigenstate, scr_eigenstate, sphere_state};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn observable_names_round_trip() {
        for o in [
            Observable::Lz,
            Observable::Phi,
            Observable::Phi2,
            Observable::SinPhi,
            Observable::CosPhi,
            Observable::Hamiltonian,
        ] {
            assert_eq!(o.to_string().parse::<Observable>().unwrap(), o);
        }
        assert!("momentum".parse::<Observable>().is_err());
    }

    #[test]
    fn scr_moments() {
        for m in -5..=5 {
            let ev = spectral(&scr_eigenstate(m, 8).unwrap().into()).unwrap();
            assert_eq!(std_dev(&ev, &Observable::Lz).unwrap(), 0.0);
            assert!((std_dev(&ev, &Observable::Phi).unwrap() - PI / 3f64.sqrt()).abs() < 1e-12);
            assert!((mean(&ev, &Observable::Phi).unwrap() - PI).abs() < 1e-13);
            assert!((mean(&ev, &Observable::Lz).unwrap() - m as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn qtp_moments() {
        for (j, w) in [(1.0, 1.0), (2.0, 0.5), (0.7, 3.0)] {
            for n in 0..=12 {
                let st = qtp_eigenstate(n, j, w, 16).unwrap();
                let ev = spectral(&st.clone().into()).unwrap();
                let nf = n as f64 + 0.5;
                let dl = std_dev(&ev, &Observable::Lz).unwrap();
                let dp = std_dev(&ev, &Observable::Phi).unwrap();
                assert!((dl - (j * w * nf).sqrt()).abs() < 1e-12);
                assert!((dp - (nf / (j * w)).sqrt()).abs() < 1e-12);
                assert!((qtp_energy_mean(&st).unwrap() - w * nf).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn hamiltonian_only_on_oscillator() {
        let ev = spectral(&scr_eigenstate(1, 4).unwrap().into()).unwrap();
        assert!(matches!(mean(&ev, &Observable::Hamiltonian), Err(Error::NotApplicable { .. })));
    }

    #[test]
    fn non_hermitian_mean_rejected() {
        let ev = spectral(&scr_eigenstate(1, 4).unwrap().into()).unwrap();
        let o = Observable::function("e^{iφ}", AngleFunction::exp_i(1));
        assert!(matches!(mean(&ev, &o), Err(Error::NonHermitian(_))));
    }

    #[test]
    fn sphere_single_m_reduces_to_circle() {
        for l in 1..=3u32 {
            for m in -(l as i32)..=l as i32 {
                let ev = spectral(&sphere_state(l, &[(m, c(1.0, 0.0))]).unwrap().into()).unwrap();
                assert!((std_dev(&ev, &Observable::Phi).unwrap() - PI / 3f64.sqrt()).abs() < 1e-10);
                assert!(std_dev(&ev, &Observable::Lz).unwrap() < 1e-14);
            }
        }
    }

    #[test]
    fn deviation_orthogonal_to_state() {
        let s = periodic_superposition(&[(0, c(1.0, 0.3)), (2, c(-0.4, 0.9)), (-3, c(0.2, 0.0))]).unwrap();
        let ev = spectral(&s.into()).unwrap();
        for o in [Observable::Lz, Observable::Phi, Observable::SinPhi, Observable::CosPhi, Observable::Phi2] {
            let mu = mean(&ev, &o).unwrap();
            let z = ev.expectation(&o).unwrap() - mu * ev.norm_sqr();
            assert!(z.norm() < 1e-10, "{o}");
        }
    }
}
