//! Uncertainty relations and the identities behind them.
//!
//! Every check is generic over [`Evaluator`], so the same code runs on the
//! spectral engine and on the oracle.
//!
//! * [`csf`]: `ΔA·ΔB ≥ |(δAψ, δBψ)|`, a Cauchy–Schwarz bound that holds for
//!   every state.
//! * [`condition19`]: the mismatch `Δ_jk = (A_jψ, A_kψ) − (ψ, A_jA_kψ)`. The
//!   Robertson–Schrödinger derivation needs it to vanish.
//! * [`rsur`]: `ΔA·ΔB ≥ ½|⟨[A, B]⟩|`, reported together with the mismatch
//!   norm so a violation can be traced to its cause.
//! * [`boundary_bound`]: `|(δL_zψ, δφψ)| ≥ (ħ/2)|1 − 2π|ψ(2π−0)|²|` on the
//!   circle, and the product bound that follows from it.
//! * [`gram_det`]: the deviation Gram matrix is positive semidefinite.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{phi_power_moment, AngleFunction};
use crate::error::{Error, Result};
use crate::operators::{deviation_overlap, mean, spectral, std_dev, theta_overlaps, Evaluator, Observable};
use crate::states::{Family, SphereState, State};

/// A complex number serialized as `{"re": …, "im": …}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexValue> for Complex64 {
    fn from(z: ComplexValue) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// A named intermediate quantity in a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Detail {
    Flag(bool),
    Real(f64),
    Complex(ComplexValue),
    Text(String),
}

/// Outcome of one inequality check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub relation: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`.
    pub slack: f64,
    /// `slack ≥ −tolerance`.
    pub satisfied: bool,
    pub tolerance: f64,
    pub details: BTreeMap<String, Detail>,
}

impl RelationReport {
    pub fn new(relation: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Result<Self> {
        let relation = relation.into();
        if !(lhs.is_finite() && rhs.is_finite()) {
            return Err(Error::NonFinite(format!("{relation}: lhs={lhs}, rhs={rhs}")));
        }
        let slack = lhs - rhs;
        Ok(Self {
            relation,
            lhs,
            rhs,
            slack,
            satisfied: slack >= -tolerance,
            tolerance,
            details: BTreeMap::new(),
        })
    }

    pub fn real(mut self, key: &str, value: f64) -> Self {
        self.details.insert(key.to_string(), Detail::Real(value));
        self
    }

    pub fn complex(mut self, key: &str, value: Complex64) -> Self {
        self.details.insert(key.to_string(), Detail::Complex(value.into()));
        self
    }

    pub fn flag(mut self, key: &str, value: bool) -> Self {
        self.details.insert(key.to_string(), Detail::Flag(value));
        self
    }

    pub fn text(mut self, key: &str, value: impl Into<String>) -> Self {
        self.details.insert(key.to_string(), Detail::Text(value.into()));
        self
    }

    pub fn detail_real(&self, key: &str) -> Option<f64> {
        match self.details.get(key)? {
            Detail::Real(v) => Some(*v),
            _ => None,
        }
    }

    pub fn detail_complex(&self, key: &str) -> Option<Complex64> {
        match self.details.get(key)? {
            Detail::Complex(v) => Some((*v).into()),
            _ => None,
        }
    }
}

/// `Δ_jk = (A_jψ, A_kψ) − (ψ, A_jA_kψ)` over a list of observables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MismatchMatrix {
    pub observables: Vec<String>,
    pub entries: Vec<Vec<ComplexValue>>,
}

impl MismatchMatrix {
    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        self.entries[j][k].into()
    }

    /// Largest entry modulus.
    pub fn max_modulus(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|z| Complex64::from(*z).norm())
            .fold(0.0, f64::max)
    }
}

fn check_finite(what: &str, z: Complex64) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

/// Cauchy–Schwarz formula `ΔA·ΔB ≥ |(δAψ, δBψ)|`.
pub fn csf<E: Evaluator + ?Sized>(ev: &E, a: &Observable, b: &Observable) -> Result<RelationReport> {
    let (da, db) = (std_dev(ev, a)?, std_dev(ev, b)?);
    let cov = check_finite("csf covariance", deviation_overlap(ev, a, b)?)?;
    Ok(RelationReport::new("csf", da * db, cov.norm(), ev.tolerances().inequality)?
        .real(&format!("std_{a}"), da)
        .real(&format!("std_{b}"), db)
        .complex("deviation_overlap", cov))
}

/// The mismatch matrix over any number of observables.
pub fn mismatch_matrix<E: Evaluator + ?Sized>(ev: &E, observables: &[Observable]) -> Result<MismatchMatrix> {
    let mut entries = Vec::with_capacity(observables.len());
    for aj in observables {
        let mut row = Vec::with_capacity(observables.len());
        for ak in observables {
            let z = ev.shifted_overlap(aj, 0.0, ak, 0.0)? - ev.product_expectation(aj, ak)?;
            row.push(check_finite("mismatch entry", z)?.into());
        }
        entries.push(row);
    }
    Ok(MismatchMatrix { observables: observables.iter().map(|o| o.to_string()).collect(), entries })
}

/// All four `Δ_jk` for the pair `(A, B)`; `entry(0, 1)` is `Δ_AB`.
pub fn condition19<E: Evaluator + ?Sized>(ev: &E, a: &Observable, b: &Observable) -> Result<MismatchMatrix> {
    mismatch_matrix(ev, &[a.clone(), b.clone()])
}

/// Robertson–Schrödinger bound `ΔA·ΔB ≥ ½|⟨[A, B]⟩|`.
///
/// When the mismatch vanishes, `⟨[A, B]⟩ = 2i Im(δAψ, δBψ)` and the bound
/// is evaluated that way; otherwise `(ψ, [A, B]ψ)` is computed directly.
/// Either way the details carry `condition19_norm` and `entitled`.
pub fn rsur<E: Evaluator + ?Sized>(ev: &E, a: &Observable, b: &Observable) -> Result<RelationReport> {
    let (da, db) = (std_dev(ev, a)?, std_dev(ev, b)?);
    let mismatch = condition19(ev, a, b)?.max_modulus();
    let direct = check_finite(
        "commutator mean",
        ev.product_expectation(a, b)? - ev.product_expectation(b, a)?,
    )?;
    let entitled = mismatch < ev.tolerances().identity;
    let (rhs, source) = if entitled {
        (deviation_overlap(ev, a, b)?.im.abs(), "identity")
    } else {
        (0.5 * direct.norm(), "direct")
    };
    Ok(RelationReport::new("rsur", da * db, rhs, ev.tolerances().inequality)?
        .real(&format!("std_{a}"), da)
        .real(&format!("std_{b}"), db)
        .complex("commutator_mean", direct)
        .real("condition19_norm", mismatch)
        .flag("entitled", entitled)
        .text("rhs_source", source))
}

/// Real and imaginary parts of `(δAψ, δBψ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    /// `Re(δAψ, δBψ) = ½⟨{δA, δB}⟩`.
    pub symmetric: f64,
    /// `Im(δAψ, δBψ) = ⟨[A, B]⟩/(2i)`.
    pub antisymmetric: f64,
    /// `|(δAψ, δBψ) − ½⟨{δA, δB}⟩ − ½⟨[A, B]⟩|`, with both means computed directly.
    pub residual: f64,
    pub condition19_norm: f64,
}

/// Result of [`decomposition`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum DecompositionOutcome {
    Applicable(Decomposition),
    NotApplicable { condition19_norm: f64, threshold: f64 },
}

/// Splits `(δAψ, δBψ)` into symmetrized covariance and commutator parts,
/// provided the mismatch norm is below `threshold`.
pub fn decomposition<E: Evaluator + ?Sized>(
    ev: &E,
    a: &Observable,
    b: &Observable,
    threshold: f64,
) -> Result<DecompositionOutcome> {
    let norm = condition19(ev, a, b)?.max_modulus();
    if norm >= threshold {
        return Ok(DecompositionOutcome::NotApplicable { condition19_norm: norm, threshold });
    }
    let (ma, mb) = (mean(ev, a)?, mean(ev, b)?);
    let cov = ev.shifted_overlap(a, ma, b, mb)?;
    let (ab, ba) = (ev.product_expectation(a, b)?, ev.product_expectation(b, a)?);
    let anticommutator = ab + ba - 2.0 * ma * mb;
    let commutator = ab - ba;
    let residual = (cov - 0.5 * anticommutator - 0.5 * commutator).norm();
    Ok(DecompositionOutcome::Applicable(Decomposition {
        symmetric: cov.re,
        antisymmetric: cov.im,
        residual,
        condition19_norm: norm,
    }))
}

/// Power of `|ψ(2π − 0)|` in the boundary bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryExponent {
    /// `|ψ(2π−0)|²`, the boundary probability density.
    #[default]
    Squared,
    /// `|ψ(2π−0)|`, kept for comparison.
    Single,
}

/// The two chained boundary reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryBound {
    /// `|(δL_zψ, δφψ)| ≥ (ħ/2)|1 − 2πB|`.
    pub overlap: RelationReport,
    /// `ΔL_z·Δφ ≥ (ħ/2)|1 − 2πB|`.
    pub product: RelationReport,
}

/// Boundary bound for circle states.
pub fn boundary_bound<E: Evaluator + ?Sized>(ev: &E, exponent: BoundaryExponent) -> Result<BoundaryBound> {
    let psi_end = ev.boundary_value().ok_or_else(|| Error::NotApplicable {
        observable: "boundary bound".into(),
        family: ev.family().to_string(),
    })?;
    let b = match exponent {
        BoundaryExponent::Squared => psi_end.norm_sqr(),
        BoundaryExponent::Single => psi_end.norm(),
    };
    let rhs = 0.5 * ev.hbar() * (1.0 - 2.0 * PI * b).abs();
    let (lz, phi) = (Observable::Lz, Observable::Phi);
    let cov = check_finite("boundary covariance", deviation_overlap(ev, &lz, &phi)?)?;
    let (dl, dp) = (std_dev(ev, &lz)?, std_dev(ev, &phi)?);
    let tol = ev.tolerances().boundary;
    let label = match exponent {
        BoundaryExponent::Squared => "squared",
        BoundaryExponent::Single => "single",
    };
    let decorate = |r: RelationReport| {
        r.complex("boundary_value", psi_end)
            .real("boundary_term", b)
            .text("exponent", label)
    };
    Ok(BoundaryBound {
        overlap: decorate(RelationReport::new("boundary", cov.norm(), rhs, tol)?.complex("deviation_overlap", cov)),
        product: decorate(
            RelationReport::new("boundary_product", dl * dp, rhs, tol)?
                .real("std_Lz", dl)
                .real("std_Phi", dp),
        ),
    })
}

/// Caller-supplied function of `Δφ`.
pub type ScaleFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Adjusted `L_z`–angle relations.
#[derive(Clone)]
pub enum AdjustedRelation {
    /// `ΔL_z·Δφ / a(Δφ) ≥ ħ|⟨b(φ)⟩|`.
    Ratio { label: String, a: ScaleFn, b: AngleFunction },
    /// `ΔL_z·Δf ≥ scale·ħ|⟨g⟩|`.
    Product { label: String, f: AngleFunction, g: AngleFunction, scale: f64 },
    /// `(ΔL_z)² + ħ²(Δu)² ≥ ħ²⟨v⟩²`.
    SumOfSquares { label: String, u: AngleFunction, v: AngleFunction },
}

impl fmt::Debug for AdjustedRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl AdjustedRelation {
    pub fn label(&self) -> &str {
        match self {
            AdjustedRelation::Ratio { label, .. }
            | AdjustedRelation::Product { label, .. }
            | AdjustedRelation::SumOfSquares { label, .. } => label,
        }
    }

    /// `ΔL_z·Δsinφ ≥ (ħ/2)|⟨cosφ⟩|`.
    pub fn eq8_sin() -> Self {
        AdjustedRelation::Product {
            label: "eq8-sin".into(),
            f: AngleFunction::sin(),
            g: AngleFunction::cos(),
            scale: 0.5,
        }
    }

    /// `ΔL_z·Δcosφ ≥ (ħ/2)|⟨sinφ⟩|`.
    pub fn eq8_cos() -> Self {
        AdjustedRelation::Product {
            label: "eq8-cos".into(),
            f: AngleFunction::cos(),
            g: AngleFunction::sin(),
            scale: 0.5,
        }
    }

    /// `(ΔL_z)² + ħ²(Δsinφ)² ≥ ħ²⟨cosφ⟩²`.
    pub fn eq9_trig() -> Self {
        AdjustedRelation::SumOfSquares { label: "eq9-trig".into(), u: AngleFunction::sin(), v: AngleFunction::cos() }
    }
}

fn real_function(name: &str, f: &AngleFunction) -> Result<Observable> {
    if !f.is_real() {
        return Err(Error::Domain(format!("adjusting function {name} must be real-valued")));
    }
    Ok(Observable::function(name, f.clone()))
}

/// Evaluates an adjusted relation.
pub fn adjusted_relation<E: Evaluator + ?Sized>(ev: &E, rel: &AdjustedRelation) -> Result<RelationReport> {
    let hbar = ev.hbar();
    let tol = ev.tolerances().inequality;
    let dl = std_dev(ev, &Observable::Lz)?;
    match rel {
        AdjustedRelation::Ratio { label, a, b } => {
            let dp = std_dev(ev, &Observable::Phi)?;
            let scale = a(dp);
            if !(scale.is_finite() && scale > 0.0) {
                return Err(Error::Domain(format!("{label}: a(Δφ) = {scale} must be positive")));
            }
            let mb = mean(ev, &real_function("b", b)?)?;
            Ok(RelationReport::new(label.clone(), dl * dp / scale, hbar * mb.abs(), tol)?
                .real("std_Lz", dl)
                .real("std_Phi", dp)
                .real("a", scale)
                .real("mean_b", mb))
        }
        AdjustedRelation::Product { label, f, g, scale } => {
            let df = std_dev(ev, &real_function("f", f)?)?;
            let mg = mean(ev, &real_function("g", g)?)?;
            Ok(RelationReport::new(label.clone(), dl * df, scale * hbar * mg.abs(), tol)?
                .real("std_Lz", dl)
                .real("std_f", df)
                .real("mean_g", mg))
        }
        AdjustedRelation::SumOfSquares { label, u, v } => {
            let du = std_dev(ev, &real_function("u", u)?)?;
            let mv = mean(ev, &real_function("v", v)?)?;
            Ok(RelationReport::new(label.clone(), dl * dl + hbar * hbar * du * du, hbar * hbar * mv * mv, tol)?
                .real("std_Lz", dl)
                .real("std_u", du)
                .real("mean_v", mv))
        }
    }
}

/// `det[(δA_jψ, δA_kψ)] ≥ 0`; details carry the minimum eigenvalue.
pub fn gram_det<E: Evaluator + ?Sized>(ev: &E, observables: &[Observable]) -> Result<RelationReport> {
    let r = observables.len();
    if r < 2 {
        return Err(Error::Precondition(format!("Gram determinant needs at least 2 observables, got {r}")));
    }
    let means: Vec<f64> = observables.iter().map(|o| mean(ev, o)).collect::<Result<_>>()?;
    let mut g = DMatrix::<Complex64>::zeros(r, r);
    for j in 0..r {
        for k in j..r {
            let z = check_finite(
                "Gram entry",
                ev.shifted_overlap(&observables[j], means[j], &observables[k], means[k])?,
            )?;
            g[(j, k)] = z;
            g[(k, j)] = z.conj();
        }
        g[(j, j)].im = 0.0;
    }
    let det = g.clone().determinant();
    let scale = (0..r).map(|j| g[(j, j)].re.abs()).product::<f64>().max(1.0);
    let tol = ev.tolerances();
    if det.im.abs() > tol.imag * scale {
        return Err(Error::NonHermitian(format!("Gram determinant has imaginary part {:e}", det.im)));
    }
    let min_eig = g
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let names: Vec<String> = observables.iter().map(|o| o.to_string()).collect();
    Ok(RelationReport::new("gram", det.re, 0.0, tol.gram)?
        .real("determinant_imag", det.im)
        .real("min_eigenvalue", min_eig)
        .text("observables", names.join(",")))
}

/// First-principles `L_z`–`φ` mismatch on a sphere state next to the usual
/// closed form `iħ{1 + 2 Im Σ c_m* c_r ħm (Y_lm, φY_lr)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereMismatch {
    pub direct_mismatch: ComplexValue,
    pub closed_form: ComplexValue,
    /// `|direct − closed form|`; zero when `ħ = 1`.
    pub discrepancy: f64,
}

/// `Σ c_m* c_r m (Y_lm, φ Y_lr)` with exact matrix elements.
fn sphere_bracket(state: &SphereState) -> Result<Complex64> {
    let o = theta_overlaps(state.l())?;
    let li = state.l() as i32;
    let support = state.support();
    let mut acc = Complex64::new(0.0, 0.0);
    for &(m, cm) in &support {
        for &(r, cr) in &support {
            let overlap = o[((m + li) as usize, (r + li) as usize)];
            acc += cm.conj() * cr * (m as f64) * overlap * phi_power_moment(1, r - m);
        }
    }
    Ok(acc)
}

/// Direct mismatch `(L_zψ, φψ) − (ψ, L_zφψ)` from `ev`, compared with the closed form.
pub fn scenario_eq24_with<E: Evaluator + ?Sized>(ev: &E, state: &SphereState) -> Result<SphereMismatch> {
    if ev.family() != Family::Sphere {
        return Err(Error::NotApplicable { observable: "eq24".into(), family: ev.family().to_string() });
    }
    let direct = condition19(ev, &Observable::Lz, &Observable::Phi)?.entry(0, 1);
    let h = state.hbar();
    let closed = Complex64::new(0.0, h) * (1.0 + 2.0 * (h * sphere_bracket(state)?).im);
    Ok(SphereMismatch {
        direct_mismatch: direct.into(),
        closed_form: closed.into(),
        discrepancy: (direct - closed).norm(),
    })
}

/// [`scenario_eq24_with`] on the spectral evaluator.
pub fn scenario_eq24(state: &SphereState) -> Result<SphereMismatch> {
    scenario_eq24_with(&spectral(&State::Sphere(state.clone()))?, state)
}

/// Golden-section search for the parameter in `[lo, hi]` whose sphere state
/// has the smallest `|L_z–φ mismatch|`.
pub fn minimize_sphere_mismatch<F>(family: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, SphereState, f64)>
where
    F: Fn(f64) -> Result<SphereState>,
{
    let cost = |s: f64| -> Result<f64> { Ok(Complex64::from(scenario_eq24(&family(s)?)?.direct_mismatch).norm()) };
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (cost(c)?, cost(d)?);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = cost(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = cost(d)?;
        }
    }
    let mut best = (0.5 * (a + b), f64::INFINITY);
    for s in [a, 0.5 * (a + b), b] {
        let v = cost(s)?;
        if v < best.1 {
            best = (s, v);
        }
    }
    Ok((best.0, family(best.0)?, best.1))
}
