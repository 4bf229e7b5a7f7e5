//! Named scenarios, sweeps and machine-readable reports.
//!
//! A [`ScenarioConfig`] picks a state (a circle eigenstate, an oscillator
//! level, a single-`m` sphere state or a coefficient file) and a list of
//! relations from the fixed [`RelationName`] registry. [`run_scenario`]
//! evaluates each relation spectrally and, on request, again on the oracle.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::operators::{mean, spectral, std_dev, Evaluator, Observable};
use crate::oracle::{OracleEvaluator, Resolution};
use crate::relations::{
    adjusted_relation, boundary_bound, condition19, csf, decomposition, gram_det, mismatch_matrix, rsur,
    scenario_eq24_with, AdjustedRelation, BoundaryBound, BoundaryExponent, ComplexValue, DecompositionOutcome,
    MismatchMatrix, RelationReport, SphereMismatch,
};
use crate::sampling::{indexed_rng, random_oscillator, random_periodic, random_sphere};
use crate::states::{
    Family, OscillatorParams, OscillatorState, PeriodicState, SphereState, State, StateDocument,
    DEFAULT_FOURIER_TRUNCATION, DEFAULT_HERMITE_TRUNCATION,
};
use crate::DEFAULT_HBAR;

/// Version stamped on every report and on the schema document.
pub const SCHEMA_VERSION: u32 = 1;

/// Grid size of the commutator check unless the config overrides it.
pub const COMMUTATOR_POINTS: usize = 1024;

/// Residual allowed by the commutator check.
pub const COMMUTATOR_TOLERANCE: f64 = 1e-6;

const DEFAULT_RANDOM_MODE: u32 = 4;
const DEFAULT_RANDOM_LEVEL: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioFamily {
    /// Circle eigenstate `e^{imφ}/√(2π)`.
    Scr,
    /// Torsion-pendulum level `n`.
    Qtp,
    /// Single-`m` state at fixed `l`.
    Sphere,
    /// Whatever the coefficient file holds.
    Custom,
}

impl fmt::Display for ScenarioFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScenarioFamily::Scr => "scr",
            ScenarioFamily::Qtp => "qtp",
            ScenarioFamily::Sphere => "sphere",
            ScenarioFamily::Custom => "custom",
        })
    }
}

impl FromStr for ScenarioFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "scr" => Ok(ScenarioFamily::Scr),
            "qtp" => Ok(ScenarioFamily::Qtp),
            "sphere" => Ok(ScenarioFamily::Sphere),
            "custom" => Ok(ScenarioFamily::Custom),
            other => Err(Error::Config(format!("unknown family '{other}' (expected scr, qtp, sphere or custom)"))),
        }
    }
}

/// The relation registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationName {
    Csf,
    Rsur,
    Condition19,
    Decomposition,
    Boundary,
    Gram,
    Eq8Sin,
    Eq8Cos,
    Eq9Trig,
    /// `L_z`–`φ` mismatch on the circle, `iħ·2π|ψ(2π−0)|²`.
    Eq22,
    /// `L_z`–`φ` mismatch on the line, zero.
    Eq23,
    /// `L_z`–`φ` mismatch on the sphere next to its closed form.
    Eq24,
    Moments,
    Commutator,
}

impl RelationName {
    pub const ALL: [RelationName; 14] = [
        RelationName::Csf,
        RelationName::Rsur,
        RelationName::Condition19,
        RelationName::Decomposition,
        RelationName::Boundary,
        RelationName::Gram,
        RelationName::Eq8Sin,
        RelationName::Eq8Cos,
        RelationName::Eq9Trig,
        RelationName::Eq22,
        RelationName::Eq23,
        RelationName::Eq24,
        RelationName::Moments,
        RelationName::Commutator,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationName::Csf => "csf",
            RelationName::Rsur => "rsur",
            RelationName::Condition19 => "condition19",
            RelationName::Decomposition => "decomposition",
            RelationName::Boundary => "boundary",
            RelationName::Gram => "gram",
            RelationName::Eq8Sin => "eq8-sin",
            RelationName::Eq8Cos => "eq8-cos",
            RelationName::Eq9Trig => "eq9-trig",
            RelationName::Eq22 => "eq22",
            RelationName::Eq23 => "eq23",
            RelationName::Eq24 => "eq24",
            RelationName::Moments => "moments",
            RelationName::Commutator => "commutator",
        }
    }

    fn needs_pair(self) -> bool {
        matches!(self, RelationName::Csf | RelationName::Rsur | RelationName::Decomposition | RelationName::Gram)
    }
}

impl fmt::Display for RelationName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelationName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        RelationName::ALL.into_iter().find(|r| r.as_str() == key).ok_or_else(|| {
            let known: Vec<&str> = RelationName::ALL.iter().map(|r| r.as_str()).collect();
            Error::Config(format!("unknown relation '{key}' (known: {})", known.join(", ")))
        })
    }
}

/// Parses `"csf,rsur"`.
pub fn parse_relations(list: &str) -> Result<Vec<RelationName>> {
    list.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
    #[serde(default, rename = "J", skip_serializing_if = "Option::is_none")]
    pub inertia: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
    /// Path to a state document.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<PathBuf>,
}

impl Parameters {
    fn hbar(&self) -> f64 {
        self.hbar.unwrap_or(DEFAULT_HBAR)
    }

    fn oscillator(&self) -> Result<OscillatorParams> {
        let j = self.inertia.ok_or_else(|| Error::Config("missing parameter J".into()))?;
        let w = self.omega.ok_or_else(|| Error::Config("missing parameter omega".into()))?;
        OscillatorParams::new(j, w, self.hbar())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::Config(format!("unknown format '{other}' (expected json or csv)"))),
        }
    }
}

fn default_observables() -> Vec<String> {
    vec!["Lz".into(), "Phi".into()]
}

/// One scenario: a state plus the relations to evaluate on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub family: ScenarioFamily,
    #[serde(default)]
    pub parameters: Parameters,
    pub relations: Vec<RelationName>,
    /// Observables for the pair relations (first two) and for `gram` and
    /// `condition19` (all of them).
    #[serde(default = "default_observables")]
    pub observables: Vec<String>,
    /// Points on every one-dimensional oracle grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    #[serde(default)]
    pub oracle: bool,
    #[serde(default)]
    pub format: OutputFormat,
}

impl ScenarioConfig {
    pub fn new(family: ScenarioFamily, relations: Vec<RelationName>) -> Self {
        Self {
            family,
            parameters: Parameters::default(),
            relations,
            observables: default_observables(),
            resolution: None,
            oracle: false,
            format: OutputFormat::Json,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Reads a config file; a relative `coeffs` path is taken relative to it.
    pub fn load(path: &Path) -> Result<Self> {
        let mut cfg = Self::from_json(&std::fs::read_to_string(path)?)?;
        if let (Some(c), Some(dir)) = (&cfg.parameters.coeffs, path.parent()) {
            if c.is_relative() {
                cfg.parameters.coeffs = Some(dir.join(c));
            }
        }
        Ok(cfg)
    }

    pub fn observable_list(&self) -> Result<Vec<Observable>> {
        self.observables.iter().map(|s| s.parse()).collect()
    }

    pub fn oracle_resolution(&self) -> Resolution {
        self.resolution.map(Resolution::uniform).unwrap_or_default()
    }

    /// Every problem with the config; empty when it can run.
    pub fn diagnostics(&self) -> Vec<String> {
        self.collect_diagnostics(false)
    }

    fn collect_diagnostics(&self, random: bool) -> Vec<String> {
        let mut out = Vec::new();
        let p = &self.parameters;
        if self.relations.is_empty() {
            out.push("no relations requested".to_string());
        }
        match self.observable_list() {
            Ok(obs) => {
                if obs.len() < 2 && self.relations.iter().any(|r| r.needs_pair()) {
                    out.push(format!("pair relations need at least 2 observables, got {}", obs.len()));
                }
            }
            Err(e) => out.push(e.to_string()),
        }
        if let Some(h) = p.hbar {
            if !(h.is_finite() && h > 0.0) {
                out.push(format!("hbar must be positive, got {h}"));
            }
        }
        if let Some(r) = self.resolution {
            if r < 16 {
                out.push(format!("resolution must be at least 16, got {r}"));
            }
        }
        if let Some(path) = &p.coeffs {
            match State::load(path) {
                Ok(state) => {
                    let wanted = match self.family {
                        ScenarioFamily::Scr => Some(Family::Periodic),
                        ScenarioFamily::Qtp => Some(Family::Oscillator),
                        ScenarioFamily::Sphere => Some(Family::Sphere),
                        ScenarioFamily::Custom => None,
                    };
                    if let Some(w) = wanted.filter(|w| *w != state.family()) {
                        out.push(format!(
                            "coefficient file {} holds a {} state, not {w}",
                            path.display(),
                            state.family()
                        ));
                    }
                }
                Err(e) => out.push(format!("coefficient file {}: {e}", path.display())),
            }
            return out;
        }
        match self.family {
            ScenarioFamily::Scr => {
                if p.m.is_none() && !random {
                    out.push("missing parameter m".into());
                }
            }
            ScenarioFamily::Qtp => {
                if p.n.is_none() && !random {
                    out.push("missing parameter n".into());
                }
                if p.inertia.is_none() {
                    out.push("missing parameter J".into());
                }
                if p.omega.is_none() {
                    out.push("missing parameter omega".into());
                }
                for (name, v) in [("J", p.inertia), ("omega", p.omega)] {
                    if let Some(v) = v.filter(|v| !(v.is_finite() && *v > 0.0)) {
                        out.push(format!("{name} must be positive, got {v}"));
                    }
                }
            }
            ScenarioFamily::Sphere => match (p.l, p.m) {
                (None, _) => out.push("missing parameter l".into()),
                (Some(_), None) if !random => out.push("missing parameter m".into()),
                (Some(l), Some(m)) if m.unsigned_abs() > l && !random => {
                    out.push(format!("coefficient m={m} exceeds l={l}"))
                }
                _ => {}
            },
            ScenarioFamily::Custom => out.push("custom scenarios need a coefficient file (coeffs)".into()),
        }
        out
    }

    fn ensure_valid(&self, random: bool) -> Result<()> {
        let d = self.collect_diagnostics(random);
        if d.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(d.join("; ")))
        }
    }

    /// The state this config describes.
    pub fn build_state(&self) -> Result<State> {
        self.ensure_valid(false)?;
        let p = &self.parameters;
        if let Some(path) = &p.coeffs {
            return State::load(path);
        }
        let missing = |name: &str| Error::Config(format!("missing parameter {name}"));
        Ok(match self.family {
            ScenarioFamily::Scr => {
                let m = p.m.ok_or_else(|| missing("m"))?;
                let trunc = m.unsigned_abs().max(DEFAULT_FOURIER_TRUNCATION);
                State::Periodic(PeriodicState::new(&[(m, Complex64::new(1.0, 0.0))], trunc, p.hbar())?)
            }
            ScenarioFamily::Qtp => {
                let n = p.n.ok_or_else(|| missing("n"))?;
                let trunc = n.max(DEFAULT_HERMITE_TRUNCATION);
                State::Oscillator(OscillatorState::new(&[(n, Complex64::new(1.0, 0.0))], trunc, p.oscillator()?)?)
            }
            ScenarioFamily::Sphere => {
                let l = p.l.ok_or_else(|| missing("l"))?;
                let m = p.m.ok_or_else(|| missing("m"))?;
                State::Sphere(SphereState::new(l, &[(m, Complex64::new(1.0, 0.0))], p.hbar())?)
            }
            ScenarioFamily::Custom => return Err(missing("coeffs")),
        })
    }

    /// Random state number `index` of the stream for `seed`.
    pub fn random_state(&self, seed: u64, index: u64) -> Result<State> {
        self.ensure_valid(true)?;
        let p = &self.parameters;
        let mut rng = indexed_rng(seed, index);
        Ok(match self.family {
            ScenarioFamily::Scr => {
                let top = p.m.map(i32::unsigned_abs).unwrap_or(DEFAULT_RANDOM_MODE);
                State::Periodic(random_periodic(&mut rng, top, p.hbar())?)
            }
            ScenarioFamily::Qtp => {
                let top = p.n.unwrap_or(DEFAULT_RANDOM_LEVEL);
                State::Oscillator(random_oscillator(&mut rng, top, p.oscillator()?)?)
            }
            ScenarioFamily::Sphere => {
                let l = p.l.ok_or_else(|| Error::Config("missing parameter l".into()))?;
                State::Sphere(random_sphere(&mut rng, l, p.hbar())?)
            }
            ScenarioFamily::Custom => {
                return Err(Error::Config("random sweeps need family scr, qtp or sphere".into()));
            }
        })
    }
}

/// An identity `value = expected` checked to `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub value: ComplexValue,
    pub expected: ComplexValue,
    pub deviation: f64,
    pub tolerance: f64,
    pub holds: bool,
}

impl IdentityCheck {
    fn new(value: Complex64, expected: Complex64, tolerance: f64) -> Self {
        let deviation = (value - expected).norm();
        Self { value: value.into(), expected: expected.into(), deviation, tolerance, holds: deviation <= tolerance }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean_lz: f64,
    pub std_lz: f64,
    pub mean_phi: f64,
    pub std_phi: f64,
    pub std_product: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommutatorCheck {
    /// `max |[L_z, φ]ψ + iħψ|` over interior grid nodes.
    pub residual: f64,
    pub points: usize,
    pub tolerance: f64,
    pub holds: bool,
}

/// Result of one registry entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    Relation(RelationReport),
    Boundary(BoundaryBound),
    Mismatch(MismatchMatrix),
    Decomposition(DecompositionOutcome),
    Identity(IdentityCheck),
    SphereMismatch(SphereMismatch),
    Moments(Moments),
    Commutator(CommutatorCheck),
    NotApplicable { reason: String },
}

impl Outcome {
    fn not_applicable(relation: RelationName, family: Family) -> Self {
        Outcome::NotApplicable { reason: format!("{relation} is not defined for the {family} family") }
    }

    /// The inequality report, if this outcome is one.
    pub fn as_relation(&self) -> Option<&RelationReport> {
        match self {
            Outcome::Relation(r) => Some(r),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationEntry {
    pub relation: RelationName,
    pub result: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Outcome>,
    /// Largest scaled difference `|spectral − oracle| / max(1, |spectral|)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_delta: Option<f64>,
}

/// Where a random state came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleOrigin {
    pub seed: u64,
    pub index: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub schema_version: u32,
    pub scenario: ScenarioFamily,
    pub family: Family,
    pub parameters: Parameters,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleOrigin>,
    pub state: StateDocument,
    pub results: Vec<RelationEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_max_delta: Option<f64>,
}

impl ScenarioReport {
    pub fn entry(&self, relation: RelationName) -> Option<&RelationEntry> {
        self.results.iter().find(|e| e.relation == relation)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn evaluate<E: Evaluator + ?Sized>(
    ev: &E,
    state: &State,
    relation: RelationName,
    observables: &[Observable],
    points: usize,
) -> Result<Outcome> {
    let family = state.family();
    let tol = ev.tolerances();
    let pair = || (&observables[0], &observables[1]);
    let lz_phi = || -> Result<Complex64> { Ok(condition19(ev, &Observable::Lz, &Observable::Phi)?.entry(0, 1)) };
    let outcome = match relation {
        RelationName::Csf => {
            let (a, b) = pair();
            csf(ev, a, b).map(Outcome::Relation)
        }
        RelationName::Rsur => {
            let (a, b) = pair();
            rsur(ev, a, b).map(Outcome::Relation)
        }
        RelationName::Condition19 => mismatch_matrix(ev, observables).map(Outcome::Mismatch),
        RelationName::Decomposition => {
            let (a, b) = pair();
            decomposition(ev, a, b, tol.identity).map(Outcome::Decomposition)
        }
        RelationName::Boundary => match family {
            Family::Periodic => boundary_bound(ev, BoundaryExponent::Squared).map(Outcome::Boundary),
            _ => return Ok(Outcome::not_applicable(relation, family)),
        },
        RelationName::Gram => gram_det(ev, observables).map(Outcome::Relation),
        RelationName::Eq8Sin => adjusted_relation(ev, &AdjustedRelation::eq8_sin()).map(Outcome::Relation),
        RelationName::Eq8Cos => adjusted_relation(ev, &AdjustedRelation::eq8_cos()).map(Outcome::Relation),
        RelationName::Eq9Trig => adjusted_relation(ev, &AdjustedRelation::eq9_trig()).map(Outcome::Relation),
        RelationName::Eq22 => match ev.boundary_value() {
            Some(end) if family == Family::Periodic => {
                let expected = Complex64::new(0.0, ev.hbar() * 2.0 * std::f64::consts::PI * end.norm_sqr());
                lz_phi().map(|v| Outcome::Identity(IdentityCheck::new(v, expected, tol.identity)))
            }
            _ => return Ok(Outcome::not_applicable(relation, family)),
        },
        RelationName::Eq23 => match family {
            Family::Oscillator => {
                lz_phi().map(|v| Outcome::Identity(IdentityCheck::new(v, Complex64::new(0.0, 0.0), tol.identity)))
            }
            _ => return Ok(Outcome::not_applicable(relation, family)),
        },
        RelationName::Eq24 => match state {
            State::Sphere(s) => scenario_eq24_with(ev, s).map(Outcome::SphereMismatch),
            _ => return Ok(Outcome::not_applicable(relation, family)),
        },
        RelationName::Moments => moments(ev).map(Outcome::Moments),
        RelationName::Commutator => match family {
            Family::Sphere => return Ok(Outcome::not_applicable(relation, family)),
            _ => crate::operators::commutator_residual(state, points).map(|residual| {
                Outcome::Commutator(CommutatorCheck {
                    residual,
                    points,
                    tolerance: COMMUTATOR_TOLERANCE,
                    holds: residual <= COMMUTATOR_TOLERANCE,
                })
            }),
        },
    };
    match outcome {
        Err(e @ Error::NotApplicable { .. }) => Ok(Outcome::NotApplicable { reason: e.to_string() }),
        other => other,
    }
}

fn moments<E: Evaluator + ?Sized>(ev: &E) -> Result<Moments> {
    let (std_lz, std_phi) = (std_dev(ev, &Observable::Lz)?, std_dev(ev, &Observable::Phi)?);
    let energy = match ev.family() {
        Family::Oscillator => Some(mean(ev, &Observable::Hamiltonian)?),
        _ => None,
    };
    Ok(Moments {
        mean_lz: mean(ev, &Observable::Lz)?,
        std_lz,
        mean_phi: mean(ev, &Observable::Phi)?,
        std_phi,
        std_product: std_lz * std_phi,
        energy,
    })
}

/// Largest `|a − b| / max(1, |a|)` over matching numeric leaves; tolerances
/// and non-numeric fields are skipped.
fn max_scaled_delta(a: &Value, b: &Value) -> f64 {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap_or(0.0), y.as_f64().unwrap_or(0.0));
            (x - y).abs() / x.abs().max(1.0)
        }
        (Value::Object(x), Value::Object(y)) => x
            .iter()
            .filter(|(k, _)| k.as_str() != "tolerance")
            .filter_map(|(k, v)| y.get(k).map(|w| max_scaled_delta(v, w)))
            .fold(0.0, f64::max),
        (Value::Array(x), Value::Array(y)) => {
            x.iter().zip(y).map(|(v, w)| max_scaled_delta(v, w)).fold(0.0, f64::max)
        }
        _ => 0.0,
    }
}

fn run_on_state(config: &ScenarioConfig, state: &State, sample: Option<SampleOrigin>) -> Result<ScenarioReport> {
    let observables = config.observable_list()?;
    let points = config.resolution.unwrap_or(COMMUTATOR_POINTS);
    let ev = spectral(state)?;
    let oracle = if config.oracle { Some(OracleEvaluator::new(state, &config.oracle_resolution())?) } else { None };
    let mut results = Vec::with_capacity(config.relations.len());
    for &relation in &config.relations {
        let result = evaluate(&ev, state, relation, &observables, points)?;
        let (oracle_outcome, oracle_delta) = match &oracle {
            Some(o) if relation != RelationName::Commutator => {
                let other = evaluate(o, state, relation, &observables, points)?;
                let delta = max_scaled_delta(&serde_json::to_value(&result)?, &serde_json::to_value(&other)?);
                (Some(other), Some(delta))
            }
            _ => (None, None),
        };
        results.push(RelationEntry { relation, result, oracle: oracle_outcome, oracle_delta });
    }
    let oracle_max_delta = oracle.as_ref().map(|_| results.iter().filter_map(|e| e.oracle_delta).fold(0.0, f64::max));
    Ok(ScenarioReport {
        schema_version: SCHEMA_VERSION,
        scenario: config.family,
        family: state.family(),
        parameters: config.parameters.clone(),
        sample,
        state: state.to_document(),
        results,
        oracle_max_delta,
    })
}

/// Evaluates every requested relation on the configured state.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioReport> {
    let state = config.build_state()?;
    run_on_state(config, &state, None)
}

/// [`run_scenario`] with the relations evaluated on an explicit state.
pub fn run_scenario_on(config: &ScenarioConfig, state: &State) -> Result<ScenarioReport> {
    run_on_state(config, state, None)
}

/// The same report computed from grid samples alone.
pub fn oracle_report(config: &ScenarioConfig) -> Result<ScenarioReport> {
    let state = config.build_state()?;
    let observables = config.observable_list()?;
    let points = config.resolution.unwrap_or(COMMUTATOR_POINTS);
    let ev = OracleEvaluator::new(&state, &config.oracle_resolution())?;
    let results = config
        .relations
        .iter()
        .map(|&relation| {
            Ok(RelationEntry {
                relation,
                result: evaluate(&ev, &state, relation, &observables, points)?,
                oracle: None,
                oracle_delta: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScenarioReport {
        schema_version: SCHEMA_VERSION,
        scenario: config.family,
        family: state.family(),
        parameters: config.parameters.clone(),
        sample: None,
        state: state.to_document(),
        results,
        oracle_max_delta: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    M,
    N,
    L,
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "m" => Ok(SweepAxis::M),
            "n" => Ok(SweepAxis::N),
            "l" => Ok(SweepAxis::L),
            other => Err(Error::Config(format!("cannot sweep over '{other}' (expected m, n or l)"))),
        }
    }
}

/// What a sweep iterates over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SweepPlan {
    /// `start..=end` on one parameter.
    Range { axis: SweepAxis, start: i64, end: i64 },
    /// `count` random states from ChaCha8 stream `index` of `seed`.
    Random { count: u64, seed: u64 },
}

/// Parses `a..b` or `a..=b` (both inclusive) or a single integer.
pub fn parse_range(text: &str) -> Result<(i64, i64)> {
    let bad = || Error::Config(format!("invalid range '{text}' (expected a..b)"));
    let parse = |s: &str| s.trim().parse::<i64>().map_err(|_| bad());
    let (start, end) = match text.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = parse(text)?;
            (v, v)
        }
    };
    if end < start {
        return Err(bad());
    }
    Ok((start, end))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub base: ScenarioConfig,
    pub plan: SweepPlan,
    /// Worker threads; results are ordered by index regardless.
    #[serde(default = "default_jobs")]
    pub jobs: usize,
}

fn default_jobs() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub plan: SweepPlan,
    pub entries: Vec<ScenarioReport>,
}

impl SweepReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn with_axis(base: &ScenarioConfig, axis: SweepAxis, value: i64) -> Result<ScenarioConfig> {
    let mut cfg = base.clone();
    let out_of_range = || Error::Config(format!("sweep value {value} out of range for {axis:?}"));
    match axis {
        SweepAxis::M => cfg.parameters.m = Some(i32::try_from(value).map_err(|_| out_of_range())?),
        SweepAxis::N => cfg.parameters.n = Some(u32::try_from(value).map_err(|_| out_of_range())?),
        SweepAxis::L => cfg.parameters.l = Some(u32::try_from(value).map_err(|_| out_of_range())?),
    }
    Ok(cfg)
}

/// Runs every sweep entry on up to `jobs` threads.
pub fn run_sweep(sweep: &SweepConfig) -> Result<SweepReport> {
    let run_one = |index: u64| -> Result<ScenarioReport> {
        match sweep.plan {
            SweepPlan::Range { axis, start, .. } => run_scenario(&with_axis(&sweep.base, axis, start + index as i64)?),
            SweepPlan::Random { seed, .. } => {
                let state = sweep.base.random_state(seed, index)?;
                run_on_state(&sweep.base, &state, Some(SampleOrigin { seed, index }))
            }
        }
    };
    let count = match sweep.plan {
        SweepPlan::Range { axis, start, end } => {
            for v in start..=end {
                let d = with_axis(&sweep.base, axis, v)?.diagnostics();
                if !d.is_empty() {
                    return Err(Error::Config(d.join("; ")));
                }
            }
            (end - start + 1) as u64
        }
        SweepPlan::Random { count, .. } => {
            sweep.base.ensure_valid(true)?;
            count
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(sweep.jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let results: Vec<Result<ScenarioReport>> = pool.install(|| (0..count).into_par_iter().map(run_one).collect());
    let entries = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(SweepReport { schema_version: SCHEMA_VERSION, plan: sweep.plan, entries })
}

struct CsvRow {
    relation: String,
    lhs: Option<f64>,
    rhs: Option<f64>,
    slack: Option<f64>,
    satisfied: Option<bool>,
}

impl CsvRow {
    fn new(relation: impl Into<String>, lhs: Option<f64>, rhs: Option<f64>, satisfied: Option<bool>) -> Self {
        Self { relation: relation.into(), lhs, rhs, slack: None, satisfied }
    }

    fn report(r: &RelationReport) -> Self {
        Self { relation: r.relation.clone(), lhs: Some(r.lhs), rhs: Some(r.rhs), slack: Some(r.slack), satisfied: Some(r.satisfied) }
    }
}

/// Table rows for one outcome. Inequalities map directly; for other
/// outcomes `lhs` and `rhs` hold the two headline numbers and `slack` is blank.
fn csv_rows(name: RelationName, outcome: &Outcome) -> Vec<CsvRow> {
    let z = |c: ComplexValue| Complex64::from(c).norm();
    match outcome {
        Outcome::Relation(r) => vec![CsvRow::report(r)],
        Outcome::Boundary(b) => vec![CsvRow::report(&b.overlap), CsvRow::report(&b.product)],
        Outcome::Mismatch(m) => vec![CsvRow::new(name.as_str(), Some(m.max_modulus()), None, None)],
        Outcome::Decomposition(DecompositionOutcome::Applicable(d)) => {
            vec![CsvRow::new(name.as_str(), Some(d.symmetric), Some(d.antisymmetric), Some(true))]
        }
        Outcome::Decomposition(DecompositionOutcome::NotApplicable { .. }) => {
            vec![CsvRow::new(name.as_str(), None, None, Some(false))]
        }
        Outcome::Identity(i) => vec![CsvRow::new(name.as_str(), Some(z(i.value)), Some(z(i.expected)), Some(i.holds))],
        Outcome::SphereMismatch(s) => {
            vec![CsvRow::new(name.as_str(), Some(z(s.direct_mismatch)), Some(z(s.closed_form)), None)]
        }
        Outcome::Moments(m) => vec![CsvRow::new(name.as_str(), Some(m.std_lz), Some(m.std_phi), None)],
        Outcome::Commutator(c) => vec![CsvRow::new(name.as_str(), Some(c.residual), Some(c.tolerance), Some(c.holds))],
        Outcome::NotApplicable { .. } => vec![CsvRow::new(name.as_str(), None, None, None)],
    }
}

/// Sweep table: scenario parameters, relation, lhs, rhs, slack, satisfied
/// and, when any entry carries one, oracle_delta.
pub fn to_csv(entries: &[ScenarioReport]) -> Result<String> {
    let with_oracle = entries.iter().any(|e| e.oracle_max_delta.is_some());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![
        "index", "family", "m", "n", "l", "J", "omega", "hbar", "seed", "relation", "lhs", "rhs", "slack", "satisfied",
    ];
    if with_oracle {
        header.push("oracle_delta");
    }
    let csv_err = |e: csv::Error| Error::Config(format!("csv: {e}"));
    w.write_record(&header).map_err(csv_err)?;
    let opt = |v: Option<String>| v.unwrap_or_default();
    let num = |v: Option<f64>| v.and_then(serde_json::Number::from_f64).map(|n| n.to_string()).unwrap_or_default();
    for (index, report) in entries.iter().enumerate() {
        let p = &report.parameters;
        let fixed = [
            report.sample.map_or(index as u64, |s| s.index).to_string(),
            report.scenario.to_string(),
            opt(p.m.map(|v| v.to_string())),
            opt(p.n.map(|v| v.to_string())),
            opt(p.l.map(|v| v.to_string())),
            num(p.inertia),
            num(p.omega),
            num(Some(p.hbar.unwrap_or(DEFAULT_HBAR))),
            opt(report.sample.map(|s| s.seed.to_string())),
        ];
        for entry in &report.results {
            for row in csv_rows(entry.relation, &entry.result) {
                let mut record: Vec<String> = fixed.to_vec();
                record.push(row.relation);
                record.push(num(row.lhs));
                record.push(num(row.rhs));
                record.push(num(row.slack));
                record.push(opt(row.satisfied.map(|v| v.to_string())));
                if with_oracle {
                    record.push(num(entry.oracle_delta));
                }
                w.write_record(&record).map_err(csv_err)?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Config(format!("csv: {e}")))
}

/// Reads and checks a config file; an empty list means it is valid.
pub fn validate_config(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path)?;
    let mut cfg: ScenarioConfig = match serde_json::from_str(&text) {
        Ok(c) => c,
        Err(e) => return Ok(vec![format!("{}: {e}", path.display())]),
    };
    if let (Some(c), Some(dir)) = (&cfg.parameters.coeffs, path.parent()) {
        if c.is_relative() {
            cfg.parameters.coeffs = Some(dir.join(c));
        }
    }
    let mut diagnostics = cfg.diagnostics();
    if diagnostics.is_empty() {
        if let Err(e) = cfg.build_state() {
            diagnostics.push(e.to_string());
        }
    }
    Ok(diagnostics)
}

/// JSON Schema for configs, state documents and reports.
pub fn emit_schema() -> Value {
    let relations: Vec<&str> = RelationName::ALL.iter().map(|r| r.as_str()).collect();
    let number = json!({"type": "number"});
    let complex = json!({
        "type": "object",
        "required": ["re", "im"],
        "properties": {"re": number, "im": number}
    });
    json!({
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "angulab",
        "schema_version": SCHEMA_VERSION,
        "$defs": {
            "complex": complex,
            "parameters": {
                "type": "object",
                "additionalProperties": false,
                "properties": {
                    "m": {"type": "integer"},
                    "n": {"type": "integer", "minimum": 0},
                    "l": {"type": "integer", "minimum": 0},
                    "J": {"type": "number", "exclusiveMinimum": 0},
                    "omega": {"type": "number", "exclusiveMinimum": 0},
                    "hbar": {"type": "number", "exclusiveMinimum": 0},
                    "coeffs": {"type": "string"}
                }
            },
            "state": {
                "type": "object",
                "additionalProperties": false,
                "required": ["family", "coefficients"],
                "properties": {
                    "family": {"enum": ["periodic", "oscillator", "sphere"]},
                    "params": {
                        "type": "object",
                        "additionalProperties": false,
                        "properties": {
                            "truncation": {"type": "integer", "minimum": 1},
                            "l": {"type": "integer", "minimum": 0},
                            "J": {"type": "number"},
                            "omega": {"type": "number"},
                            "hbar": {"type": "number"}
                        }
                    },
                    "coefficients": {
                        "type": "array",
                        "items": {
                            "type": "array",
                            "prefixItems": [{"type": "integer"}, number, number],
                            "minItems": 3,
                            "maxItems": 3
                        }
                    }
                }
            },
            "config": {
                "type": "object",
                "additionalProperties": false,
                "required": ["family", "relations"],
                "properties": {
                    "family": {"enum": ["scr", "qtp", "sphere", "custom"]},
                    "parameters": {"$ref": "#/$defs/parameters"},
                    "relations": {"type": "array", "items": {"enum": relations}},
                    "observables": {"type": "array", "items": {"type": "string"}},
                    "resolution": {"type": "integer", "minimum": 16},
                    "oracle": {"type": "boolean"},
                    "format": {"enum": ["json", "csv"]}
                }
            },
            "relation_report": {
                "type": "object",
                "required": ["relation", "lhs", "rhs", "slack", "satisfied", "tolerance", "details"],
                "properties": {
                    "relation": {"type": "string"},
                    "lhs": number,
                    "rhs": number,
                    "slack": number,
                    "satisfied": {"type": "boolean"},
                    "tolerance": number,
                    "details": {
                        "type": "object",
                        "additionalProperties": {
                            "anyOf": [{"type": "boolean"}, number, {"$ref": "#/$defs/complex"}, {"type": "string"}]
                        }
                    }
                }
            },
            "outcome": {
                "type": "object",
                "required": ["kind"],
                "properties": {
                    "kind": {"enum": [
                        "relation", "boundary", "mismatch", "decomposition", "identity",
                        "sphere-mismatch", "moments", "commutator", "not-applicable"
                    ]}
                }
            },
            "report": {
                "type": "object",
                "required": ["schema_version", "scenario", "family", "parameters", "state", "results"],
                "properties": {
                    "schema_version": {"const": SCHEMA_VERSION},
                    "scenario": {"enum": ["scr", "qtp", "sphere", "custom"]},
                    "family": {"enum": ["periodic", "oscillator", "sphere"]},
                    "parameters": {"$ref": "#/$defs/parameters"},
                    "sample": {
                        "type": "object",
                        "properties": {"seed": {"type": "integer"}, "index": {"type": "integer"}}
                    },
                    "state": {"$ref": "#/$defs/state"},
                    "results": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["relation", "result"],
                            "properties": {
                                "relation": {"enum": relations},
                                "result": {"$ref": "#/$defs/outcome"},
                                "oracle": {"$ref": "#/$defs/outcome"},
                                "oracle_delta": number
                            }
                        }
                    },
                    "oracle_max_delta": number
                }
            },
            "sweep_report": {
                "type": "object",
                "required": ["schema_version", "plan", "entries"],
                "properties": {
                    "schema_version": {"const": SCHEMA_VERSION},
                    "plan": {"type": "object"},
                    "entries": {"type": "array", "items": {"$ref": "#/$defs/report"}}
                }
            }
        }
    })
}
