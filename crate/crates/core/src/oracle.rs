//! Brute-force ground truth on dense grids.
//!
//! Wavefunctions are sampled point by point, `L_z` is `−iħ` times a finite
//! difference, `φ` multiplies samples, and inner products are weighted sums.
//! Nothing here touches the spectral matrices.
//!
//! Integrands such as `φ|ψ|²` are not periodic on `[0, 2π)`, so the circle
//! rule is not the plain trapezoid rule: it is the sixth-order Gregory rule
//! on `[0, 2π]` with the missing value at `2π` extrapolated from the last six
//! samples. Derivatives use fourth-order central differences inside and
//! one-sided stencils at the two ends, with no wrap-around.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::{AngleFunction, AngleOperator};
use crate::error::{Error, Result};
use crate::operators::{Evaluator, Observable, Tolerances};
use crate::specfun::{gauss_legendre, hermite_functions, theta_lm, QuadratureRule};
use crate::states::{Family, OscillatorParams, OscillatorState, State};

pub use crate::scenario::oracle_report;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Sixth-order Gregory end weights (in units of the spacing).
const GREGORY: [f64; 5] = [95.0 / 288.0, 317.0 / 240.0, 23.0 / 30.0, 793.0 / 720.0, 157.0 / 160.0];

/// Quintic extrapolation one step past the last of six samples.
const EXTRAPOLATE: [f64; 6] = [6.0, -15.0, 20.0, -15.0, 6.0, -1.0];

const MIN_POINTS: usize = 16;

/// Where a [`Grid1D`] lives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridDomain {
    /// `[0, 2π)`; the point `2π` is excluded.
    Circle,
    /// `[−L, L]`, both ends included.
    Line { half_width: f64 },
}

/// Equispaced nodes with their quadrature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    points: Vec<f64>,
    spacing: f64,
    domain: GridDomain,
    weights: Vec<f64>,
}

fn gregory_weights(intervals: usize, h: f64) -> Vec<f64> {
    let mut w = vec![h; intervals + 1];
    for (k, g) in GREGORY.iter().enumerate() {
        w[k] = g * h;
        w[intervals - k] = g * h;
    }
    w
}

impl Grid1D {
    /// `n` nodes `2πi/n`, `i = 0..n`.
    pub fn circle(n: usize) -> Result<Self> {
        if n < MIN_POINTS {
            return Err(Error::Domain(format!("circle grid needs at least {MIN_POINTS} points, got {n}")));
        }
        let h = 2.0 * PI / n as f64;
        let full = gregory_weights(n, h);
        let mut weights = full[..n].to_vec();
        for (j, e) in EXTRAPOLATE.iter().enumerate() {
            weights[n - 1 - j] += full[n] * e;
        }
        Ok(Self {
            points: (0..n).map(|i| i as f64 * h).collect(),
            spacing: h,
            domain: GridDomain::Circle,
            weights,
        })
    }

    /// `n` nodes spanning `[−L, L]` inclusive.
    pub fn line(half_width: f64, n: usize) -> Result<Self> {
        if n < MIN_POINTS {
            return Err(Error::Domain(format!("line grid needs at least {MIN_POINTS} points, got {n}")));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::Domain(format!("half-width must be positive, got {half_width}")));
        }
        let h = 2.0 * half_width / (n - 1) as f64;
        Ok(Self {
            points: (0..n).map(|i| -half_width + i as f64 * h).collect(),
            spacing: h,
            domain: GridDomain::Line { half_width },
            weights: gregory_weights(n - 1, h),
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn domain(&self) -> GridDomain {
        self.domain
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Value at `2π − 0` extrapolated from the last six samples (circle only).
    pub fn end_value(&self, samples: &[Complex64]) -> Option<Complex64> {
        match self.domain {
            GridDomain::Circle if samples.len() == self.len() => {
                let n = samples.len();
                Some(EXTRAPOLATE.iter().enumerate().map(|(j, e)| samples[n - 1 - j] * *e).sum())
            }
            _ => None,
        }
    }
}

/// Gauss–Legendre in `cosθ` times an equispaced `φ` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D {
    /// Nodes are `cosθ`; weights absorb `sinθ dθ`.
    pub theta_rule: QuadratureRule,
    pub phi_grid: Grid1D,
}

impl Grid2D {
    pub fn new(theta_nodes: usize, phi_points: usize) -> Result<Self> {
        Ok(Self { theta_rule: gauss_legendre(theta_nodes)?, phi_grid: Grid1D::circle(phi_points)? })
    }

    /// `Σ w_θ w_φ`, which is `4π` up to rounding.
    pub fn total_weight(&self) -> f64 {
        self.theta_rule.weights.iter().sum::<f64>() * self.phi_grid.weights().iter().sum::<f64>()
    }

    pub fn len(&self) -> usize {
        self.theta_rule.len() * self.phi_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `Σ w_i conj(f_i) g_i`.
pub fn quad_inner(f: &[Complex64], g: &[Complex64], grid: &Grid1D) -> Result<Complex64> {
    for s in [f, g] {
        if s.len() != grid.len() {
            return Err(Error::LengthMismatch { expected: grid.len(), got: s.len() });
        }
    }
    Ok(f.iter().zip(g).zip(grid.weights()).map(|((a, b), w)| a.conj() * b * *w).sum())
}

fn quad_inner_2d(f: &[Complex64], g: &[Complex64], grid: &Grid2D) -> Result<Complex64> {
    let n = grid.phi_grid.len();
    for s in [f, g] {
        if s.len() != grid.len() {
            return Err(Error::LengthMismatch { expected: grid.len(), got: s.len() });
        }
    }
    let mut acc = ZERO;
    for (j, wt) in grid.theta_rule.weights.iter().enumerate() {
        let row = j * n..(j + 1) * n;
        acc += quad_inner(&f[row.clone()], &g[row], &grid.phi_grid)? * *wt;
    }
    Ok(acc)
}

/// `d/dx` of equispaced samples: fourth-order central differences inside,
/// forward stencils at the first two nodes and backward at the last two.
pub fn numeric_derivative(samples: &[Complex64], grid: &Grid1D) -> Result<Vec<Complex64>> {
    let n = samples.len();
    if n != grid.len() {
        return Err(Error::LengthMismatch { expected: grid.len(), got: n });
    }
    if n < 5 {
        return Err(Error::Domain(format!("derivative needs at least 5 samples, got {n}")));
    }
    Ok(derivative_of(samples, grid.spacing()))
}

fn derivative_of(f: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = f.len();
    let s = 1.0 / (12.0 * h);
    let mut out = vec![ZERO; n];
    out[0] = (f[0] * -25.0 + f[1] * 48.0 - f[2] * 36.0 + f[3] * 16.0 - f[4] * 3.0) * s;
    out[1] = (f[0] * -3.0 - f[1] * 10.0 + f[2] * 18.0 - f[3] * 6.0 + f[4]) * s;
    for i in 2..n - 2 {
        out[i] = (f[i - 2] - f[i - 1] * 8.0 + f[i + 1] * 8.0 - f[i + 2]) * s;
    }
    let e = n - 1;
    out[e - 1] = (f[e] * 3.0 + f[e - 1] * 10.0 - f[e - 2] * 18.0 + f[e - 3] * 6.0 - f[e - 4]) * s;
    out[e] = (f[e] * 25.0 - f[e - 1] * 48.0 + f[e - 2] * 36.0 - f[e - 3] * 16.0 + f[e - 4] * 3.0) * s;
    out
}

/// Grid sizes used by the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution {
    pub circle_points: usize,
    pub line_points: usize,
    pub theta_nodes: usize,
    pub sphere_phi_points: usize,
}

impl Default for Resolution {
    fn default() -> Self {
        Self { circle_points: 4096, line_points: 8192, theta_nodes: 128, sphere_phi_points: 1024 }
    }
}

impl Resolution {
    /// The same number of points on every one-dimensional grid.
    pub fn uniform(points: usize) -> Self {
        Self { circle_points: points, line_points: points, sphere_phi_points: points, ..Self::default() }
    }
}

/// Half-width of the line grid: ten units of `ξ` past the classical turning
/// point of the highest occupied level, and never less than `12/λ`.
pub fn line_half_width(state: &OscillatorState) -> f64 {
    let n = state.highest_level() as f64;
    ((2.0 * n + 1.0).sqrt() + 10.0).max(12.0) / state.lambda()
}

#[derive(Debug, Clone)]
enum Mesh {
    Line(Grid1D),
    Surface(Grid2D),
}

/// An [`Evaluator`] that works on grid samples only.
#[derive(Debug, Clone)]
pub struct OracleEvaluator {
    family: Family,
    hbar: f64,
    params: Option<OscillatorParams>,
    mesh: Mesh,
    psi: Vec<Complex64>,
}

fn sample_periodic(state: &crate::states::PeriodicState, grid: &Grid1D) -> Vec<Complex64> {
    let support = state.support();
    let s = 1.0 / (2.0 * PI).sqrt();
    grid.points()
        .iter()
        .map(|&phi| support.iter().map(|&(m, a)| a * Complex64::from_polar(s, m as f64 * phi)).sum())
        .collect()
}

fn sample_oscillator(state: &OscillatorState, grid: &Grid1D) -> Result<Vec<Complex64>> {
    let lam = state.lambda();
    let top = state.highest_level();
    let b = &state.amplitudes()[..=top];
    grid.points()
        .iter()
        .map(|&phi| {
            let h = hermite_functions(top, lam * phi)?;
            Ok(b.iter().zip(&h).map(|(c, hn)| c * *hn).sum::<Complex64>() * lam.sqrt())
        })
        .collect()
}

fn sample_sphere(state: &crate::states::SphereState, grid: &Grid2D) -> Result<Vec<Complex64>> {
    let l = state.l() as usize;
    let support = state.support();
    let s = 1.0 / (2.0 * PI).sqrt();
    let phases: Vec<Vec<Complex64>> = support
        .iter()
        .map(|&(m, _)| grid.phi_grid.points().iter().map(|&p| Complex64::from_polar(s, m as f64 * p)).collect())
        .collect();
    let mut out = Vec::with_capacity(grid.len());
    for &x in &grid.theta_rule.nodes {
        let theta = x.clamp(-1.0, 1.0).acos();
        let polar: Vec<Complex64> = support
            .iter()
            .map(|&(m, c)| theta_lm(l, m, theta).map(|t| c * t))
            .collect::<Result<_>>()?;
        for k in 0..grid.phi_grid.len() {
            out.push(polar.iter().zip(&phases).map(|(p, e)| p * e[k]).sum());
        }
    }
    Ok(out)
}

impl OracleEvaluator {
    pub fn new(state: &State, resolution: &Resolution) -> Result<Self> {
        let mesh = match state {
            State::Periodic(_) => Mesh::Line(Grid1D::circle(resolution.circle_points)?),
            State::Oscillator(s) => Mesh::Line(Grid1D::line(line_half_width(s), resolution.line_points)?),
            State::Sphere(_) => Mesh::Surface(Grid2D::new(resolution.theta_nodes, resolution.sphere_phi_points)?),
        };
        Self::on_mesh(state, mesh)
    }

    /// Samples a circle or line state on a caller-chosen grid.
    pub fn with_grid(state: &State, grid: Grid1D) -> Result<Self> {
        let expected = match state {
            State::Periodic(_) => matches!(grid.domain(), GridDomain::Circle),
            State::Oscillator(_) => matches!(grid.domain(), GridDomain::Line { .. }),
            State::Sphere(_) => false,
        };
        if !expected {
            return Err(Error::Precondition(format!("grid does not match the {} family", state.family())));
        }
        Self::on_mesh(state, Mesh::Line(grid))
    }

    fn on_mesh(state: &State, mesh: Mesh) -> Result<Self> {
        let (psi, params) = match (state, &mesh) {
            (State::Periodic(s), Mesh::Line(g)) => (sample_periodic(s, g), None),
            (State::Oscillator(s), Mesh::Line(g)) => (sample_oscillator(s, g)?, Some(s.params())),
            (State::Sphere(s), Mesh::Surface(g)) => (sample_sphere(s, g)?, None),
            _ => unreachable!("mesh is chosen from the state family"),
        };
        if psi.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite("oracle samples".into()));
        }
        Ok(Self { family: state.family(), hbar: state.hbar(), params, mesh, psi })
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.psi
    }

    fn phi_points(&self) -> &[f64] {
        match &self.mesh {
            Mesh::Line(g) => g.points(),
            Mesh::Surface(g) => g.phi_grid.points(),
        }
    }

    fn phi_grid(&self) -> &Grid1D {
        match &self.mesh {
            Mesh::Line(g) => g,
            Mesh::Surface(g) => &g.phi_grid,
        }
    }

    fn inner(&self, f: &[Complex64], g: &[Complex64]) -> Result<Complex64> {
        match &self.mesh {
            Mesh::Line(grid) => quad_inner(f, g, grid),
            Mesh::Surface(grid) => quad_inner_2d(f, g, grid),
        }
    }

    /// `−iħ d/dφ`, row by row on the sphere.
    fn lz(&self, v: &[Complex64]) -> Vec<Complex64> {
        let grid = self.phi_grid();
        let factor = Complex64::new(0.0, -self.hbar);
        v.chunks(grid.len())
            .flat_map(|row| derivative_of(row, grid.spacing()).into_iter().map(move |d| d * factor))
            .collect()
    }

    fn multiply(&self, f: &AngleFunction, v: &[Complex64]) -> Vec<Complex64> {
        let values: Vec<Complex64> = self.phi_points().iter().map(|&p| f.eval(p)).collect();
        v.chunks(values.len())
            .flat_map(|row| row.iter().zip(&values).map(|(a, b)| a * b).collect::<Vec<_>>())
            .collect()
    }

    fn apply(&self, op: &AngleOperator, v: &[Complex64]) -> Vec<Complex64> {
        let mut acc = vec![ZERO; v.len()];
        for (h, d) in op.terms() {
            let mut w = v.to_vec();
            for _ in 0..*d {
                w = self.lz(&w);
            }
            for (a, b) in acc.iter_mut().zip(self.multiply(h, &w)) {
                *a += b;
            }
        }
        acc
    }

    fn op(&self, a: &Observable) -> Result<AngleOperator> {
        a.operator(self.family, self.params.as_ref())
    }

    /// `max |L_z(φψ) − φ(L_zψ) + iħψ|` over nodes at least two steps from
    /// either end of a one-dimensional grid.
    pub fn commutator_residual(&self) -> Result<f64> {
        if let Mesh::Surface(_) = self.mesh {
            return Err(Error::NotApplicable { observable: "[Lz, Phi]".into(), family: self.family.to_string() });
        }
        let phi = AngleFunction::phi();
        let lphi = self.lz(&self.multiply(&phi, &self.psi));
        let philz = self.multiply(&phi, &self.lz(&self.psi));
        let ih = Complex64::new(0.0, self.hbar);
        let n = self.psi.len();
        Ok((2..n - 2)
            .map(|i| (lphi[i] - philz[i] + ih * self.psi[i]).norm())
            .fold(0.0, f64::max))
    }
}

impl Evaluator for OracleEvaluator {
    fn family(&self) -> Family {
        self.family
    }

    fn hbar(&self) -> f64 {
        self.hbar
    }

    fn tolerances(&self) -> Tolerances {
        Tolerances::ORACLE
    }

    fn norm_sqr(&self) -> f64 {
        self.inner(&self.psi, &self.psi).map(|z| z.re).unwrap_or(f64::NAN)
    }

    fn expectation(&self, a: &Observable) -> Result<Complex64> {
        let av = self.apply(&self.op(a)?, &self.psi);
        self.inner(&self.psi, &av)
    }

    fn shifted_overlap(&self, a: &Observable, alpha: f64, b: &Observable, beta: f64) -> Result<Complex64> {
        let x = self.apply(&self.op(a)?.shifted(alpha), &self.psi);
        let y = self.apply(&self.op(b)?.shifted(beta), &self.psi);
        self.inner(&x, &y)
    }

    fn product_expectation(&self, a: &Observable, b: &Observable) -> Result<Complex64> {
        let bv = self.apply(&self.op(b)?, &self.psi);
        let abv = self.apply(&self.op(a)?, &bv);
        self.inner(&self.psi, &abv)
    }

    fn boundary_value(&self) -> Option<Complex64> {
        match &self.mesh {
            Mesh::Line(g) => g.end_value(&self.psi),
            Mesh::Surface(_) => None,
        }
    }
}
