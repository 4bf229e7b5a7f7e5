//! Exact algebra of angle functions and first-order differential operators
//! on `[0, 2π)`.
//!
//! An [`AngleFunction`] is a finite sum `Σ c·φ^p·e^{iqφ}`. Such functions are
//! closed under products and derivatives, and their Fourier moments
//! `(1/2π)∫₀^{2π} f(φ) e^{ikφ} dφ` have closed forms. An [`AngleOperator`]
//! is `Σ_d h_d(φ) L_z^d` with `L_z = −iħ d/dφ`. Composition follows the
//! pointwise rule: derivatives act on `(0, 2π)` with one-sided limits at the
//! ends and never wrap around, so `L_z(φψ) = −iħψ + φ L_zψ` holds even
//! though `φψ` is not periodic.
//!
//! Given a pair density `W_{mr}` (for a Fourier state `W_{mr} = a_m* a_r`),
//! [`PairDensity::form`] evaluates `(Pψ, Qψ)` exactly, with no basis
//! truncation.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// One term `coeff · φ^power · e^{i·freq·φ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub power: u32,
    pub freq: i32,
    pub coeff: Complex64,
}

/// A finite sum of [`Term`]s, kept merged and sorted by `(power, freq)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AngleFunction {
    terms: Vec<Term>,
}

impl AngleFunction {
    pub fn from_terms(terms: impl IntoIterator<Item = Term>) -> Self {
        let mut acc: BTreeMap<(u32, i32), Complex64> = BTreeMap::new();
        for t in terms {
            *acc.entry((t.power, t.freq)).or_insert(ZERO) += t.coeff;
        }
        Self {
            terms: acc
                .into_iter()
                .filter(|(_, c)| *c != ZERO)
                .map(|((power, freq), coeff)| Term { power, freq, coeff })
                .collect(),
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_terms([Term { power: 0, freq: 0, coeff: c }])
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    /// `φ^p`.
    pub fn phi_pow(p: u32) -> Self {
        Self::from_terms([Term { power: p, freq: 0, coeff: Complex64::new(1.0, 0.0) }])
    }

    pub fn phi() -> Self {
        Self::phi_pow(1)
    }

    /// `e^{iqφ}`.
    pub fn exp_i(q: i32) -> Self {
        Self::from_terms([Term { power: 0, freq: q, coeff: Complex64::new(1.0, 0.0) }])
    }

    pub fn sin() -> Self {
        let h = Complex64::new(0.0, -0.5);
        Self::from_terms([
            Term { power: 0, freq: 1, coeff: h },
            Term { power: 0, freq: -1, coeff: -h },
        ])
    }

    pub fn cos() -> Self {
        let h = Complex64::new(0.5, 0.0);
        Self::from_terms([
            Term { power: 0, freq: 1, coeff: h },
            Term { power: 0, freq: -1, coeff: h },
        ])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(&other.terms).copied())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_terms(self.terms.iter().map(|t| Term { coeff: t.coeff * c, ..*t }))
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().flat_map(|a| {
            other.terms.iter().map(move |b| Term {
                power: a.power + b.power,
                freq: a.freq + b.freq,
                coeff: a.coeff * b.coeff,
            })
        }))
    }

    /// Pointwise complex conjugate.
    pub fn conj(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|t| Term {
            power: t.power,
            freq: -t.freq,
            coeff: t.coeff.conj(),
        }))
    }

    pub fn derivative(&self) -> Self {
        Self::from_terms(self.terms.iter().flat_map(|t| {
            let mut out = Vec::with_capacity(2);
            if t.power > 0 {
                out.push(Term { power: t.power - 1, freq: t.freq, coeff: t.coeff * t.power as f64 });
            }
            if t.freq != 0 {
                out.push(Term { power: t.power, freq: t.freq, coeff: t.coeff * I * t.freq as f64 });
            }
            out
        }))
    }

    /// True when `f = f*` up to `1e-14` per coefficient.
    pub fn is_real(&self) -> bool {
        self.add(&self.conj().scale(Complex64::new(-1.0, 0.0)))
            .terms
            .iter()
            .all(|t| t.coeff.norm() < 1e-14)
    }

    pub fn max_power(&self) -> u32 {
        self.terms.iter().map(|t| t.power).max().unwrap_or(0)
    }

    pub fn eval(&self, phi: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|t| t.coeff * phi.powi(t.power as i32) * Complex64::from_polar(1.0, t.freq as f64 * phi))
            .sum()
    }

    /// `(1/2π) ∫₀^{2π} f(φ) e^{ikφ} dφ`.
    pub fn fourier_moment(&self, k: i32) -> Complex64 {
        self.terms
            .iter()
            .map(|t| t.coeff * phi_power_moment(t.power, k + t.freq))
            .sum()
    }
}

/// `I_p(k) = (1/2π) ∫₀^{2π} φ^p e^{ikφ} dφ` in closed form.
///
/// `I_p(0) = (2π)^p/(p+1)`; for `k ≠ 0`, integration by parts gives
/// `I_p(k) = ((2π)^{p−1} − p·I_{p−1}(k)) / (ik)` with `I_0(k) = 0`.
pub fn phi_power_moment(p: u32, k: i32) -> Complex64 {
    let two_pi = 2.0 * PI;
    if k == 0 {
        return Complex64::new(two_pi.powi(p as i32) / (p as f64 + 1.0), 0.0);
    }
    let ik = I * k as f64;
    let mut acc = ZERO;
    for j in 1..=p {
        acc = (Complex64::new(two_pi.powi(j as i32 - 1), 0.0) - acc * j as f64) / ik;
    }
    acc
}

/// `Σ_d h_d(φ) L_z^d`, with `L_z = −iħ d/dφ` acting pointwise.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AngleOperator {
    /// `(h_d, d)` pairs; at most one entry per power `d`.
    terms: Vec<(AngleFunction, u32)>,
}

impl AngleOperator {
    pub fn from_terms(pairs: impl IntoIterator<Item = (AngleFunction, u32)>) -> Self {
        let mut acc: BTreeMap<u32, AngleFunction> = BTreeMap::new();
        for (h, d) in pairs {
            let slot = acc.entry(d).or_default();
            *slot = slot.add(&h);
        }
        Self {
            terms: acc.into_iter().filter(|(_, h)| !h.is_zero()).map(|(d, h)| (h, d)).collect(),
        }
    }

    pub fn terms(&self) -> &[(AngleFunction, u32)] {
        &self.terms
    }

    pub fn identity() -> Self {
        Self::multiplication(AngleFunction::one())
    }

    pub fn multiplication(f: AngleFunction) -> Self {
        Self::from_terms([(f, 0)])
    }

    pub fn lz() -> Self {
        Self::from_terms([(AngleFunction::one(), 1)])
    }

    /// `self − μ`.
    pub fn shifted(&self, mu: f64) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .cloned()
                .chain([(AngleFunction::constant(Complex64::new(-mu, 0.0)), 0)]),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_terms(self.terms.iter().map(|(h, d)| (h.scale(c), *d)))
    }

    /// `self ∘ rhs` using `L_z^d (g·) = Σ_j C(d,j) (−iħ)^j g^{(j)} L_z^{d−j}`.
    pub fn compose(&self, rhs: &Self, hbar: f64) -> Self {
        let minus_i_hbar = Complex64::new(0.0, -hbar);
        let mut out = Vec::new();
        for (h, d) in &self.terms {
            for (g, e) in &rhs.terms {
                let mut deriv = g.clone();
                let mut factor = Complex64::new(1.0, 0.0);
                for j in 0..=*d {
                    let binom = binomial(*d, j);
                    out.push((h.mul(&deriv).scale(factor * binom), d - j + e));
                    deriv = deriv.derivative();
                    factor *= minus_i_hbar;
                }
            }
        }
        Self::from_terms(out)
    }

    pub fn max_lz_power(&self) -> u32 {
        self.terms.iter().map(|(_, d)| *d).max().unwrap_or(0)
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Sparse pair density `W_{mr}` over Fourier indices.
///
/// A state `Σ a_m e_m` has `W_{mr} = a_m* a_r`; a fixed-`l` sphere state
/// additionally carries the polar overlaps, `W_{mr} = c_m* c_r O_{mr}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairDensity {
    entries: Vec<(i32, i32, Complex64)>,
}

impl PairDensity {
    pub fn new(entries: Vec<(i32, i32, Complex64)>) -> Self {
        Self { entries }
    }

    /// Pure Fourier state `Σ a_m e_m`.
    pub fn from_amplitudes(amps: &[(i32, Complex64)]) -> Self {
        let mut entries = Vec::with_capacity(amps.len() * amps.len());
        for &(m, am) in amps {
            for &(r, ar) in amps {
                entries.push((m, r, am.conj() * ar));
            }
        }
        Self { entries }
    }

    pub fn entries(&self) -> &[(i32, i32, Complex64)] {
        &self.entries
    }

    /// `(ψ, ψ) = Σ_m W_mm`.
    pub fn trace(&self) -> Complex64 {
        self.entries.iter().filter(|(m, r, _)| m == r).map(|e| e.2).sum()
    }

    /// `(Pψ, Qψ) = Σ_{m,r} W_{mr} Σ (ħm)^d (ħr)^e (1/2π)∫ h_d* g_e e^{i(r−m)φ} dφ`.
    pub fn form(&self, p: &AngleOperator, q: &AngleOperator, hbar: f64) -> Complex64 {
        let mut total = ZERO;
        for (h, d) in p.terms() {
            for (g, e) in q.terms() {
                let prod = h.conj().mul(g);
                let mut cache: BTreeMap<i32, Complex64> = BTreeMap::new();
                for &(m, r, w) in &self.entries {
                    let k = r - m;
                    let moment = *cache.entry(k).or_insert_with(|| prod.fourier_moment(k));
                    let lm = (hbar * m as f64).powi(*d as i32);
                    let lr = (hbar * r as f64).powi(*e as i32);
                    total += w * moment * (lm * lr);
                }
            }
        }
        total
    }

    /// `(ψ, Pψ)`.
    pub fn expectation(&self, p: &AngleOperator, hbar: f64) -> Complex64 {
        self.form(&AngleOperator::identity(), p, hbar)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite Simpson on [0, 2π] with many panels, used as an independent check.
    fn simpson_moment(f: &AngleFunction, k: i32) -> Complex64 {
        let n = 20_000;
        let h = 2.0 * PI / n as f64;
        let mut acc = ZERO;
        for i in 0..=n {
            let x = i as f64 * h;
            let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += f.eval(x) * Complex64::from_polar(1.0, k as f64 * x) * w;
        }
        acc * h / 3.0 / (2.0 * PI)
    }

    #[test]
    fn moments_match_quadrature() {
        for p in 0..=4 {
            for k in -3..=3 {
                let got = phi_power_moment(p, k);
                let want = simpson_moment(&AngleFunction::phi_pow(p), k);
                assert!((got - want).norm() < 1e-9 * (1.0 + want.norm()), "p={p} k={k}");
            }
        }
    }

    #[test]
    fn phi_matrix_closed_forms() {
        assert!((phi_power_moment(1, 0) - PI).norm() < 1e-15);
        // (e_0, φ e_1) = I_1(1) = −i
        assert!((phi_power_moment(1, 1) - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((phi_power_moment(2, 0).re - 4.0 * PI * PI / 3.0).abs() < 1e-13);
        for k in [-4, -1, 2, 5] {
            let kf = k as f64;
            let want = Complex64::new(2.0 / (kf * kf), -2.0 * PI / kf);
            assert!((phi_power_moment(2, k) - want).norm() < 1e-13);
        }
    }

    #[test]
    fn trig_identities() {
        let s = AngleFunction::sin();
        let c = AngleFunction::cos();
        let one = s.mul(&s).add(&c.mul(&c));
        assert_eq!(one, AngleFunction::one());
        assert_eq!(s.derivative(), c);
        assert!(s.is_real() && c.is_real() && AngleFunction::phi().is_real());
        assert!(!AngleFunction::exp_i(1).is_real());
        assert!((s.eval(0.3) - 0.3f64.sin()).norm() < 1e-15);
    }

    #[test]
    fn lz_phi_commutator_is_constant() {
        let hbar = 1.7;
        let lz = AngleOperator::lz();
        let phi = AngleOperator::multiplication(AngleFunction::phi());
        let comm = lz.compose(&phi, hbar).add(&phi.compose(&lz, hbar).scale(Complex64::new(-1.0, 0.0)));
        assert_eq!(comm, AngleOperator::multiplication(AngleFunction::constant(Complex64::new(0.0, -hbar))));
    }

    #[test]
    fn lz_squared_on_function() {
        // L²(f·) = −ħ² f'' − 2iħ f' L + f L²
        let hbar = 0.8;
        let f = AngleFunction::phi_pow(2);
        let lz = AngleOperator::lz();
        let l2 = lz.compose(&lz, hbar);
        let got = l2.compose(&AngleOperator::multiplication(f.clone()), hbar);
        let want = AngleOperator::from_terms([
            (f.derivative().derivative().scale(Complex64::new(-hbar * hbar, 0.0)), 0),
            (f.derivative().scale(Complex64::new(0.0, -2.0 * hbar)), 1),
            (f, 2),
        ]);
        assert_eq!(got, want);
    }

    #[test]
    fn eigenstate_mismatch_is_i_hbar() {
        let hbar = 3.7;
        for m in -4..=4 {
            let w = PairDensity::from_amplitudes(&[(m, Complex64::new(1.0, 0.0))]);
            let lz = AngleOperator::lz();
            let phi = AngleOperator::multiplication(AngleFunction::phi());
            let lhs = w.form(&lz, &phi, hbar);
            let rhs = w.expectation(&lz.compose(&phi, hbar), hbar);
            assert!((lhs - rhs - Complex64::new(0.0, hbar)).norm() < 1e-12);
        }
    }
}
