use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

const NEWTON_TOL: f64 = 1e-14;
const NEWTON_MAX_ITER: usize = 100;

/// Integration domain of a [`QuadratureRule`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// `[0, 2π)` with periodic integrands.
    PeriodicCircle,
    FiniteInterval { a: f64, b: f64 },
    /// `(-∞, ∞)` with the weight `e^{-x²}` absorbed into the weights.
    RealLine,
}

impl Domain {
    /// Lebesgue measure of the domain, `None` for the real line.
    pub fn measure(&self) -> Option<f64> {
        match *self {
            Domain::PeriodicCircle => Some(2.0 * PI),
            Domain::FiniteInterval { a, b } => Some(b - a),
            Domain::RealLine => None,
        }
    }
}

/// Nodes and weights approximating `∫ f` over a [`Domain`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub domain: Domain,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ wᵢ f(xᵢ)`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Affinely maps a rule on `[-1, 1]` onto `[a, b]`.
    pub fn on_interval(&self, a: f64, b: f64) -> Result<Self> {
        match self.domain {
            Domain::FiniteInterval { a: a0, b: b0 } => {
                let scale = (b - a) / (b0 - a0);
                Ok(Self {
                    nodes: self.nodes.iter().map(|&x| a + (x - a0) * scale).collect(),
                    weights: self.weights.iter().map(|&w| w * scale).collect(),
                    domain: Domain::FiniteInterval { a, b },
                })
            }
            _ => Err(Error::Domain(
                "only finite-interval rules can be remapped".into(),
            )),
        }
    }
}

fn check_order(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "quadrature order must be at least 2, got {n}"
        )));
    }
    Ok(())
}

/// Gauss–Legendre rule on `[-1, 1]`; nodes by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    check_order(n)?;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..NEWTON_MAX_ITER {
            let (p, p_prev) = legendre_pair(n, z);
            let dp = nf * (z * p - p_prev) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < NEWTON_TOL {
                break;
            }
        }
        let (p, p_prev) = legendre_pair(n, z);
        let dp = nf * (z * p - p_prev) / (z * z - 1.0);
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        domain: Domain::FiniteInterval { a: -1.0, b: 1.0 },
    })
}

/// `(P_n(x), P_{n-1}(x))` by the Bonnet recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p = 1.0;
    let mut p_prev = 0.0;
    for j in 0..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0) * x * p - jf * p_prev) / (jf + 1.0);
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

/// Gauss–Hermite rule for `∫ e^{-x²} f(x) dx` over the real line.
///
/// Golub–Welsch: the nodes are the eigenvalues of the symmetric Jacobi
/// matrix with off-diagonal `√(k/2)`, and each weight is `√π` times the
/// squared first component of the matching unit eigenvector.
pub fn gauss_hermite(n: usize) -> Result<QuadratureRule> {
    check_order(n)?;
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| (eig.eigenvalues[k], PI.sqrt() * eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    if pairs.iter().any(|(x, w)| !x.is_finite() || !w.is_finite()) {
        return Err(Error::Range(format!("Gauss-Hermite order {n} produced non-finite nodes")));
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    // the rule is symmetric; enforce it exactly
    for k in 0..n / 2 {
        let x = 0.5 * (pairs[n - 1 - k].0 - pairs[k].0);
        let w = 0.5 * (pairs[n - 1 - k].1 + pairs[k].1);
        pairs[k] = (-x, w);
        pairs[n - 1 - k] = (x, w);
    }
    if n % 2 == 1 {
        pairs[n / 2].0 = 0.0;
    }
    Ok(QuadratureRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
        domain: Domain::RealLine,
    })
}

/// `n` equispaced nodes on `[0, 2π)`, each with weight `2π/n`.
pub fn periodic_trapezoid(n: usize) -> Result<QuadratureRule> {
    check_order(n)?;
    let h = 2.0 * PI / n as f64;
    Ok(QuadratureRule {
        nodes: (0..n).map(|i| i as f64 * h).collect(),
        weights: vec![h; n],
        domain: Domain::PeriodicCircle,
    })
}
