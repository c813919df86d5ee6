//! Spectral decomposition of the Laplacian and the propagators built from it.
//!
//! Every matrix function here goes through `L = Q Λ Qᵀ`, so one decomposition
//! serves the classical kernel `e^{Lt}` and the quantum propagator `e^{iLt}`
//! at any number of time points.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::Laplacian;

const MAX_SWEEPS: usize = 10_000;

/// Eigenpairs of a Laplacian, sorted by ascending eigenvalue magnitude.
///
/// Column `s` of `eigenvectors` is the eigenvector for `eigenvalues[s]`.
/// Degenerate eigenvalues keep the solver's output order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
}

pub fn eigendecompose(lap: &Laplacian) -> Result<SpectralDecomposition> {
    let n = lap.dim();
    let eig = SymmetricEigen::try_new(lap.matrix().clone(), f64::EPSILON, MAX_SWEEPS)
        .ok_or(Error::EigenNonConvergence)?;
    if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenNonConvergence);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .abs()
            .partial_cmp(&eig.eigenvalues[b].abs())
            .expect("finite eigenvalues")
    });
    let eigenvalues = order.iter().map(|&s| eig.eigenvalues[s]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::NegativeTime(t))
    }
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    /// `|λ_1|`, or `0` for a single-node graph.
    pub fn fiedler_value(&self) -> f64 {
        self.eigenvalues.get(1).map_or(0.0, |v| v.abs())
    }

    pub fn check_node(&self, j: usize) -> Result<()> {
        if j < self.dim() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node: j,
                n: self.dim(),
            })
        }
    }

    /// `Q f(Λ) Qᵀ` for a real spectral function.
    fn real_function(&self, weights: &[f64]) -> DMatrix<f64> {
        let q = &self.eigenvectors;
        let n = self.dim();
        DMatrix::from_fn(n, n, |r, c| {
            (0..n).map(|s| q[(r, s)] * weights[s] * q[(c, s)]).sum()
        })
    }

    fn complex_function(&self, weights: &[Complex64]) -> DMatrix<Complex64> {
        let q = &self.eigenvectors;
        let n = self.dim();
        DMatrix::from_fn(n, n, |r, c| {
            (0..n).map(|s| weights[s] * (q[(r, s)] * q[(c, s)])).sum()
        })
    }

    /// Classical heat kernel `e^{Lt}`; doubly stochastic for `t >= 0`.
    pub fn heat_propagator(&self, t: f64) -> Result<DMatrix<f64>> {
        check_time(t)?;
        let w: Vec<f64> = self.eigenvalues.iter().map(|l| (l * t).exp()).collect();
        Ok(self.real_function(&w))
    }

    /// Quantum propagator `e^{iLt}`; unitary for every real `t`.
    pub fn unitary_propagator(&self, t: f64) -> Result<DMatrix<Complex64>> {
        if !t.is_finite() {
            return Err(Error::NonFiniteTime(t));
        }
        let w: Vec<Complex64> = self
            .eigenvalues
            .iter()
            .map(|l| Complex64::from_polar(1.0, l * t))
            .collect();
        Ok(self.complex_function(&w))
    }

    /// Column `j` of `e^{Lt}`, i.e. the occupation probabilities of a classical
    /// walker started on `j`. Exact indicator at `t = 0`.
    pub fn heat_column(&self, j: usize, t: f64) -> Result<Vec<f64>> {
        self.check_node(j)?;
        check_time(t)?;
        let n = self.dim();
        if t == 0.0 {
            return Ok((0..n).map(|k| if k == j { 1.0 } else { 0.0 }).collect());
        }
        let q = &self.eigenvectors;
        let w: Vec<f64> = (0..n)
            .map(|s| (self.eigenvalues[s] * t).exp() * q[(j, s)])
            .collect();
        Ok((0..n)
            .map(|k| (0..n).map(|s| q[(k, s)] * w[s]).sum())
            .collect())
    }

    /// Column `j` of `e^{iLt}`.
    pub fn unitary_column(&self, j: usize, t: f64) -> Result<Vec<Complex64>> {
        self.check_node(j)?;
        if !t.is_finite() {
            return Err(Error::NonFiniteTime(t));
        }
        let n = self.dim();
        if t == 0.0 {
            return Ok((0..n)
                .map(|k| Complex64::new(if k == j { 1.0 } else { 0.0 }, 0.0))
                .collect());
        }
        let q = &self.eigenvectors;
        let w: Vec<Complex64> = (0..n)
            .map(|s| Complex64::from_polar(q[(j, s)], self.eigenvalues[s] * t))
            .collect();
        Ok((0..n)
            .map(|k| (0..n).map(|s| w[s] * q[(k, s)]).sum())
            .collect())
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(DMatrix<Complex64>);

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-10;

impl DensityMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch(m.nrows(), m.ncols()));
        }
        if m.nrows() == 0 {
            return Err(Error::InvalidDensityMatrix("empty matrix".into()));
        }
        let skew = (&m - m.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if skew > HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {skew:e})"
            )));
        }
        let trace = m.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {trace} != 1")));
        }
        let rho = Self(m);
        let lowest = rho.spectrum()?.0.into_iter().fold(f64::INFINITY, f64::min);
        if lowest < -PSD_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {lowest:e}"
            )));
        }
        Ok(rho)
    }

    /// Diagonal (classical) state with the given site probabilities.
    pub fn from_diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            probs.len(),
            probs.iter().map(|&p| Complex64::new(p, 0.0)),
        )))
    }

    /// Projector onto a unit vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let n = psi.len();
        Self::new(DMatrix::from_fn(n, n, |r, c| psi[r] * psi[c].conj()))
    }

    /// `Σ_m w_m |ψ_m⟩⟨ψ_m|`.
    pub fn mixture(weights: &[f64], states: &[Vec<Complex64>]) -> Result<Self> {
        let n = states.first().map_or(0, Vec::len);
        let mut m = DMatrix::zeros(n, n);
        for (&w, psi) in weights.iter().zip(states) {
            if psi.len() != n {
                return Err(Error::DimensionMismatch(psi.len(), n));
            }
            for c in 0..n {
                for r in 0..n {
                    m[(r, c)] += psi[r] * psi[c].conj() * w;
                }
            }
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    fn spectrum(&self) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
        let eig = SymmetricEigen::try_new(self.0.clone(), f64::EPSILON, MAX_SWEEPS)
            .ok_or(Error::EigenNonConvergence)?;
        Ok((eig.eigenvalues.iter().copied().collect(), eig.eigenvectors))
    }

    /// Principal square root. Eigenvalues below the numerical-rank cutoff
    /// (`16·n·ε·λ_max`, which also absorbs roundoff negatives) are set to zero.
    fn sqrt(&self) -> Result<DMatrix<Complex64>> {
        let (values, vectors) = self.spectrum()?;
        let n = self.dim();
        let top = values.iter().copied().fold(0.0, f64::max);
        let cutoff = 16.0 * n as f64 * f64::EPSILON * top.max(1.0);
        let roots: Vec<f64> = values
            .iter()
            .map(|&v| if v > cutoff { v.sqrt() } else { 0.0 })
            .collect();
        Ok(DMatrix::from_fn(n, n, |r, c| {
            (0..n)
                .map(|s| vectors[(r, s)] * vectors[(c, s)].conj() * roots[s])
                .sum()
        }))
    }
}

/// Uhlmann fidelity `(Tr √(√ρ₁ ρ₂ √ρ₁))²`.
///
/// Evaluated as the squared trace norm of `√ρ₁ √ρ₂`, whose singular values are
/// the square roots of the eigenvalues of `√ρ₁ ρ₂ √ρ₁`. Going through the SVD
/// keeps rank-deficient inputs (pure states) accurate to machine precision
/// instead of the `√ε` error of square-rooting noisy zero eigenvalues.
pub fn uhlmann_fidelity(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch(rho1.dim(), rho2.dim()));
    }
    let product = rho1.sqrt()? * rho2.sqrt()?;
    let trace_norm: f64 = product.singular_values().iter().sum();
    Ok((trace_norm * trace_norm).clamp(0.0, 1.0))
}
