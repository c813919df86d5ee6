//! Single-walker quantities for a walker localized on one node at `t = 0`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::SpectralDecomposition;

/// Roundoff allowance for heat-kernel entries that land just below zero.
const NEGATIVE_PROBABILITY_TOL: f64 = 1e-10;

/// Site occupation probabilities of the classical walker.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    /// Clamps roundoff negatives (down to `-1e-10`) to zero; anything more
    /// negative is an error.
    fn from_kernel_column(mut values: Vec<f64>) -> Result<Self> {
        for (site, v) in values.iter_mut().enumerate() {
            if *v < 0.0 {
                if *v < -NEGATIVE_PROBABILITY_TOL {
                    return Err(Error::NegativeProbability { site, value: *v });
                }
                *v = 0.0;
            }
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

/// Site amplitudes of the quantum walker.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector(Vec<Complex64>);

impl AmplitudeVector {
    pub fn values(&self) -> &[Complex64] {
        &self.0
    }

    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().map(|a| a.norm_sqr())
    }
}

pub fn classical_distribution(
    spec: &SpectralDecomposition,
    j: usize,
    t: f64,
) -> Result<ProbabilityVector> {
    ProbabilityVector::from_kernel_column(spec.heat_column(j, t)?)
}

pub fn quantum_amplitudes(
    spec: &SpectralDecomposition,
    j: usize,
    t: f64,
) -> Result<AmplitudeVector> {
    Ok(AmplitudeVector(spec.unitary_column(j, t)?))
}

/// Classical and quantum walkers evolved from the same localized start.
///
/// Computing both columns once lets the fidelity, coherence and classical
/// fidelity share the propagator work.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizedWalk {
    pub classical: ProbabilityVector,
    pub quantum: AmplitudeVector,
}

impl LocalizedWalk {
    pub fn new(spec: &SpectralDecomposition, j: usize, t: f64) -> Result<Self> {
        Ok(Self {
            classical: classical_distribution(spec, j, t)?,
            quantum: quantum_amplitudes(spec, j, t)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.classical.0.len()
    }

    /// `F_j = Σ_k p_kj |α_kj|²`, clamped into `[0, 1]`.
    pub fn fidelity(&self) -> f64 {
        self.classical
            .0
            .iter()
            .zip(self.quantum.probabilities())
            .map(|(p, a2)| p * a2)
            .sum::<f64>()
            .clamp(0.0, 1.0)
    }

    /// l1-norm coherence of the evolved pure state, `(Σ_k |α_kj|)² - 1`.
    pub fn coherence(&self) -> f64 {
        let l1: f64 = self.quantum.0.iter().map(|a| a.norm()).sum();
        (l1 * l1 - 1.0).max(0.0)
    }

    /// Bhattacharyya coefficient between `p_·j` and `|α_·j|²`.
    pub fn classical_fidelity(&self) -> f64 {
        self.classical
            .0
            .iter()
            .zip(self.quantum.probabilities())
            .map(|(p, a2)| (p * a2).sqrt())
            .sum::<f64>()
            .clamp(0.0, 1.0)
    }
}

pub fn localized_fidelity(spec: &SpectralDecomposition, j: usize, t: f64) -> Result<f64> {
    Ok(LocalizedWalk::new(spec, j, t)?.fidelity())
}

/// Coherence of the quantum walker. Defined for any real `t`.
pub fn coherence(spec: &SpectralDecomposition, j: usize, t: f64) -> Result<f64> {
    let amps = quantum_amplitudes(spec, j, t)?;
    let l1: f64 = amps.0.iter().map(|a| a.norm()).sum();
    Ok((l1 * l1 - 1.0).max(0.0))
}

pub fn classical_fidelity(spec: &SpectralDecomposition, j: usize, t: f64) -> Result<f64> {
    Ok(LocalizedWalk::new(spec, j, t)?.classical_fidelity())
}
