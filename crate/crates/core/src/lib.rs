//! Quantum-classical dynamical distance between continuous-time random walks
//! and continuous-time quantum walks on finite undirected graphs.
//!
//! A classical walker evolves its site distribution with the heat kernel
//! `e^{Lt}`; a quantum walker evolves amplitudes with `e^{iLt}`. The distance
//! `D(t)` is one minus the smallest Uhlmann fidelity between the two evolved
//! states over all classical initial states, attained on a localized start.
//!
//! ```
//! use qcwalk::{generate, GraphKind, WalkModel, qc_distance};
//!
//! let model = WalkModel::new(generate(GraphKind::Complete, 5, None, 0)?)?;
//! let (d, _node) = qc_distance(&model, 10.0)?;
//! assert!((d - 0.8).abs() < 1e-3);
//! # Ok::<(), qcwalk::Error>(())
//! ```

pub mod distance;
pub mod error;
pub mod exec;
pub mod graph;
pub mod spectral;
pub mod walks;

pub use distance::{
    average_distance, conditional_distance, delta, delta_at, distance_curve, distance_curve_with,
    gamma_ratio, long_asymptote, qc_distance, short_asymptote, verify_localized_optimality,
    Asymptote, AsymptoticsReport, DistanceCurve, OptimalityCheck, OptimalityReport, Sweep,
    WalkModel,
};
pub use error::{Error, Result};
pub use exec::Backend;
pub use graph::{generate, Graph, GraphKind, Laplacian};
pub use spectral::{eigendecompose, uhlmann_fidelity, DensityMatrix, SpectralDecomposition};
pub use walks::{
    classical_distribution, classical_fidelity, coherence, localized_fidelity, quantum_amplitudes,
    AmplitudeVector, LocalizedWalk, ProbabilityVector,
};
