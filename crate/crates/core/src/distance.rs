//! The quantum-classical dynamical distance and its diagnostics.
//!
//! For a localized start on node `j` the conditional distance is
//! `D(t|j) = 1 - F_j(t)`. The graph-level distance maximizes over nodes,
//! which is the same as minimizing the Uhlmann fidelity over every diagonal
//! initial state: the optimum always sits on a localized state. The
//! [`OptimalityCheck`] sampler tests that claim against full mixed-state
//! fidelities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};
use crate::exec::Backend;
use crate::graph::Graph;
use crate::spectral::{eigendecompose, uhlmann_fidelity, DensityMatrix, SpectralDecomposition};
use crate::walks::LocalizedWalk;

/// Multiples of the relaxation time `1/|λ_1|` after which the classical
/// walker is treated as stationary (`e^{-50} ≈ 2e-22`).
pub const LONG_TIME_FACTOR: f64 = 50.0;

/// Denominators at or below this make a γ ratio undefined.
pub const RATIO_FLOOR: f64 = 1e-12;

/// A connected graph together with its Laplacian spectrum.
///
/// All distance operations go through this type, which refuses disconnected
/// graphs: the long-time laws assume a unique flat stationary distribution.
#[derive(Debug, Clone)]
pub struct WalkModel {
    graph: Graph,
    spectrum: SpectralDecomposition,
}

impl WalkModel {
    pub fn new(graph: Graph) -> Result<Self> {
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        let spectrum = eigendecompose(&graph.laplacian())?;
        Ok(Self { graph, spectrum })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn fiedler_value(&self) -> f64 {
        self.spectrum.fiedler_value()
    }

    /// `50 / |λ_1|`; zero for the single-node graph, which never moves.
    pub fn long_time(&self) -> f64 {
        let f = self.fiedler_value();
        if f > 0.0 {
            LONG_TIME_FACTOR / f
        } else {
            0.0
        }
    }

    fn walk(&self, j: usize, t: f64) -> Result<LocalizedWalk> {
        LocalizedWalk::new(&self.spectrum, j, t)
    }

    fn cell(&self, j: usize, t: f64) -> Result<Cell> {
        let w = self.walk(j, t)?;
        Ok(Cell {
            fidelity: w.fidelity(),
            coherence: w.coherence(),
            classical_fidelity: w.classical_fidelity(),
        })
    }
}

pub fn conditional_distance(model: &WalkModel, j: usize, t: f64) -> Result<f64> {
    Ok(1.0 - model.walk(j, t)?.fidelity())
}

/// `max_j D(t|j)` and the lowest-indexed node attaining it.
pub fn qc_distance(model: &WalkModel, t: f64) -> Result<(f64, usize)> {
    let values = (0..model.node_count())
        .map(|j| conditional_distance(model, j, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(argmax(&values))
}

pub fn average_distance(model: &WalkModel, t: f64) -> Result<f64> {
    let n = model.node_count();
    let total = (0..n)
        .map(|j| conditional_distance(model, j, t))
        .sum::<Result<f64>>()?;
    Ok(total / n as f64)
}

/// Short-time form `C_j(t) / 2`.
pub fn short_asymptote(model: &WalkModel, j: usize, t: f64) -> Result<f64> {
    Ok(model.cell(j, t)?.short())
}

/// Long-time form `1 - G_j(t)² + C_j(t) / n`.
pub fn long_asymptote(model: &WalkModel, j: usize, t: f64) -> Result<f64> {
    Ok(model.cell(j, t)?.long(model.node_count()))
}

/// `G_j(t)² - C_j(t) / n` at a chosen node.
pub fn delta_at(model: &WalkModel, j: usize, t: f64) -> Result<f64> {
    Ok(model.cell(j, t)?.delta(model.node_count()))
}

/// `δ(t)` evaluated at the node that maximizes `D(t|j)`.
pub fn delta(model: &WalkModel, t: f64) -> Result<f64> {
    let (_, node) = qc_distance(model, t)?;
    delta_at(model, node, t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Asymptote {
    Short,
    Long,
}

/// `γ_K(t) = D(t) / D^K(t)`, with `D^K` maximized over nodes like `D`.
/// Returns `None` when the denominator is at most [`RATIO_FLOOR`].
pub fn gamma_ratio(model: &WalkModel, which: Asymptote, t: f64) -> Result<Option<f64>> {
    let n = model.node_count();
    let cells = (0..n)
        .map(|j| model.cell(j, t))
        .collect::<Result<Vec<_>>>()?;
    let distance = cells
        .iter()
        .map(Cell::distance)
        .fold(f64::NEG_INFINITY, f64::max);
    let asymptote = cells
        .iter()
        .map(|c| match which {
            Asymptote::Short => c.short(),
            Asymptote::Long => c.long(n),
        })
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(ratio(distance, asymptote))
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den > RATIO_FLOOR).then(|| num / den)
}

fn argmax(values: &[f64]) -> (f64, usize) {
    let mut best = (values[0], 0);
    for (j, &v) in values.iter().enumerate().skip(1) {
        if v > best.0 {
            best = (v, j);
        }
    }
    best
}

/// Per-(node, time) primitives from which every reported quantity derives.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Cell {
    fidelity: f64,
    coherence: f64,
    classical_fidelity: f64,
}

impl Cell {
    fn distance(&self) -> f64 {
        1.0 - self.fidelity
    }

    fn short(&self) -> f64 {
        0.5 * self.coherence
    }

    fn long(&self, n: usize) -> f64 {
        1.0 - self.classical_fidelity * self.classical_fidelity + self.coherence / n as f64
    }

    fn delta(&self, n: usize) -> f64 {
        self.classical_fidelity * self.classical_fidelity - self.coherence / n as f64
    }
}

/// Checks that a time grid is nonempty, finite, nonnegative and strictly
/// increasing.
pub fn validate_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidGrid("empty".into()));
    }
    if let Some(&t) = times.iter().find(|t| !t.is_finite() || **t < 0.0) {
        return Err(Error::InvalidGrid(format!(
            "time {t} is negative or not finite"
        )));
    }
    if let Some(w) = times.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(format!(
            "not strictly increasing at {} -> {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// All per-node primitives over a time grid.
///
/// Cells are evaluated independently (possibly in parallel) and every
/// reduction over nodes happens afterwards in node order, so results are
/// bitwise identical across backends.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    n: usize,
    times: Vec<f64>,
    // row-major by node: cells[j * times.len() + i]
    cells: Vec<Cell>,
}

impl Sweep {
    pub fn run(model: &WalkModel, times: &[f64]) -> Result<Self> {
        Self::run_with(model, times, Backend::default())
    }

    pub fn run_with(model: &WalkModel, times: &[f64], backend: Backend) -> Result<Self> {
        validate_times(times)?;
        let n = model.node_count();
        let steps = times.len();
        let cells =
            backend.try_map(n * steps, |idx| model.cell(idx / steps, times[idx % steps]))?;
        Ok(Self {
            n,
            times: times.to_vec(),
            cells,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    fn per_node(&self, f: impl Fn(&Cell) -> f64) -> Vec<Vec<f64>> {
        self.cells
            .chunks(self.times.len())
            .map(|row| row.iter().map(&f).collect())
            .collect()
    }

    fn column(&self, i: usize) -> impl Iterator<Item = &Cell> + '_ {
        let steps = self.times.len();
        (0..self.n).map(move |j| &self.cells[j * steps + i])
    }

    /// `conditional[j][i] = D(times[i] | j)`.
    pub fn conditional(&self) -> Vec<Vec<f64>> {
        self.per_node(Cell::distance)
    }

    pub fn coherence(&self) -> Vec<Vec<f64>> {
        self.per_node(|c| c.coherence)
    }

    pub fn classical_fidelity(&self) -> Vec<Vec<f64>> {
        self.per_node(|c| c.classical_fidelity)
    }

    pub fn short(&self) -> Vec<Vec<f64>> {
        self.per_node(Cell::short)
    }

    pub fn long(&self) -> Vec<Vec<f64>> {
        let n = self.n;
        self.per_node(|c| c.long(n))
    }

    pub fn delta_per_node(&self) -> Vec<Vec<f64>> {
        let n = self.n;
        self.per_node(|c| c.delta(n))
    }

    pub fn distance_curve(&self) -> DistanceCurve {
        let conditional = self.conditional();
        let steps = self.times.len();
        let mut qc = Vec::with_capacity(steps);
        let mut argmax_node = Vec::with_capacity(steps);
        let mut average = Vec::with_capacity(steps);
        for i in 0..steps {
            let column: Vec<f64> = conditional.iter().map(|row| row[i]).collect();
            let (value, node) = argmax(&column);
            qc.push(value);
            argmax_node.push(node);
            average.push(column.iter().sum::<f64>() / self.n as f64);
        }
        DistanceCurve {
            times: self.times.clone(),
            conditional,
            qc,
            argmax_node,
            average,
        }
    }

    pub fn asymptotics(&self) -> AsymptoticsReport {
        let n = self.n;
        let steps = self.times.len();
        let mut report = AsymptoticsReport {
            times: self.times.clone(),
            short: self.short(),
            long: self.long(),
            short_max: Vec::with_capacity(steps),
            long_max: Vec::with_capacity(steps),
            gamma_s: Vec::with_capacity(steps),
            gamma_l: Vec::with_capacity(steps),
            delta: Vec::with_capacity(steps),
            delta_node: Vec::with_capacity(steps),
        };
        for i in 0..steps {
            let cells: Vec<&Cell> = self.column(i).collect();
            let distances: Vec<f64> = cells.iter().map(|c| c.distance()).collect();
            let (qc, node) = argmax(&distances);
            let short = cells
                .iter()
                .map(|c| c.short())
                .fold(f64::NEG_INFINITY, f64::max);
            let long = cells
                .iter()
                .map(|c| c.long(n))
                .fold(f64::NEG_INFINITY, f64::max);
            report.short_max.push(short);
            report.long_max.push(long);
            report.gamma_s.push(ratio(qc, short));
            report.gamma_l.push(ratio(qc, long));
            report.delta.push(cells[node].delta(n));
            report.delta_node.push(node);
        }
        report
    }
}

/// Sampled distances over a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceCurve {
    pub times: Vec<f64>,
    /// `conditional[j][i] = D(times[i] | j)`.
    pub conditional: Vec<Vec<f64>>,
    pub qc: Vec<f64>,
    pub argmax_node: Vec<usize>,
    pub average: Vec<f64>,
}

pub fn distance_curve(model: &WalkModel, times: &[f64]) -> Result<DistanceCurve> {
    Ok(Sweep::run(model, times)?.distance_curve())
}

pub fn distance_curve_with(
    model: &WalkModel,
    times: &[f64],
    backend: Backend,
) -> Result<DistanceCurve> {
    Ok(Sweep::run_with(model, times, backend)?.distance_curve())
}

/// Short/long-time diagnostics over a time grid.
///
/// `short`/`long` are per node (`[j][i]`); the `_max` rows, the γ ratios and
/// `δ` are graph-level. `δ` is taken at the node maximizing `D(t|j)`
/// (recorded in `delta_node`).
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticsReport {
    pub times: Vec<f64>,
    pub short: Vec<Vec<f64>>,
    pub long: Vec<Vec<f64>>,
    pub short_max: Vec<f64>,
    pub long_max: Vec<f64>,
    pub gamma_s: Vec<Option<f64>>,
    pub gamma_l: Vec<Option<f64>>,
    pub delta: Vec<f64>,
    pub delta_node: Vec<usize>,
}

/// Uhlmann fidelity between the classically and quantum evolved images of
/// the diagonal state `Σ_m z_m |m⟩⟨m|`.
pub fn mixed_state_fidelity(model: &WalkModel, weights: &[f64], t: f64) -> Result<f64> {
    let n = model.node_count();
    if weights.len() != n {
        return Err(Error::DimensionMismatch(weights.len(), n));
    }
    let mut classical = vec![0.0; n];
    let mut states = Vec::with_capacity(n);
    for (m, &z) in weights.iter().enumerate() {
        let walk = model.walk(m, t)?;
        for (acc, p) in classical.iter_mut().zip(walk.classical.values()) {
            *acc += z * p;
        }
        states.push(walk.quantum.values().to_vec());
    }
    let rho_c = DensityMatrix::from_diagonal(&classical)?;
    let rho_q = DensityMatrix::mixture(weights, &states)?;
    uhlmann_fidelity(&rho_c, &rho_q)
}

/// Draws a point uniformly from the probability simplex.
pub fn dirichlet_uniform<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / total).collect()
}

/// Allowed shortfall of a mixed-state fidelity below the localized minimum.
pub const OPTIMALITY_TOL: f64 = 1e-8;
/// Allowed gap between `Σ p|α|²` and the full Uhlmann fidelity on localized
/// states.
pub const LOCALIZED_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SampleMargin {
    pub sample: usize,
    pub t: f64,
    pub weights: Vec<f64>,
    pub fidelity: f64,
    pub localized_min: f64,
    /// `fidelity - localized_min`; negative means a violation.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimalityReport {
    pub margins: Vec<SampleMargin>,
    /// Smallest margin over all samples.
    pub worst_violation: f64,
    /// Largest `|F_j - F_Uhlmann(E_C(ρ_j), E_Q(ρ_j))|` over nodes and times.
    pub localized_max_deviation: f64,
}

impl OptimalityReport {
    pub fn passed(&self) -> bool {
        self.worst_violation >= -OPTIMALITY_TOL && self.localized_max_deviation <= LOCALIZED_TOL
    }

    pub fn worst_sample(&self) -> Option<&SampleMargin> {
        self.margins
            .iter()
            .min_by(|a, b| a.margin.total_cmp(&b.margin))
    }
}

/// Monte Carlo check that no diagonal initial state has lower fidelity than
/// the best localized one.
///
/// Sample `i` draws its weights from `ChaCha8Rng::seed_from_u64(seed)` on
/// stream `i`, so results do not depend on the backend.
#[derive(Debug, Clone)]
pub struct OptimalityCheck {
    samples: usize,
    times: Vec<f64>,
    seed: u64,
    backend: Backend,
    fidelity_bias: f64,
}

impl OptimalityCheck {
    pub fn new(samples: usize, times: &[f64], seed: u64) -> Self {
        Self {
            samples,
            times: times.to_vec(),
            seed,
            backend: Backend::default(),
            fidelity_bias: 0.0,
        }
    }

    pub fn backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    /// Subtracts `bias` from every mixed-state fidelity. Only useful as a
    /// negative control for the checker itself.
    pub fn fidelity_bias(mut self, bias: f64) -> Self {
        self.fidelity_bias = bias;
        self
    }

    pub fn run(&self, model: &WalkModel) -> Result<OptimalityReport> {
        let n = model.node_count();
        let mut localized_min = Vec::with_capacity(self.times.len());
        let mut localized_max_deviation: f64 = 0.0;
        for &t in &self.times {
            let mut lowest = f64::INFINITY;
            for j in 0..n {
                let walk = model.walk(j, t)?;
                let fast = walk.fidelity();
                let rho_c = DensityMatrix::from_diagonal(walk.classical.values())?;
                let rho_q = DensityMatrix::pure(walk.quantum.values())?;
                let full = uhlmann_fidelity(&rho_c, &rho_q)?;
                localized_max_deviation = localized_max_deviation.max((fast - full).abs());
                lowest = lowest.min(fast);
            }
            localized_min.push(lowest);
        }

        let per_sample = self.backend.try_map(self.samples, |sample| {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            rng.set_stream(sample as u64);
            let weights = dirichlet_uniform(&mut rng, n);
            self.times
                .iter()
                .zip(&localized_min)
                .map(|(&t, &floor)| {
                    let fidelity = mixed_state_fidelity(model, &weights, t)? - self.fidelity_bias;
                    Ok(SampleMargin {
                        sample,
                        t,
                        weights: weights.clone(),
                        fidelity,
                        localized_min: floor,
                        margin: fidelity - floor,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })?;
        let margins: Vec<SampleMargin> = per_sample.into_iter().flatten().collect();
        let worst_violation = margins
            .iter()
            .map(|m| m.margin)
            .fold(f64::INFINITY, f64::min);
        Ok(OptimalityReport {
            margins,
            worst_violation,
            localized_max_deviation,
        })
    }
}

pub fn verify_localized_optimality(
    model: &WalkModel,
    n_samples: usize,
    t_values: &[f64],
    seed: u64,
) -> Result<OptimalityReport> {
    OptimalityCheck::new(n_samples, t_values, seed).run(model)
}
