use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use qcwalk::{generate, Graph, GraphKind, OptimalityCheck, Sweep, WalkModel};

use crate::config::{GraphSource, GraphSpec, GridArgs, Quantity, RunConfig};
use crate::csv::{escape, format_value, Table};
use crate::error::CliError;

/// Output of `graph`: the generated graph plus the summary lines.
pub struct GraphReport {
    pub graph: Graph,
    pub summary: Vec<String>,
}

pub fn cmd_graph(spec: GraphSpec, seed: u64) -> Result<GraphReport, CliError> {
    let graph = spec.build(seed)?;
    Ok(GraphReport {
        summary: summarize(&graph),
        graph,
    })
}

pub fn summarize(graph: &Graph) -> Vec<String> {
    let (max_degree, node) = graph.max_degree();
    let fiedler = match graph.fiedler_value() {
        Ok(v) => format_value(v),
        Err(_) => "NA".into(),
    };
    vec![
        format!("nodes: {}", graph.node_count()),
        format!("edges: {}", graph.edge_count()),
        format!("max_degree: {max_degree} (node {node})"),
        format!("fiedler: {fiedler}"),
    ]
}

/// Evaluates the requested quantities over a grid and lays them out as CSV
/// columns.
pub fn evaluate_table(
    model: &WalkModel,
    times: &[f64],
    quantities: &[Quantity],
    node: Option<usize>,
) -> Result<Table, CliError> {
    if let Some(j) = node {
        model.graph().check_node(j)?;
    }
    let sweep = Sweep::run(model, times)?;
    let curve = sweep.distance_curve();
    let asym = sweep.asymptotics();
    let mut table = Table::new(times.to_vec());
    for &q in quantities {
        if q.is_node_level() {
            let rows = match q {
                Quantity::Conditional => curve.conditional.clone(),
                Quantity::Coherence => sweep.coherence(),
                Quantity::Gfid => sweep.classical_fidelity(),
                Quantity::Short => asym.short.clone(),
                Quantity::Long => asym.long.clone(),
                _ => unreachable!("graph-level quantity"),
            };
            match node {
                Some(j) => table.push(q.name(), rows[j].clone()),
                None => {
                    for (j, row) in rows.into_iter().enumerate() {
                        table.push(format!("{}_{j}", q.name()), row);
                    }
                }
            }
            continue;
        }
        match q {
            Quantity::Qc => table.push(q.name(), curve.qc.clone()),
            Quantity::Average => table.push(q.name(), curve.average.clone()),
            Quantity::GammaS => table.push_optional(q.name(), asym.gamma_s.clone()),
            Quantity::GammaL => table.push_optional(q.name(), asym.gamma_l.clone()),
            Quantity::Delta => match node {
                Some(j) => table.push(q.name(), sweep.delta_per_node().swap_remove(j)),
                None => table.push(q.name(), asym.delta.clone()),
            },
            _ => unreachable!("node-level quantity"),
        }
    }
    Ok(table)
}

pub fn cmd_distance(config: &RunConfig) -> Result<String, CliError> {
    if config.outputs.is_empty() {
        return Err(CliError::Usage("at least one quantity is required".into()));
    }
    let graph = config.source.load(config.seed)?;
    if let Some(j) = config.node {
        graph.check_node(j)?;
    }
    let model = WalkModel::new(graph)?;
    let grid = config.grid.resolve(fiedler_or_one(&model))?;
    let table = evaluate_table(&model, &grid.points(), &config.outputs, config.node)?;
    Ok(table.to_csv())
}

fn fiedler_or_one(model: &WalkModel) -> f64 {
    let f = model.fiedler_value();
    if f > 0.0 {
        f
    } else {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig1Left,
    Fig1Center,
    Fig1Right,
    Fig2,
    Fig3Left,
    Fig3Right,
}

impl Figure {
    pub const ALL: [Figure; 6] = [
        Figure::Fig1Left,
        Figure::Fig1Center,
        Figure::Fig1Right,
        Figure::Fig2,
        Figure::Fig3Left,
        Figure::Fig3Right,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1Left => "fig1-left",
            Figure::Fig1Center => "fig1-center",
            Figure::Fig1Right => "fig1-right",
            Figure::Fig2 => "fig2",
            Figure::Fig3Left => "fig3-left",
            Figure::Fig3Right => "fig3-right",
        }
    }

    pub fn parse(s: &str) -> Result<Vec<Figure>, CliError> {
        if s == "all" {
            return Ok(Figure::ALL.to_vec());
        }
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .map(|f| vec![f])
            .ok_or_else(|| CliError::Usage(format!("unknown figure `{s}`")))
    }
}

/// One curve of a figure preset: a graph, an optional start node and the
/// quantities written to its CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    pub figure: Figure,
    pub graph: GraphSpec,
    pub seed: u64,
    pub node: Option<usize>,
    pub quantities: Vec<Quantity>,
}

impl CurveSpec {
    pub fn file_name(&self) -> String {
        let mut stem = format!(
            "{}_{}_{}",
            self.figure.name(),
            self.graph.kind,
            self.graph.n
        );
        if let Some(x) = self.graph.extra {
            write!(stem, "_d{x}").unwrap();
        }
        if self.graph.kind == GraphKind::RandomConnected {
            write!(stem, "_s{}", self.seed).unwrap();
        }
        if let Some(j) = self.node {
            write!(stem, "_node{j}").unwrap();
        }
        stem + ".csv"
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureOptions {
    pub seed: u64,
    /// Size of the complete/star/wheel graphs in the Fig. 1 center and right
    /// panels.
    pub n: usize,
    pub grid: GridArgs,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self {
            seed: 1,
            n: 8,
            grid: GridArgs::default(),
        }
    }
}

/// Node-1 degrees for a batch of random graphs: evenly spread over `3..=n-1`.
pub fn batch_degrees(n: usize, count: usize) -> Vec<usize> {
    (0..count)
        .map(|i| 2 + ((i + 1) * (n - 3)) / count)
        .collect()
}

fn spec(kind: GraphKind, n: usize, extra: Option<usize>) -> GraphSpec {
    GraphSpec { kind, n, extra }
}

pub fn figure_curves(figure: Figure, opts: &FigureOptions) -> Vec<CurveSpec> {
    use GraphKind::*;
    let curve =
        |graph: GraphSpec, seed: u64, node: Option<usize>, quantities: &[Quantity]| CurveSpec {
            figure,
            graph,
            seed,
            node,
            quantities: quantities.to_vec(),
        };
    let hubs = [Complete, Star, Wheel];
    let random_batch = |n: usize, count: usize, quantities: &[Quantity]| -> Vec<CurveSpec> {
        batch_degrees(n, count)
            .into_iter()
            .enumerate()
            .map(|(i, d)| {
                curve(
                    spec(RandomConnected, n, Some(d)),
                    opts.seed + i as u64,
                    None,
                    quantities,
                )
            })
            .collect()
    };
    match figure {
        Figure::Fig1Left => [5, 10, 20]
            .into_iter()
            .map(|n| curve(spec(Complete, n, None), 0, None, &[Quantity::Qc]))
            .collect(),
        Figure::Fig1Center => hubs
            .into_iter()
            .map(|k| curve(spec(k, opts.n, None), 0, Some(0), &[Quantity::Conditional]))
            .collect(),
        Figure::Fig1Right => hubs
            .into_iter()
            .map(|k| curve(spec(k, opts.n, None), 0, None, &[Quantity::Qc]))
            .collect(),
        Figure::Fig2 => {
            let mut out = vec![curve(
                spec(Ring, 11, None),
                0,
                Some(1),
                &[Quantity::Conditional],
            )];
            out.extend([4, 6, 8, 10].into_iter().map(|d| {
                curve(
                    spec(RandomConnected, 11, Some(d)),
                    opts.seed,
                    Some(1),
                    &[Quantity::Conditional],
                )
            }));
            out
        }
        Figure::Fig3Left => random_batch(11, 5, &[Quantity::GammaS, Quantity::GammaL]),
        Figure::Fig3Right => {
            let mut out = random_batch(11, 5, &[Quantity::Delta]);
            out.extend(random_batch(5, 3, &[Quantity::Delta]));
            out
        }
    }
}

pub const MANIFEST: &str = "manifest.csv";

/// Writes one CSV per curve plus `manifest.csv` into `out_dir`. Returns the
/// paths written, manifest last.
pub fn cmd_figure(
    figures: &[Figure],
    opts: &FigureOptions,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let mut written = Vec::new();
    let mut manifest = String::from("file,figure,kind,n,extra,seed,node,quantities\n");
    for &figure in figures {
        let curves = figure_curves(figure, opts);
        let models = curves
            .iter()
            .map(|c| Ok(WalkModel::new(c.graph.build(c.seed)?)?))
            .collect::<Result<Vec<_>, CliError>>()?;
        // one shared grid per panel, long enough for the slowest graph
        let slowest = models
            .iter()
            .map(fiedler_or_one)
            .fold(f64::INFINITY, f64::min);
        let times = opts.grid.resolve(slowest)?.points();
        for (curve, model) in curves.iter().zip(&models) {
            let table = evaluate_table(model, &times, &curve.quantities, curve.node)?;
            let name = curve.file_name();
            let path = out_dir.join(&name);
            std::fs::write(&path, table.to_csv()).map_err(|e| CliError::io(&path, e))?;
            written.push(path);
            let quantities: Vec<_> = curve.quantities.iter().map(|q| q.name()).collect();
            writeln!(
                manifest,
                "{},{},{},{},{},{},{},{}",
                escape(&name),
                figure.name(),
                curve.graph.kind,
                curve.graph.n,
                curve.graph.extra.map_or(String::new(), |x| x.to_string()),
                curve.seed,
                curve.node.map_or(String::new(), |j| j.to_string()),
                quantities.join(";"),
            )
            .unwrap();
        }
    }
    let path = out_dir.join(MANIFEST);
    std::fs::write(&path, manifest).map_err(|e| CliError::io(&path, e))?;
    written.push(path);
    Ok(written)
}

pub const VERIFY_MAX_NODES: usize = 10;
pub const VERIFY_TIMES: [f64; 4] = [0.1, 0.5, 1.0, 3.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub n_max: usize,
    /// Dirichlet samples per graph.
    pub samples: usize,
    pub seed: u64,
    /// Negative-control hook: subtracted from every mixed-state fidelity.
    pub fidelity_bias: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            n_max: 8,
            samples: 200,
            seed: 1,
            fidelity_bias: 0.0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifySummary {
    pub lines: Vec<String>,
    pub failures: usize,
    pub worst_margin: f64,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn record(&mut self, ok: bool, line: String) {
        if ok {
            self.lines.push(format!("ok    {line}"));
        } else {
            self.failures += 1;
            self.lines.push(format!("FAIL  {line}"));
        }
    }
}

/// Checks the structural invariants of one connected graph; returns the
/// first violated check.
fn invariant_violation(model: &WalkModel) -> Result<Option<String>, CliError> {
    let g = model.graph();
    let n = g.node_count();
    let lap = g.laplacian();
    let l = lap.matrix();
    if l.row_sum().amax() > 1e-12 || l != &l.transpose() {
        return Ok(Some("Laplacian rows/symmetry".into()));
    }
    if lap.trace() != -2.0 * g.edge_count() as f64 {
        return Ok(Some("trace(L) = -2|E|".into()));
    }
    let s = model.spectrum();
    let q = s.eigenvectors();
    let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(s.eigenvalues()));
    if (q * lambda * q.transpose() - l).amax() > 1e-9 {
        return Ok(Some("spectral reconstruction".into()));
    }
    if (q.transpose() * q - DMatrix::identity(n, n)).amax() > 1e-9 {
        return Ok(Some("eigenvector orthonormality".into()));
    }
    for t in [0.5, 2.0] {
        let h = s.heat_propagator(t)?;
        if h.row_sum().add_scalar(-1.0).amax() > 1e-10
            || h.column_sum().add_scalar(-1.0).amax() > 1e-10
        {
            return Ok(Some(format!("heat kernel stochasticity at t={t}")));
        }
        let u = s.unitary_propagator(t)?;
        let dev = (&u * u.adjoint() - DMatrix::identity(n, n))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if dev > 1e-10 {
            return Ok(Some(format!("unitarity at t={t}")));
        }
    }
    let semigroup = s.heat_propagator(0.5)? * s.heat_propagator(2.0)? - s.heat_propagator(2.5)?;
    if semigroup.amax() > 1e-8 {
        return Ok(Some("heat semigroup law".into()));
    }
    if qcwalk::qc_distance(model, 0.0)?.0 != 0.0 {
        return Ok(Some("D(0) = 0".into()));
    }
    let (late, _) = qcwalk::qc_distance(model, model.long_time())?;
    if (late - (1.0 - 1.0 / n as f64)).abs() > 1e-2 {
        return Ok(Some(format!("long-time plateau (got {late})")));
    }
    for (j, d) in g.degrees().into_iter().enumerate() {
        let t = 1e-3;
        let dist = qcwalk::conditional_distance(model, j, t)?;
        if (dist / (d as f64 * t) - 1.0).abs() > 0.05 {
            return Ok(Some(format!("short-time degree law at node {j}")));
        }
    }
    Ok(None)
}

pub fn cmd_verify(opts: &VerifyOptions) -> Result<VerifySummary, CliError> {
    if opts.n_max > VERIFY_MAX_NODES {
        return Err(CliError::Usage(format!(
            "n_max = {} refused: the mixed-state oracle is limited to n <= {VERIFY_MAX_NODES}",
            opts.n_max
        )));
    }
    if opts.n_max < 3 {
        return Err(CliError::Usage("n_max must be at least 3".into()));
    }
    if opts.samples == 0 {
        return Err(CliError::Usage("samples must be positive".into()));
    }
    let mut summary = VerifySummary {
        worst_margin: f64::INFINITY,
        ..Default::default()
    };

    let mut models = Vec::new();
    for (kind, n) in [
        (GraphKind::Complete, 5),
        (GraphKind::Star, 7),
        (GraphKind::Wheel, 9),
        (GraphKind::Ring, 11),
    ] {
        models.push((
            format!("{kind}({n})"),
            WalkModel::new(generate(kind, n, None, 0)?)?,
        ));
    }
    let mut random = Vec::new();
    for n in 3..=opts.n_max {
        let d = 2 + (opts.seed.wrapping_add(n as u64) % (n as u64 - 2)) as usize;
        let seed = opts.seed.wrapping_add(n as u64);
        let source = GraphSource::Generated(GraphSpec {
            kind: GraphKind::RandomConnected,
            n,
            extra: Some(d),
        });
        let model = WalkModel::new(source.load(seed)?)?;
        let label = format!("random_connected(n={n}, d={d}, seed={seed})");
        models.push((label.clone(), model.clone()));
        random.push((label, model, seed));
    }

    for (label, model) in &models {
        match invariant_violation(model)? {
            None => summary.record(true, format!("invariants {label}")),
            Some(what) => summary.record(false, format!("invariants {label}: {what}")),
        }
    }

    for (label, model, seed) in &random {
        let report = OptimalityCheck::new(opts.samples, &VERIFY_TIMES, *seed)
            .fidelity_bias(opts.fidelity_bias)
            .run(model)?;
        summary.worst_margin = summary.worst_margin.min(report.worst_violation);
        let mut line = format!(
            "localized optimality {label}: {} checks, worst margin {:.3e}, localized deviation {:.3e}",
            report.margins.len(),
            report.worst_violation,
            report.localized_max_deviation
        );
        if !report.passed() {
            if let Some(w) = report.worst_sample() {
                let weights: Vec<String> = w.weights.iter().map(|z| format!("{z:.4}")).collect();
                write!(
                    line,
                    "; worst sample #{} at t={} with weights [{}]: fidelity {:.6} < localized minimum {:.6}",
                    w.sample,
                    w.t,
                    weights.join(", "),
                    w.fidelity,
                    w.localized_min
                )
                .unwrap();
            }
        }
        summary.record(report.passed(), line);
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batch_degrees_stay_in_range() {
        assert_eq!(batch_degrees(11, 5), vec![3, 5, 6, 8, 10]);
        assert_eq!(batch_degrees(5, 3), vec![2, 3, 4]);
        for n in 4..20 {
            for count in 1..8 {
                assert!(batch_degrees(n, count).iter().all(|&d| (2..n).contains(&d)));
            }
        }
    }

    #[test]
    fn figure_presets_have_expected_curves() {
        let opts = FigureOptions::default();
        let left = figure_curves(Figure::Fig1Left, &opts);
        assert_eq!(
            left.iter().map(|c| c.graph.n).collect::<Vec<_>>(),
            vec![5, 10, 20]
        );
        let center = figure_curves(Figure::Fig1Center, &opts);
        assert!(center.iter().all(|c| c.graph.n == 8 && c.node == Some(0)));
        let fig2 = figure_curves(Figure::Fig2, &opts);
        assert_eq!(fig2.len(), 5);
        assert!(fig2.iter().all(|c| c.node == Some(1) && c.graph.n == 11));
        assert_eq!(figure_curves(Figure::Fig3Right, &opts).len(), 8);
        let names: std::collections::HashSet<_> = Figure::ALL
            .iter()
            .flat_map(|&f| figure_curves(f, &opts))
            .map(|c| c.file_name())
            .collect();
        assert_eq!(names.len(), 3 + 3 + 3 + 5 + 5 + 8);
    }

    #[test]
    fn verify_refuses_large_graphs() {
        let opts = VerifyOptions {
            n_max: 12,
            ..Default::default()
        };
        assert!(matches!(cmd_verify(&opts), Err(CliError::Usage(_))));
    }
}
