use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qcwalk::GraphKind;
use qcwalk_cli::commands::{
    cmd_distance, cmd_figure, cmd_graph, cmd_verify, Figure, FigureOptions, VerifyOptions,
};
use qcwalk_cli::config::{GraphSource, GraphSpec, GridArgs, Quantity, RunConfig};
use qcwalk_cli::grid::Spacing;
use qcwalk_cli::CliError;

/// Classical versus quantum continuous-time random walks on graphs.
#[derive(Debug, Parser)]
#[command(name = "qcwalk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a graph and write its edge list.
    Graph {
        /// complete, ring, path, star, wheel or random_connected
        kind: String,
        n: usize,
        /// Degree of node 1 for random_connected.
        extra: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output file; `-` or absent writes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate distance quantities over a time grid as CSV.
    Distance {
        /// Generated graph as kind:n[:extra].
        #[arg(long, conflicts_with = "edges", required_unless_present = "edges")]
        graph: Option<String>,
        /// Edge-list file.
        #[arg(long)]
        edges: Option<PathBuf>,
        #[command(flatten)]
        grid: GridFlags,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Restrict node-level quantities to this start node.
        #[arg(long)]
        node: Option<usize>,
        #[arg(long, default_value = "qc,average")]
        quantities: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the CSV data behind a figure preset (or `all`).
    Figure {
        which: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Size of the complete/star/wheel graphs.
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[command(flatten)]
        grid: GridFlags,
    },
    /// Check invariants and localized-state optimality on small graphs.
    Verify {
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        /// Random mixed states per graph.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(
            long,
            hide = true,
            default_value_t = 0.0,
            allow_negative_numbers = true
        )]
        inject_fidelity_bias: f64,
    },
}

#[derive(Debug, Args)]
struct GridFlags {
    #[arg(long)]
    tmin: Option<f64>,
    #[arg(long)]
    tmax: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, conflicts_with = "linear")]
    log: bool,
    #[arg(long)]
    linear: bool,
}

impl GridFlags {
    fn to_args(&self) -> GridArgs {
        let spacing = if self.linear {
            Some(Spacing::Linear)
        } else if self.log {
            Some(Spacing::Log)
        } else {
            None
        };
        GridArgs {
            t_min: self.tmin,
            t_max: self.tmax,
            steps: self.steps,
            spacing,
        }
    }
}

fn is_stdout(out: &Option<PathBuf>) -> bool {
    out.as_ref().is_none_or(|p| p.as_os_str() == "-")
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) if !is_stdout(out) => {
            std::fs::write(path, text).map_err(|e| CliError::io(path, e))
        }
        _ => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Graph {
            kind,
            n,
            extra,
            seed,
            out,
        } => {
            let kind: GraphKind = kind.parse()?;
            let report = cmd_graph(GraphSpec { kind, n, extra }, seed)?;
            let edges = report.graph.to_edge_list();
            if is_stdout(&out) {
                let mut text = String::new();
                for line in &report.summary {
                    text.push_str(&format!("# {line}\n"));
                }
                text.push_str(&edges);
                emit(&out, &text)
            } else {
                emit(&out, &edges)?;
                println!("{}", report.summary.join("\n"));
                Ok(())
            }
        }
        Command::Distance {
            graph,
            edges,
            grid,
            seed,
            node,
            quantities,
            out,
        } => {
            let source = match (graph, edges) {
                (Some(spec), _) => GraphSource::Generated(spec.parse()?),
                (None, Some(path)) => GraphSource::EdgeList(path),
                (None, None) => {
                    return Err(CliError::Usage("--graph or --edges is required".into()))
                }
            };
            let config = RunConfig {
                source,
                grid: grid.to_args(),
                seed,
                outputs: Quantity::parse_list(&quantities)?,
                node,
            };
            emit(&out, &cmd_distance(&config)?)
        }
        Command::Figure {
            which,
            seed,
            out,
            n,
            grid,
        } => {
            let figures = Figure::parse(&which)?;
            let opts = FigureOptions {
                seed,
                n,
                grid: grid.to_args(),
            };
            for path in cmd_figure(&figures, &opts, &out)? {
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Verify {
            n_max,
            samples,
            seed,
            inject_fidelity_bias,
        } => {
            let summary = cmd_verify(&VerifyOptions {
                n_max,
                samples,
                seed,
                fidelity_bias: inject_fidelity_bias,
            })?;
            for line in &summary.lines {
                println!("{line}");
            }
            if summary.passed() {
                println!(
                    "all checks passed (worst margin {:.3e})",
                    summary.worst_margin
                );
                Ok(())
            } else {
                Err(CliError::Verification(format!(
                    "{} check(s) failed",
                    summary.failures
                )))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
