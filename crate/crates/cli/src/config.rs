use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use qcwalk::{generate, Graph, GraphKind};

use crate::error::CliError;
use crate::grid::{Spacing, TimeGrid};

/// `kind:n[:extra]`, e.g. `ring:11` or `random:11:6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphSpec {
    pub kind: GraphKind,
    pub n: usize,
    pub extra: Option<usize>,
}

impl GraphSpec {
    pub fn build(&self, seed: u64) -> Result<Graph, CliError> {
        Ok(generate(self.kind, self.n, self.extra, seed)?)
    }
}

impl FromStr for GraphSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("graph spec `{s}` is not kind:n[:extra]"));
        let parts: Vec<&str> = s.split(':').collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(bad());
        }
        let kind = parts[0].parse::<GraphKind>()?;
        let n = parts[1].parse().map_err(|_| bad())?;
        let extra = match parts.get(2) {
            Some(x) => Some(x.parse().map_err(|_| bad())?),
            None => None,
        };
        Ok(Self { kind, n, extra })
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind, self.n)?;
        if let Some(x) = self.extra {
            write!(f, ":{x}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSource {
    Generated(GraphSpec),
    EdgeList(PathBuf),
}

impl GraphSource {
    pub fn load(&self, seed: u64) -> Result<Graph, CliError> {
        match self {
            GraphSource::Generated(spec) => spec.build(seed),
            GraphSource::EdgeList(path) => {
                let text =
                    std::fs::read_to_string(path).map_err(|e| CliError::io(path.clone(), e))?;
                Ok(Graph::parse_edge_list(&text)?)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    Conditional,
    Qc,
    Average,
    Coherence,
    Gfid,
    Short,
    Long,
    GammaS,
    GammaL,
    Delta,
}

impl Quantity {
    pub const ALL: [Quantity; 10] = [
        Quantity::Conditional,
        Quantity::Qc,
        Quantity::Average,
        Quantity::Coherence,
        Quantity::Gfid,
        Quantity::Short,
        Quantity::Long,
        Quantity::GammaS,
        Quantity::GammaL,
        Quantity::Delta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Conditional => "conditional",
            Quantity::Qc => "qc",
            Quantity::Average => "average",
            Quantity::Coherence => "coherence",
            Quantity::Gfid => "gfid",
            Quantity::Short => "short",
            Quantity::Long => "long",
            Quantity::GammaS => "gamma_s",
            Quantity::GammaL => "gamma_l",
            Quantity::Delta => "delta",
        }
    }

    /// Per-node quantities: one column per node unless a node is selected.
    pub fn is_node_level(self) -> bool {
        matches!(
            self,
            Quantity::Conditional
                | Quantity::Coherence
                | Quantity::Gfid
                | Quantity::Short
                | Quantity::Long
        )
    }

    pub fn parse_list(s: &str) -> Result<Vec<Quantity>, CliError> {
        let list = s
            .split(',')
            .map(str::trim)
            .filter(|q| !q.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>, _>>()?;
        if list.is_empty() {
            return Err(CliError::Usage("at least one quantity is required".into()));
        }
        Ok(list)
    }
}

impl FromStr for Quantity {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| {
                let known: Vec<_> = Quantity::ALL.iter().map(|q| q.name()).collect();
                CliError::Usage(format!(
                    "unknown quantity `{s}` (expected one of {})",
                    known.join(", ")
                ))
            })
    }
}

/// Partially specified grid flags; missing pieces fall back to the default
/// grid for the graph at hand.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GridArgs {
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub steps: Option<usize>,
    pub spacing: Option<Spacing>,
}

impl GridArgs {
    pub fn resolve(&self, fiedler: f64) -> Result<TimeGrid, CliError> {
        let default = TimeGrid::default_for(fiedler);
        TimeGrid::new(
            self.t_min.unwrap_or(default.t_min),
            self.t_max.unwrap_or(default.t_max),
            self.steps.unwrap_or(default.steps),
            self.spacing.unwrap_or(default.spacing),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: GraphSource,
    pub grid: GridArgs,
    pub seed: u64,
    pub outputs: Vec<Quantity>,
    pub node: Option<usize>,
}
