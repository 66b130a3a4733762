//! JSON experiment configuration.

use std::io::Read;
use std::path::Path;

use graphwh::group::{FiniteGroup, WeakHaagerupVertexData};
use graphwh::kernel::{KernelParams, DEFAULT_D_CAP};
use graphwh::word::{GraphProductContext, Letter, SimpleGraph};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: String,
    pub graph: GraphConfig,
    pub vertex_data: Vec<VertexDataConfig>,
    #[serde(default)]
    pub params: ParamsConfig,
    #[serde(default)]
    pub commands: CommandsConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphConfig {
    pub vertex_count: usize,
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDataConfig {
    pub cayley: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
    #[serde(rename = "R")]
    pub r: Vec<Vec<f64>>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsConfig {
    pub n: u32,
    pub eps: f64,
    pub delta: f64,
    pub d_cap: usize,
    pub ball_radius: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        ParamsConfig { n: 10, eps: 0.01, delta: 0.5, d_cap: DEFAULT_D_CAP, ball_radius: 2, tol: 1e-9, seed: 42 }
    }
}

/// Per-command options. Every field has a default.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CommandsConfig {
    pub reduce: ReduceConfig,
    pub walls_audit: WallsConfig,
    pub kernel_report: KernelReportConfig,
    pub invariance_test: InvarianceConfig,
    pub b2_audit: B2Config,
    pub convergence: ConvergenceConfig,
    pub validate: ValidateConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReduceConfig {
    /// Words as lists of `[vertex, element]` pairs.
    pub words: Vec<Vec<[usize; 2]>>,
    /// Tail depth reported for each word.
    pub tail_d: usize,
    /// Longest letter sequence compared against the rewriting oracle.
    pub oracle_max_length: usize,
    pub metric_radius: usize,
}

impl Default for ReduceConfig {
    fn default() -> Self {
        ReduceConfig { words: Vec::new(), tail_d: 1, oracle_max_length: 5, metric_radius: 3 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WallsConfig {
    pub radius: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KernelReportConfig {
    pub radius: Option<usize>,
    pub sample_size: usize,
    pub sample_radius: usize,
    pub tail_d_max: usize,
}

impl Default for KernelReportConfig {
    fn default() -> Self {
        KernelReportConfig { radius: None, sample_size: 50, sample_radius: 5, tail_d_max: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InvarianceConfig {
    pub pairs: usize,
    pub max_length: usize,
}

impl Default for InvarianceConfig {
    fn default() -> Self {
        InvarianceConfig { pairs: 200, max_length: 5 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct B2Config {
    pub radius: usize,
    pub schur_tol: f64,
    /// Overrides the scheduled `n`.
    pub n: Option<u32>,
    /// Defaults to `n, 2n, 4n, 8n`.
    pub grid: Option<Vec<u32>>,
    pub final_bound: f64,
    pub chi_d_max: usize,
    pub iter_cap: usize,
}

impl Default for B2Config {
    fn default() -> Self {
        B2Config { radius: 2, schur_tol: 1e-9, n: None, grid: None, final_bound: 1.05, chi_d_max: 4, iter_cap: 5000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvergenceConfig {
    pub radius: usize,
    pub ns: Vec<u32>,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        ConvergenceConfig { radius: 3, ns: vec![1, 10, 100] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ValidateConfig {
    pub expo_pairs: usize,
    pub expo_dim: usize,
    pub expo_order: u32,
    pub expo_tol: f64,
    pub identity_tol: f64,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        ValidateConfig { expo_pairs: 100, expo_dim: 3, expo_order: 12, expo_tol: 1e-8, identity_tol: 1e-12 }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(CliError::Schema(format!(
                "unsupported schema_version {:?}, expected {SCHEMA_VERSION:?}",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    /// Reads from a file, or from stdin when `path` is `-`.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = if path.as_os_str() == "-" {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(e.to_string()))?;
            s
        } else {
            std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?
        };
        Self::from_json(&text)
    }

    /// Config describing an existing context, with default parameters.
    pub fn from_context(ctx: &GraphProductContext) -> Self {
        let graph = GraphConfig {
            vertex_count: ctx.vertex_count(),
            edges: ctx.graph().edges().iter().map(|&(a, b)| [a, b]).collect(),
        };
        let vertex_data = ctx
            .all_vertex_data()
            .iter()
            .map(|d| VertexDataConfig {
                cayley: d.group().cayley_rows().map(|r| r.to_vec()).collect(),
                inverse: d.group().inverse_table().to_vec(),
                r: (0..d.order()).map(|g| d.r(g).to_vec()).collect(),
                s: (0..d.order()).map(|g| d.s(g).to_vec()).collect(),
            })
            .collect();
        ExperimentConfig {
            schema_version: SCHEMA_VERSION.to_string(),
            graph,
            vertex_data,
            params: ParamsConfig::default(),
            commands: CommandsConfig::default(),
        }
    }

    pub fn context(&self) -> Result<GraphProductContext, CliError> {
        let edges: Vec<(usize, usize)> = self.graph.edges.iter().map(|e| (e[0], e[1])).collect();
        let graph = SimpleGraph::new(self.graph.vertex_count, &edges)?;
        let data = self
            .vertex_data
            .iter()
            .map(|v| {
                let group = FiniteGroup::new(v.cayley.clone(), v.inverse.clone()).map_err(graphwh::Error::from)?;
                Ok(WeakHaagerupVertexData::new(group, v.r.clone(), v.s.clone())?)
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(GraphProductContext::new(graph, data)?)
    }

    pub fn kernel_params(&self) -> Result<KernelParams, CliError> {
        let p = &self.params;
        Ok(KernelParams::new(p.n, p.eps, p.delta, p.d_cap)?)
    }
}

pub fn parse_word(pairs: &[[usize; 2]]) -> Vec<Letter> {
    pairs.iter().map(|p| Letter::new(p[0], p[1])).collect()
}
