use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    ProkhorovDist,
    TvDist,
    MuUt,
    CoverProfile,
    Modulus,
    Cheby,
    JungCheck,
    AaNet,
    VerifyQprokh,
    VerifyQaa,
    VerifyQsaa,
    GenWalks,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::ProkhorovDist => "prokhorov-dist",
            Command::TvDist => "tv-dist",
            Command::MuUt => "mu-ut",
            Command::CoverProfile => "cover-profile",
            Command::Modulus => "modulus",
            Command::Cheby => "cheby",
            Command::JungCheck => "jung-check",
            Command::AaNet => "aa-net",
            Command::VerifyQprokh => "verify-qprokh",
            Command::VerifyQaa => "verify-qaa",
            Command::VerifyQsaa => "verify-qsaa",
            Command::GenWalks => "gen-walks",
        }
    }

    /// Parameters the command reads; anything else is rejected.
    fn accepts(self) -> &'static [&'static str] {
        match self {
            Command::ProkhorovDist => &["lambda", "alpha"],
            Command::TvDist => &[],
            Command::MuUt => &["eps_grid", "k_max"],
            Command::CoverProfile => &["k_max", "ambient"],
            Command::Modulus => &["delta", "delta_grid"],
            Command::Cheby | Command::JungCheck => &[],
            Command::AaNet => &["delta", "alpha", "m_bound", "eps", "list_grid"],
            Command::VerifyQprokh => &["lambda_grid", "eps", "eps_grid", "k_max"],
            Command::VerifyQaa => &["delta_grid", "m_bound", "eps"],
            Command::VerifyQsaa => &["lambda_grid", "eps_grid", "delta_grid", "m_grid", "eps"],
            Command::GenWalks => &["n_steps", "n_paths", "scale", "seed"],
        }
    }

    fn input_count(self) -> (usize, Option<usize>) {
        match self {
            Command::ProkhorovDist | Command::TvDist => (2, Some(2)),
            Command::GenWalks => (0, Some(0)),
            Command::VerifyQsaa => (1, None),
            _ => (1, Some(1)),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_grid: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_grid: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_grid: Option<Vec<f64>>,
    /// Uniform bound M on path norms.
    #[arg(long = "bound")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_bound: Option<f64>,
    #[arg(long = "bound-grid", value_delimiter = ',')]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_grid: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_steps: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_paths: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    #[arg(skip)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Use Chebyshev centers of the greedy clusters (Euclidean inputs).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub ambient: bool,
    /// Enumerate the snapping lattice in the report.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub list_grid: bool,
}

impl Params {
    fn present(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let mut mark = |name, set: bool| {
            if set {
                out.push(name)
            }
        };
        mark("lambda", self.lambda.is_some());
        mark("alpha", self.alpha.is_some());
        mark("lambda_grid", self.lambda_grid.is_some());
        mark("eps", self.eps.is_some());
        mark("eps_grid", self.eps_grid.is_some());
        mark("delta", self.delta.is_some());
        mark("delta_grid", self.delta_grid.is_some());
        mark("m_bound", self.m_bound.is_some());
        mark("m_grid", self.m_grid.is_some());
        mark("k_max", self.k_max.is_some());
        mark("n_steps", self.n_steps.is_some());
        mark("n_paths", self.n_paths.is_some());
        mark("scale", self.scale.is_some());
        mark("seed", self.seed.is_some());
        mark("ambient", self.ambient);
        mark("list_grid", self.list_grid);
        out
    }
}

/// One invocation: command, inputs, parameters and output settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub inputs: Vec<PathBuf>,
    #[serde(default)]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("config: {e}")))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let accepted = self.command.accepts();
        for name in self.params.present() {
            if !accepted.contains(&name) {
                return Err(CliError::Input(format!(
                    "parameter `{name}` is not used by {}",
                    self.command.name()
                )));
            }
        }
        let (lo, hi) = self.command.input_count();
        let n = self.inputs.len();
        if n < lo || hi.is_some_and(|hi| n > hi) {
            let want = match hi {
                Some(h) if h == lo => format!("{lo}"),
                Some(h) => format!("{lo}..={h}"),
                None => format!("at least {lo}"),
            };
            return Err(CliError::Input(format!(
                "{} takes {want} input file(s), got {n}",
                self.command.name()
            )));
        }
        let p = &self.params;
        for (name, grid) in [
            ("lambda_grid", &p.lambda_grid),
            ("eps_grid", &p.eps_grid),
            ("delta_grid", &p.delta_grid),
            ("m_grid", &p.m_grid),
        ] {
            if let Some(g) = grid {
                check_grid(name, g)?;
            }
        }
        for (name, v) in [
            ("lambda", p.lambda),
            ("eps", p.eps),
            ("delta", p.delta),
        ] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(CliError::Input(format!("`{name}` must be finite and > 0")));
                }
            }
        }
        if self.command == Command::GenWalks && p.seed.is_none() {
            return Err(CliError::Input("gen-walks needs a seed".into()));
        }
        Ok(())
    }
}

fn check_grid(name: &str, grid: &[f64]) -> Result<(), CliError> {
    if grid.is_empty() {
        return Err(CliError::Input(format!("`{name}` is empty")));
    }
    if grid.iter().any(|g| !(*g > 0.0 && g.is_finite())) {
        return Err(CliError::Input(format!("`{name}` entries must be finite and > 0")));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(CliError::Input(format!("`{name}` must be strictly increasing")));
    }
    Ok(())
}
