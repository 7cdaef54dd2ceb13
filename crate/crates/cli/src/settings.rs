//! Flags and config files share one flat key set; flags win.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use hsconvex::quad::DEFAULT_TOL;
use hsconvex::SearchConfig;
use serde::{Deserialize, Serialize};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Every setting a run can take. Config-file keys are the flag names with
/// `-` replaced by `_`.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    /// Subcommand; filled in from the command line.
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,

    /// Function f: catalog name (ln, square, identity, abs, exp, power(p)) or an expression in one variable
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,

    /// Second function for the product inequalities
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,

    /// Weight function h on [0, 1]: identity, one, reciprocal, power(p) or an expression in t
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,

    /// Exponent s in (0, 1]
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,

    /// Left endpoint
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,

    /// Right endpoint
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,

    /// Inequality to verify
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem: Option<String>,

    /// Comma-separated inequalities for sweep (default: all)
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorems: Option<Vec<String>>,

    /// Convexity class
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,

    /// Quadrature tolerance
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,

    /// Search grid points per axis (x, y and t)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,

    /// Number of grid cells refined by local ascent
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refine_top_k: Option<usize>,

    /// Maximum ascent moves per refined cell
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refine_iters: Option<usize>,

    /// Relative violation tolerance of the membership search
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search_tol: Option<f64>,

    /// Maximum defect evaluations per membership search
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,

    /// Output format
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,

    /// Write the report here instead of stdout
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,

    /// Random seed (default 42)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,

    /// Flat JSON file of settings; flags override it
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Also check the inequality's hypothesis class
    #[arg(long)]
    pub check_hypothesis: bool,

    /// Comma-separated s values for sweep (default 0.25,0.5,0.75,1)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_values: Option<Vec<f64>>,

    /// Comma-separated sweep intervals written a:b
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intervals: Option<Vec<String>>,

    /// Draw this many seeded random subintervals of [a, b] for sweep
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub random_intervals: Option<usize>,

    /// Include the ordering chain H <= G <= L <= I <= A <= K
    #[arg(long)]
    pub chain: bool,

    /// Also report the p-logarithmic mean of this order
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,

    /// Comma-separated proposition numbers 1-4 (default: all)
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id: Option<Vec<u8>>,
}

macro_rules! prefer_flags {
    ($flags:ident, $file:ident; $($field:ident),* ; $($switch:ident),*) => {
        Settings {
            command: $flags.command.or($file.command),
            config: $flags.config,
            $($field: $flags.$field.or($file.$field),)*
            $($switch: $flags.$switch || $file.$switch,)*
        }
    };
}

impl Settings {
    /// Merges the config file (if any) under the flags and fills defaults.
    pub fn resolve(self, command: &str) -> anyhow::Result<Settings> {
        let merged = match &self.config {
            Some(path) => {
                let file = read_config(path)?;
                if let Some(c) = &file.command {
                    if c != command {
                        bail!(
                            "config file {} is for `{c}`, not `{command}`",
                            path.display()
                        );
                    }
                }
                let flags = self;
                prefer_flags!(flags, file;
                    f, g, h, s, a, b, theorem, theorems, class, tol, grid, refine_top_k,
                    refine_iters, search_tol, budget, format, out, seed, s_values,
                    intervals, random_intervals, p, id;
                    check_hypothesis, chain)
            }
            None => self,
        };
        let defaults = SearchConfig::default();
        Ok(Settings {
            command: Some(command.to_owned()),
            tol: merged.tol.or(Some(DEFAULT_TOL)),
            grid: merged.grid.or(Some(defaults.grid_x)),
            refine_top_k: merged.refine_top_k.or(Some(defaults.refine_top_k)),
            refine_iters: merged.refine_iters.or(Some(defaults.max_refine_iters)),
            search_tol: merged.search_tol.or(Some(defaults.tolerance)),
            budget: merged.budget.or(Some(defaults.budget)),
            format: merged.format.or(Some(Format::Json)),
            seed: merged.seed.or(Some(DEFAULT_SEED)),
            ..merged
        })
    }

    pub fn search(&self) -> SearchConfig {
        let d = SearchConfig::default();
        let n = self.grid.unwrap_or(d.grid_x);
        SearchConfig {
            grid_x: n,
            grid_y: n,
            grid_t: n,
            refine_top_k: self.refine_top_k.unwrap_or(d.refine_top_k),
            max_refine_iters: self.refine_iters.unwrap_or(d.max_refine_iters),
            tolerance: self.search_tol.unwrap_or(d.tolerance),
            budget: self.budget.unwrap_or(d.budget),
            ..d
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_TOL)
    }
}

fn read_config(path: &Path) -> anyhow::Result<Settings> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("invalid config file {}", path.display()))
}
