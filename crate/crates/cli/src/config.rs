//! Run configuration: command-line flags layered over an optional TOML file.
//! Flags win; environment variables are never read.

use std::path::{Path, PathBuf};

use clap::Args;
use emprint_core::catalog::Sampling;
use emprint_core::eim::{EimOptions, FirstNode};
use emprint_core::rbm::DEFAULT_TOL;
use emprint_core::{Family, FamilySpec, SelectionCriterion, TimeGrid};
use serde::Deserialize;

use crate::CliError;

/// Flags shared by every subcommand. All optional so a config file can
/// supply them.
#[derive(Args, Debug, Default, Clone)]
pub struct SharedArgs {
    /// TOML file with any of the options below (snake_case keys)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Training CSV to ingest instead of generating a family
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Basis CSV to reuse instead of running the greedy sweep
    #[arg(long)]
    pub basis: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Squared greedy tolerance on `σ_n²`
    #[arg(long)]
    pub tol: Option<f64>,
    /// Basis size cap; for eim/compare/verify-theorem also the interpolant order
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Comma-separated subset of classic,kappa,lambda
    #[arg(long)]
    pub criteria: Option<String>,
    /// Seed for random parameter sampling
    #[arg(long)]
    pub seed: Option<u64>,
    /// Apply the variant objective to the first node too
    #[arg(long)]
    pub first_node_variant: bool,
    /// damped_chirp, gaussian_packet or poly_fourier
    #[arg(long)]
    pub family: Option<String>,
    /// Number of parameter samples
    #[arg(long)]
    pub k: Option<usize>,
    /// Number of time samples
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_end: Option<f64>,
    /// Per-dimension ranges, e.g. `1:5` or `0.2:0.8,0.1:0.2`
    #[arg(long, allow_hyphen_values = true)]
    pub param_range: Option<String>,
    /// Draw parameters uniformly at random (seeded) instead of a tensor grid
    #[arg(long)]
    pub random: bool,
    /// Also write V and B as CSV blocks inside interpolant JSON
    #[arg(long)]
    pub embed_matrices: bool,
    /// Extra validation set of this many random parameters (compare only)
    #[arg(long)]
    pub out_of_sample: Option<usize>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    input: Option<PathBuf>,
    basis: Option<PathBuf>,
    out_dir: Option<PathBuf>,
    tol: Option<f64>,
    n_max: Option<usize>,
    criteria: Option<CriteriaValue>,
    seed: Option<u64>,
    first_node_variant: Option<bool>,
    family: Option<String>,
    k: Option<usize>,
    l: Option<usize>,
    t_start: Option<f64>,
    t_end: Option<f64>,
    param_range: Option<String>,
    random: Option<bool>,
    embed_matrices: Option<bool>,
    out_of_sample: Option<usize>,
}

#[derive(Deserialize, Debug)]
#[serde(untagged)]
enum CriteriaValue {
    List(Vec<String>),
    Joined(String),
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub basis: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub tol: f64,
    pub n_max: Option<usize>,
    pub criteria: Vec<SelectionCriterion>,
    pub seed: u64,
    pub first_node: FirstNode,
    pub family: Family,
    pub family_given: bool,
    pub k: usize,
    pub l: usize,
    pub t_window: Option<(f64, f64)>,
    pub param_range: Option<Vec<(f64, f64)>>,
    pub random: bool,
    pub embed_matrices: bool,
    pub out_of_sample: Option<usize>,
}

impl RunConfig {
    pub fn resolve(args: &SharedArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => load_file(path)?,
            None => FileConfig::default(),
        };

        let criteria = match (&args.criteria, file.criteria) {
            (Some(s), _) => parse_criteria(s.split(','))?,
            (None, Some(CriteriaValue::Joined(s))) => parse_criteria(s.split(','))?,
            (None, Some(CriteriaValue::List(v))) => parse_criteria(v.iter().map(String::as_str))?,
            (None, None) => SelectionCriterion::ALL.to_vec(),
        };

        let family_name = args.family.clone().or(file.family);
        let family = match &family_name {
            Some(name) => name.parse::<Family>().map_err(|e| CliError::Input(e.to_string()))?,
            None => Family::DampedChirp,
        };

        let tol = args.tol.or(file.tol).unwrap_or(DEFAULT_TOL);
        if !tol.is_finite() || tol <= 0.0 {
            return Err(CliError::Input(format!("--tol must be a positive number, got {tol}")));
        }
        let n_max = args.n_max.or(file.n_max);
        if n_max == Some(0) {
            return Err(CliError::Input("--n-max must be at least 1".into()));
        }

        let t_start = args.t_start.or(file.t_start);
        let t_end = args.t_end.or(file.t_end);
        let t_window = match (t_start, t_end) {
            (None, None) => None,
            (a, b) => {
                let (da, db) = family.default_window();
                Some((a.unwrap_or(da), b.unwrap_or(db)))
            }
        };
        let param_range = args
            .param_range
            .clone()
            .or(file.param_range)
            .map(|s| parse_ranges(&s))
            .transpose()?;

        let first_node_variant = args.first_node_variant || file.first_node_variant.unwrap_or(false);

        Ok(Self {
            input: args.input.clone().or(file.input),
            basis: args.basis.clone().or(file.basis),
            out_dir: args.out_dir.clone().or(file.out_dir).unwrap_or_else(|| PathBuf::from(".")),
            tol,
            n_max,
            criteria,
            seed: args.seed.or(file.seed).unwrap_or(0),
            first_node: if first_node_variant {
                FirstNode::Objective
            } else {
                FirstNode::ArgmaxBasis
            },
            family,
            family_given: family_name.is_some(),
            k: args.k.or(file.k).unwrap_or(101),
            l: args.l.or(file.l).unwrap_or(1001),
            t_window,
            param_range,
            random: args.random || file.random.unwrap_or(false),
            embed_matrices: args.embed_matrices || file.embed_matrices.unwrap_or(false),
            out_of_sample: args.out_of_sample.or(file.out_of_sample),
        })
    }

    pub fn family_spec(&self) -> Result<FamilySpec, CliError> {
        self.family_spec_with(self.k, self.sampling())
    }

    pub fn family_spec_with(&self, k: usize, sampling: Sampling) -> Result<FamilySpec, CliError> {
        let mut spec = FamilySpec::with_defaults(self.family, k, self.l).map_err(input)?;
        if let Some((a, b)) = self.t_window {
            spec.grid = TimeGrid::new(a, b, self.l).map_err(input)?;
        }
        if let Some(r) = &self.param_range {
            spec.param_range = r.clone();
        }
        spec.sampling = sampling;
        Ok(spec)
    }

    fn sampling(&self) -> Sampling {
        if self.random {
            Sampling::Random { seed: self.seed }
        } else {
            Sampling::Equispaced
        }
    }

    pub fn eim_options(&self) -> EimOptions {
        EimOptions {
            first_node: self.first_node,
            ..Default::default()
        }
    }
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn load_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Input(format!("config {}: {e}", path.display())))
}

fn parse_criteria<'a>(items: impl Iterator<Item = &'a str>) -> Result<Vec<SelectionCriterion>, CliError> {
    let mut out: Vec<SelectionCriterion> = Vec::new();
    for item in items.map(str::trim).filter(|s| !s.is_empty()) {
        let c: SelectionCriterion = item
            .parse()
            .map_err(|_| CliError::Input(format!("unknown criterion '{item}' (expected classic, kappa or lambda)")))?;
        if !out.contains(&c) {
            out.push(c);
        }
    }
    if out.is_empty() {
        return Err(CliError::Input("--criteria is empty".into()));
    }
    out.sort();
    Ok(out)
}

fn parse_ranges(s: &str) -> Result<Vec<(f64, f64)>, CliError> {
    s.split(',')
        .map(|part| {
            let (lo, hi) = part
                .split_once(':')
                .ok_or_else(|| CliError::Input(format!("range '{part}' is not lo:hi")))?;
            let parse = |v: &str| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Input(format!("range '{part}': '{v}' is not a number")))
            };
            Ok((parse(lo)?, parse(hi)?))
        })
        .collect()
}
