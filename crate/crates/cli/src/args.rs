//! Command-line flags. Every option struct also deserializes from a JSON
//! config file with the same keys; flags given on the command line win.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use grandnet::grid::extended_real;
use grandnet::verify::SuiteConfig;
use grandnet::{EpsilonSearch, Net, WeightVariant};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "grandnet", version, about = "Grand net and grand Lorentz norms on grid functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Norm of a function in a net, grand net or grand Lorentz space (JSON).
    Norm(Run<NormArgs>),
    /// Average function f̄(t, M) as (t_lo, t_hi, value) segments (CSV).
    Avg(Run<AvgArgs>),
    /// f* and f** at the cell boundaries (CSV).
    Rearrange(Run<RearrangeArgs>),
    /// Upper envelope of the K-functional on the t-grid (CSV).
    Kfunc(Run<KfuncArgs>),
    /// Grand net norm against the interpolation-norm upper bound (JSON).
    InterpCheck(Run<InterpArgs>),
    /// Boundedness criterion and empirical norm of an integral operator (JSON).
    Certify(Run<CertifyArgs>),
    /// Run inequality suites over a seeded corpus (JSON report).
    Verify(Run<VerifyArgs>),
}

#[derive(Debug, Args)]
pub struct Run<T: Args> {
    /// JSON file with default values for any of this command's options.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub opts: T,
}

impl<T: Args + Serialize + serde::de::DeserializeOwned> Run<T> {
    /// Flags layered over the config file.
    pub fn resolve(&self, command: &str) -> Result<T, CliError> {
        let Some(path) = &self.config else {
            return Ok(round_trip(&self.opts));
        };
        let text = crate::io::read_text(path)?;
        let mut base: Value = crate::io::parse_json(path, &text)?;
        let Value::Object(map) = &mut base else {
            return Err(CliError::Input(format!("{}: config must be a JSON object", path.display())));
        };
        if let Some(c) = map.remove("command") {
            if c.as_str() != Some(command) {
                return Err(CliError::Input(format!("{}: config is for command {c}, not `{command}`", path.display())));
            }
        }
        let flags = serde_json::to_value(&self.opts).expect("flags serialize");
        overlay(&mut base, flags);
        serde_json::from_value(base).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }
}

fn round_trip<T: Serialize + serde::de::DeserializeOwned>(v: &T) -> T {
    serde_json::from_value(serde_json::to_value(v).expect("flags serialize")).expect("flags deserialize")
}

/// Copy non-null leaves of `top` onto `base`.
fn overlay(base: &mut Value, top: Value) {
    match (base, top) {
        (Value::Object(b), Value::Object(t)) => {
            for (k, v) in t {
                if v.is_null() {
                    continue;
                }
                match b.get_mut(&k) {
                    Some(slot @ Value::Object(_)) if v.is_object() => overlay(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (b, t) => {
            if !t.is_null() {
                *b = t;
            }
        }
    }
}

/// Optional extended reals: numbers or `"inf"`.
mod opt_real {
    use super::*;

    pub fn serialize<S: serde::Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => extended_real::serialize(x, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        #[derive(Deserialize)]
        struct W(#[serde(with = "extended_real")] f64);
        Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
    }
}

fn parse_real(s: &str) -> Result<f64, String> {
    extended_real::parse(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NetArg {
    Full,
    Dyadic,
    GridIntervals,
}

impl From<NetArg> for Net {
    fn from(n: NetArg) -> Net {
        match n {
            NetArg::Full => Net::Full,
            NetArg::Dyadic => Net::Dyadic,
            NetArg::GridIntervals => Net::GridIntervals,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightArg {
    Uniform,
    Paper,
}

impl From<WeightArg> for WeightVariant {
    fn from(w: WeightArg) -> WeightVariant {
        match w {
            WeightArg::Uniform => WeightVariant::Uniform,
            WeightArg::Paper => WeightVariant::Paper,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Space {
    /// Grand net space GN.
    Gn,
    /// Grand Lorentz space on f*.
    GlStar,
    /// Grand Lorentz space on f**.
    GlDstar,
    /// Classical net space N (theta must be 0).
    Net,
}

/// Where the function comes from.
#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FunctionArgs {
    /// Comma-separated cell values.
    #[arg(long, allow_hyphen_values = true)]
    pub values: Option<String>,
    /// JSON ({"n", "values"} or an array) or CSV file with cell values.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SearchArgs {
    #[arg(long)]
    pub eps_floor: Option<f64>,
    #[arg(long)]
    pub grid_points: Option<usize>,
    #[arg(long)]
    pub refine_rounds: Option<usize>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub quad_nodes: Option<usize>,
}

impl SearchArgs {
    pub fn build(&self) -> EpsilonSearch {
        let d = EpsilonSearch::default();
        EpsilonSearch {
            eps_floor: self.eps_floor.unwrap_or(d.eps_floor),
            grid_points: self.grid_points.unwrap_or(d.grid_points),
            refine_rounds: self.refine_rounds.unwrap_or(d.refine_rounds),
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
            quad_nodes: self.quad_nodes.unwrap_or(d.quad_nodes),
        }
    }
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NormArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, value_enum)]
    pub space: Option<Space>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    #[serde(with = "opt_real")]
    pub p: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    #[serde(with = "opt_real")]
    pub q: Option<f64>,
    /// Net for the gn and net spaces [default: full].
    #[arg(long, value_enum)]
    pub net: Option<NetArg>,
    #[arg(long, value_enum)]
    pub weight: Option<WeightArg>,
    /// Restrict the shift parameter to (0, eps_max].
    #[arg(long)]
    pub eps_max: Option<f64>,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AvgArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    /// [default: full]
    #[arg(long, value_enum)]
    pub net: Option<NetArg>,
    /// Rows per hyperbolic piece [default: 16].
    #[arg(long)]
    pub subdivisions: Option<usize>,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RearrangeArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EndpointArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub theta0: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    #[serde(with = "opt_real")]
    pub p0: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    #[serde(with = "opt_real")]
    pub q0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta1: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    #[serde(with = "opt_real")]
    pub p1: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    #[serde(with = "opt_real")]
    pub q1: Option<f64>,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridArgs {
    #[arg(long)]
    pub lambda_points: Option<usize>,
    #[arg(long)]
    pub scaling_points: Option<usize>,
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub t_points: Option<usize>,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KfuncArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[command(flatten)]
    pub endpoints: EndpointArgs,
    /// [default: grid-intervals]
    #[arg(long, value_enum)]
    pub net: Option<NetArg>,
    #[arg(long, value_enum)]
    pub weight: Option<WeightArg>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InterpArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long)]
    pub eta: Option<f64>,
    /// Fine index of the interpolation norm.
    #[arg(long)]
    pub q: Option<f64>,
    /// Common theta of both endpoints.
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    #[serde(with = "opt_real")]
    pub p0: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    #[serde(with = "opt_real")]
    pub q0: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    #[serde(with = "opt_real")]
    pub p1: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    #[serde(with = "opt_real")]
    pub q1: Option<f64>,
    /// [default: grid-intervals]
    #[arg(long, value_enum)]
    pub net: Option<NetArg>,
    #[arg(long, value_enum)]
    pub weight: Option<WeightArg>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssociateArg {
    /// L^{p'}, associate of L^p.
    LpDual,
    /// GL^{-theta1}_{p',inf}, associate of GL^{theta1}_{p,1}.
    GlWeak,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetFormArg {
    WeightedSup,
    Grand,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CertifyArgs {
    /// Kernel JSON: {"nx", "ny", "values"} with row i the x-cell.
    #[arg(long)]
    pub kernel: Option<PathBuf>,
    /// JSON array of extra test functions.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    /// [default: grid-intervals]
    #[arg(long, value_enum)]
    pub net: Option<NetArg>,
    #[arg(long, value_enum)]
    pub weight: Option<WeightArg>,
    /// [default: lp-dual]
    #[arg(long, value_enum)]
    pub associate: Option<AssociateArg>,
    /// [default: 2]
    #[arg(long)]
    pub p_prime: Option<f64>,
    /// Only for gl-weak [default: 0].
    #[arg(long)]
    pub theta1: Option<f64>,
    /// [default: weighted-sup]
    #[arg(long, value_enum)]
    pub target_form: Option<TargetFormArg>,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyArgs {
    /// `all` or a comma-separated list of suite ids (S1..S13).
    #[arg(long)]
    pub suite: Option<String>,
    /// Seed of the corpus and of the random kernels [default: 1].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Corpus size [default: 50].
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub n_min: Option<usize>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long, value_enum)]
    pub weight: Option<WeightArg>,
    /// Keep every case in the report, not just failures and worst cases.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub all_cases: Option<bool>,
    /// Full suite configuration (sweeps, tolerances); config file only.
    #[arg(skip)]
    pub settings: Option<SuiteConfig>,
    #[command(flatten)]
    pub search: SearchArgs,
}
