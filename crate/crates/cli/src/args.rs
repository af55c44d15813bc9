use std::path::PathBuf;

use avgop::lattice::{Scheme, SolverConfig};
use avgop::operators::{alpha_from_p, EikonalSign, OperatorKind, OperatorSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::CliError;

#[derive(Parser, Debug)]
#[command(name = "avgop", version, about = "Averaging operators on Z^d: axiom checks, Dirichlet solves and Liouville experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the axiom battery and classify the operator.
    Verify(VerifyArgs),
    /// Solve a Dirichlet problem on B_N.
    Solve(SolveArgs),
    /// Estimate the supremal neighbour ratio on growing boxes.
    Gamma(GammaArgs),
    /// Reproduce one of the explicit counterexamples.
    Counterexample(CounterexampleArgs),
    /// Check the local Harnack inequality and zero propagation on solved grids.
    Harnack(GridCheckArgs),
    /// Check the exponential growth bound on solved grids normalized at the origin.
    Growth(GridCheckArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify(_) => "verify",
            Command::Solve(_) => "solve",
            Command::Gamma(_) => "gamma",
            Command::Counterexample(_) => "counterexample",
            Command::Harnack(_) => "harnack",
            Command::Growth(_) => "growth",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OpName {
    Mean,
    PLaplacian,
    PHarmonious,
    Infinity,
    Median,
    EikonalPlus,
    EikonalMinus,
    #[value(alias = "weighted")]
    WeightedMean,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OperatorArgs {
    #[arg(long = "op", value_enum)]
    pub op: OpName,
    /// Exponent for p-laplacian; for p-harmonious it selects alpha = (p-2)/(p+d).
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Comma-separated slot weights for weighted-mean (length 2d).
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub weights: Option<Vec<f64>>,
    #[arg(long)]
    pub dim: Option<usize>,
}

impl OperatorArgs {
    /// Builds the operator, taking the dimension from `--dim`, then
    /// `fallback_dim`, then 2.
    pub fn build(&self, fallback_dim: Option<usize>) -> Result<OperatorSpec, CliError> {
        let dim = self.dim.or(fallback_dim).unwrap_or(2);
        let reject = |flag: &str, given: bool| {
            if given {
                Err(CliError::Usage(format!(
                    "--{flag} does not apply to --op {}",
                    self.op.to_possible_value().expect("no skipped variants").get_name()
                )))
            } else {
                Ok(())
            }
        };
        if self.op != OpName::PLaplacian && self.op != OpName::PHarmonious {
            reject("p", self.p.is_some())?;
        }
        if self.op != OpName::PHarmonious {
            reject("alpha", self.alpha.is_some())?;
        }
        if self.op != OpName::WeightedMean {
            reject("weights", self.weights.is_some())?;
        }
        let kind = match self.op {
            OpName::Mean => OperatorKind::Mean,
            OpName::PLaplacian => OperatorKind::PLaplacian {
                p: self
                    .p
                    .ok_or_else(|| CliError::Usage("--op p-laplacian needs --p".into()))?,
            },
            OpName::PHarmonious => {
                let alpha = match (self.alpha, self.p) {
                    (Some(a), None) => a,
                    (None, Some(p)) => alpha_from_p(p, dim)?,
                    (Some(_), Some(_)) => {
                        return Err(CliError::Usage("give either --alpha or --p, not both".into()))
                    }
                    (None, None) => {
                        return Err(CliError::Usage("--op p-harmonious needs --alpha or --p".into()))
                    }
                };
                OperatorKind::PHarmonious { alpha }
            }
            OpName::Infinity => OperatorKind::Infinity,
            OpName::Median => OperatorKind::Median,
            OpName::EikonalPlus => return Ok(OperatorSpec::eikonal(dim, EikonalSign::Plus)?),
            OpName::EikonalMinus => return Ok(OperatorSpec::eikonal(dim, EikonalSign::Minus)?),
            OpName::WeightedMean => {
                let weights = self.weights.clone().ok_or_else(|| {
                    CliError::Usage("--op weighted-mean needs --weights".into())
                })?;
                if let Some(d) = self.dim {
                    if weights.len() != 2 * d {
                        return Err(CliError::Usage(format!(
                            "--weights has {} entries but --dim {d} needs {}",
                            weights.len(),
                            2 * d
                        )));
                    }
                }
                return Ok(OperatorSpec::weighted_mean(weights)?);
            }
        };
        Ok(OperatorSpec::new(kind, dim)?)
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OutputArgs {
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
    /// Omit the timestamp field so repeated runs compare byte for byte.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeArg {
    GaussSeidel,
    Jacobi,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SolverArgs {
    /// Sup-norm residual at which relaxation stops.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 100_000)]
    pub max_sweeps: usize,
    #[arg(long, value_enum, default_value_t = SchemeArg::GaussSeidel)]
    pub scheme: SchemeArg,
}

impl SolverArgs {
    pub fn config(&self) -> SolverConfig {
        SolverConfig {
            tolerance: self.tol,
            max_sweeps: self.max_sweeps,
            scheme: match self.scheme {
                SchemeArg::GaussSeidel => Scheme::GaussSeidel,
                SchemeArg::Jacobi => Scheme::Jacobi,
            },
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub operator: OperatorArgs,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SolveArgs {
    #[command(flatten)]
    pub operator: OperatorArgs,
    /// Box radius; required unless --boundary is given.
    #[arg(long)]
    pub n: Option<usize>,
    /// Boundary JSON document; uniform [0, 1] data from --seed otherwise.
    #[arg(long)]
    pub boundary: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Where to write the solved grid as CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GammaArgs {
    #[command(flatten)]
    pub operator: OperatorArgs,
    /// Comma-separated box radii.
    #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "4,8,16")]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 32)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseArg {
    PSmall,
    PLarge,
    Weighted,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CounterexampleArgs {
    #[arg(long, value_enum)]
    pub case: CaseArg,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Weight on the +e_1 neighbour in the weighted case.
    #[arg(long)]
    pub a: Option<f64>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GridCheckArgs {
    #[command(flatten)]
    pub operator: OperatorArgs,
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Number of random boundary trials; ignored with --boundary.
    #[arg(long, default_value_t = 16)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub boundary: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}
