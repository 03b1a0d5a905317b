use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "dipe", version, about = "Distributed inner-product estimation laboratory")]
#[command(args_override_self = true)]
pub struct Cli {
    /// JSON file of flag defaults, keyed by subcommand (and "global"); also read from DIPE_CONFIG.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub out: Format,

    /// Omit the timestamp line, making output byte-reproducible.
    #[arg(long, global = true)]
    pub no_timestamp: bool,

    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    Pretty,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Moment coefficients A, C, B for state pairs.
    Coeffs(CoeffsArgs),
    /// Run the shared-unitary or shadow protocol and compare variances.
    Simulate(SimulateArgs),
    /// Run a verification suite; exits 1 on failure.
    Verify(VerifyArgs),
    /// Sufficient copy budgets.
    Plan(PlanArgs),
    /// Coefficient sweeps over families, sizes and ensembles.
    Bench(BenchArgs),
}

pub const SUBCOMMANDS: [&str; 5] = ["coeffs", "simulate", "verify", "plan", "bench"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleArg {
    Clifford,
    Haar,
    Both,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct McArgs {
    /// Monte Carlo samples when no exact path applies.
    #[arg(long, default_value_t = 20_000)]
    pub mc_samples: usize,
    #[arg(long, default_value_t = 1)]
    pub mc_seed: u64,
    /// Fail (or skip) instead of falling back to Monte Carlo.
    #[arg(long)]
    pub no_mc: bool,
    /// Allow the generic fourth-moment contraction up to 5 qubits.
    #[arg(long)]
    pub extended_generic: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CoeffsArgs {
    /// State family for rho, e.g. ghz:4, w:5, chain:5:3, depol:plusprod:4:0.3.
    #[arg(long, action = ArgAction::Set, value_delimiter = ',', required = true)]
    pub family: Vec<String>,
    /// Family for sigma; defaults to rho.
    #[arg(long)]
    pub sigma: Option<String>,
    /// Resize sized families over an inclusive range, e.g. 2..6.
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long, value_enum, default_value_t = EnsembleArg::Both)]
    pub ensemble: EnsembleArg,
    #[command(flatten)]
    pub mc: McArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolArg {
    Clifford,
    Haar,
    Shadow,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SimulateArgs {
    #[arg(long)]
    pub rho: String,
    #[arg(long)]
    pub sigma: Option<String>,
    #[arg(long, value_enum, default_value_t = ProtocolArg::Haar)]
    pub ensemble: ProtocolArg,
    /// Unitary blocks N_U.
    #[arg(long, default_value_t = 1000)]
    pub nu: usize,
    /// Shots per block N_M.
    #[arg(long, default_value_t = 1)]
    pub nm: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Local depolarizing strength applied to both parties.
    #[arg(long)]
    pub noise: Option<f64>,
    /// Shadow repetitions for the empirical variance (shadow ensemble only).
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
    /// Include per-block values in JSON output.
    #[arg(long)]
    pub emit_blocks: bool,
    #[command(flatten)]
    pub mc: McArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Kernel,
    Operators,
    Twirl,
    Bounds,
    Certificate,
    Shadow,
    Variance,
    All,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Qubit count (kernel: 1..=8; bounds: 1 or 2 for the stabilizer enumeration).
    #[arg(long)]
    pub n: Option<usize>,
    /// Certificate families: all or a list of ghz, w, belldimer, product.
    #[arg(long, action = ArgAction::Set, value_delimiter = ',', default_value = "all")]
    pub families: Vec<String>,
    #[arg(long, default_value_t = 12)]
    pub nmax: usize,
    /// Monte Carlo size: twirl samples, random states (bounds), blocks or repetitions.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 2026)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeArg {
    Clifford,
    Haar,
    Conjectured,
    Shadow,
    State,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PlanArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long, value_enum, default_value_t = RegimeArg::Clifford)]
    pub regime: RegimeArg,
    /// State regime: A coefficient (or use --family).
    #[arg(long)]
    pub a: Option<f64>,
    /// State regime: B coefficient.
    #[arg(long)]
    pub b: Option<f64>,
    /// State regime: C coefficient; defaults to 2(7/4)^n.
    #[arg(long)]
    pub c: Option<f64>,
    /// State regime: take A, C, B from an identical pair of this family.
    #[arg(long)]
    pub family: Option<String>,
    /// Ensemble whose B is used with --family.
    #[arg(long, value_enum, default_value_t = EnsembleArg::Haar)]
    pub ensemble: EnsembleArg,
    /// Print the scaling table instead of a single plan.
    #[arg(long)]
    pub table: bool,
    /// Table sizes, inclusive range.
    #[arg(long, default_value = "1..10")]
    pub ns: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sweep {
    /// Families over an n range.
    Families,
    /// Depolarized family over a p grid on [0, 1].
    Purity,
    /// Chain graphs chain:n:m over m = 0..n-1.
    Chain,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = Sweep::Families)]
    pub sweep: Sweep,
    /// Family templates: plusprod, ghz, w, belldimer, chain (m = n-1), haar; or full specs.
    #[arg(long, action = ArgAction::Set, value_delimiter = ',', default_value = "plusprod,ghz,w,belldimer")]
    pub families: Vec<String>,
    #[arg(long, default_value = "1..6")]
    pub n: String,
    #[arg(long, action = ArgAction::Set, value_delimiter = ',', default_value = "clifford,haar")]
    pub ensembles: Vec<String>,
    /// Purity sweep: base family at fixed size.
    #[arg(long, default_value = "ghz:3")]
    pub family: String,
    /// Purity sweep: number of equally spaced p values on [0, 1].
    #[arg(long, default_value_t = 11)]
    pub p_steps: usize,
    /// Seed for haar templates.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub mc: McArgs,
}
