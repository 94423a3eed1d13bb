use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "fwx", version, about = "Fox-Wright pPsiq evaluator for the balance Delta = -1")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the function at one point, or at rho
    Eval(EvalArgs),
    /// Dump a coefficient sequence
    Coeffs(CoeffsArgs),
    /// Jump and average across the branch cut at x > rho
    Cut(CutArgs),
    /// Evaluate over a grid given in units of rho
    Scan(ScanArgs),
    /// Run the invariant battery
    Selftest(SelftestArgs),
}

/// Parameter vectors as comma-separated literals, e.g. `0.5,1.2-0.3i`.
#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// upper parameters a
    #[arg(long = "a", allow_hyphen_values = true)]
    pub a: String,
    /// upper scales A
    #[arg(long = "A", allow_hyphen_values = true)]
    pub big_a: String,
    /// lower parameters b (empty for none)
    #[arg(long = "b", default_value = "", allow_hyphen_values = true)]
    pub b: String,
    /// lower scales B (empty for none)
    #[arg(long = "B", default_value = "", allow_hyphen_values = true)]
    pub big_b: String,
}

#[derive(Debug, Clone, Args)]
pub struct Numerics {
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    /// relative truncation tolerance
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// cap on the terms of one series (default: FWX_MAX_TERMS or 100000)
    #[arg(long)]
    pub max_terms: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rep {
    Auto,
    Maclaurin,
    Residue,
    Singular,
    AtRho,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// point z (unscaled)
    #[arg(long, allow_hyphen_values = true, required_unless_present = "at_rho")]
    pub z: Option<String>,
    /// evaluate at z = rho through the summation formula
    #[arg(long, conflicts_with = "z")]
    pub at_rho: bool,
    #[arg(long, value_enum, default_value_t = Rep::Auto)]
    pub rep: Rep,
    #[command(flatten)]
    pub num: Numerics,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Seq {
    Q,
    L,
    QTheta,
    LTheta,
    V,
    VNorlund,
    R,
    W,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum)]
    pub seq: Seq,
    /// number of entries
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[command(flatten)]
    pub num: Numerics,
}

#[derive(Debug, Args)]
pub struct CutArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// point x > rho on the cut (unscaled)
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    #[command(flatten)]
    pub num: Numerics,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// `line:z0:z1:n` or `ring:center:radius:n`, in units of rho
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,
    #[arg(long, value_enum, default_value_t = Rep::Auto)]
    pub rep: Rep,
    /// append a root-test estimate of the W-series radius
    #[arg(long)]
    pub radius: bool,
    #[command(flatten)]
    pub num: Numerics,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// seed for the random parameter sets
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// number of random Gauss-type sets
    #[arg(long, default_value_t = 3)]
    pub random: usize,
    /// extra parameter set to validate and test
    #[arg(long = "a", allow_hyphen_values = true, requires_all = ["big_a"])]
    pub a: Option<String>,
    #[arg(long = "A", allow_hyphen_values = true)]
    pub big_a: Option<String>,
    #[arg(long = "b", allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long = "B", allow_hyphen_values = true)]
    pub big_b: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}
