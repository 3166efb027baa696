use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug, Clone)]
#[command(name = "jsm", version, about = "Exact norms, plegma families, joint spreading model estimates and approximation gaps")]
pub struct Cli {
    /// Seed for every stochastic step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory for the JSON report and CSV tables.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for commands that evaluate independent inputs.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Evaluate the norm of one or more vector documents.
    Norm(NormArgs),
    #[command(subcommand)]
    Plegma(PlegmaCmd),
    /// Search for a subset on which a coloring of strict plegma families is constant.
    Ramsey(RamseyArgs),
    /// Stabilize norm tables over gated strict plegma families.
    Jsm(JsmArgs),
    /// Lower bound for the suppression constant of a generator's vectors.
    Ucs(UcsArgs),
    /// Build and check a James tree level block family.
    JtFamily(JtFamilyArgs),
    /// Check the special-vector inequalities of the two-line space.
    MrSpecial(MrSpecialArgs),
    #[command(subcommand)]
    Uals(UalsCmd),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceName {
    James,
    Jt,
    Mr,
    Calx,
    Mixed,
}

impl SpaceName {
    pub fn name(self) -> &'static str {
        match self {
            SpaceName::James => "james",
            SpaceName::Jt => "jt",
            SpaceName::Mr => "mr",
            SpaceName::Calx => "calx",
            SpaceName::Mixed => "mixed",
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct NormArgs {
    #[arg(long, value_enum)]
    pub space: SpaceName,
    #[arg(long, required = true, num_args = 1..)]
    pub vec: Vec<PathBuf>,
    /// Inner exponent for the mixed space.
    #[arg(long)]
    pub p: Option<String>,
    /// Outer exponent for the mixed space.
    #[arg(long)]
    pub q: Option<String>,
    /// Include the norming witness.
    #[arg(long)]
    pub witness: bool,
    /// Append-only σ registry log (mr only).
    #[arg(long)]
    pub registry: Option<PathBuf>,
    /// Weight rule: factorial or tower (mr only).
    #[arg(long, default_value = "factorial")]
    pub mu: String,
}

#[derive(Subcommand, Debug, Clone)]
pub enum PlegmaCmd {
    /// List plegma families over a ground set.
    Enum(PlegmaEnumArgs),
    /// Validate a family given as "1,3;2,4".
    Check(PlegmaCheckArgs),
    /// Apply a plegma shift to an interleaved vector.
    Shift(PlegmaShiftArgs),
}

#[derive(Args, Debug, Clone)]
pub struct PlegmaEnumArgs {
    /// "A..B" or a comma-separated list.
    #[arg(long)]
    pub ground: String,
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub strict: bool,
}

#[derive(Args, Debug, Clone)]
pub struct PlegmaCheckArgs {
    pub rows: String,
    #[arg(long)]
    pub strict: bool,
}

#[derive(Args, Debug, Clone)]
pub struct PlegmaShiftArgs {
    #[arg(long)]
    pub vec: PathBuf,
    #[arg(long)]
    pub family: String,
}

#[derive(Args, Debug, Clone)]
pub struct RamseyArgs {
    /// constant, parity, gt10 or first-mod3.
    #[arg(long)]
    pub color: String,
    #[arg(long)]
    pub ground: String,
    #[arg(long)]
    pub len: usize,
    #[arg(long, default_value_t = 2)]
    pub l: usize,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Maximum number of coloring evaluations.
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
}

#[derive(Args, Debug, Clone)]
pub struct JsmArgs {
    /// l1, l2, l3/2, l1-blocks:B, james-pair, jt-level:BANDS, or a JSON file.
    #[arg(long)]
    pub gen: String,
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub kmax: usize,
    #[arg(long)]
    pub ground: String,
    /// Comma-separated tolerances, one per k. Defaults to 2^-k.
    #[arg(long)]
    pub schedule: Option<String>,
    /// Random coefficient matrices per k on top of the sign patterns.
    #[arg(long, default_value_t = 20)]
    pub random: usize,
    /// Exponents for the CSV ratio columns.
    #[arg(long, default_value = "1,2")]
    pub ps: String,
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct UcsArgs {
    #[arg(long)]
    pub gen: String,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub l: usize,
    /// Ground set for the first strict family. Defaults to 1..l*k.
    #[arg(long)]
    pub ground: Option<String>,
    #[arg(long, default_value_t = 40)]
    pub random: usize,
    /// Fail when the constant exceeds this value.
    #[arg(long)]
    pub max: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct JtFamilyArgs {
    #[arg(long)]
    pub bands: usize,
    #[arg(long)]
    pub l: usize,
    /// Tree depth available to the construction.
    #[arg(long, default_value_t = 24)]
    pub depth: usize,
    /// Random coefficient vectors on top of all sign vectors.
    #[arg(long, default_value_t = 100)]
    pub random: usize,
}

#[derive(Args, Debug, Clone)]
pub struct MrSpecialArgs {
    /// Largest sequence length to check.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value = "factorial")]
    pub mu: String,
    #[arg(long)]
    pub registry: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum UalsCmd {
    /// Run one counterexample end to end.
    Verify(UalsVerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct UalsVerifyArgs {
    /// ell1, calx, mixed or rank-one.
    #[arg(long)]
    pub case: String,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long, default_value_t = 200)]
    pub probes: usize,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
}
