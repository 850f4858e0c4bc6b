use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "conelab", version, about = "Exact lattice, cone and inflation computations on rational and ruled surfaces")]
pub struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Render classes as `(a; b1, ..)` with `b` in the `aH - Σ bi Ei` convention.
    #[arg(long, global = true)]
    pub paper_signs: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate embedded-sphere classes of a given square.
    Enumerate(EnumerateArgs),
    /// Nine-square representations with pairwise congruent entries mod 3.
    Squares(SquaresArgs),
    #[command(subcommand)]
    Cremona(CremonaCmd),
    #[command(subcommand)]
    Cone(ConeCmd),
    /// Smallest t with t(-K) - ω pairing non-negatively with every curve.
    NefThreshold(NefArgs),
    /// Inflate a start class onto rays of the positive dual of a configuration.
    Inflate(InflateArgs),
    #[command(subcommand)]
    Config(ConfigCmd),
    #[command(subcommand)]
    Sw(SwCmd),
    /// Run the acceptance criteria.
    VerifyPaper(VerifyArgs),
}

/// Where the ambient lattice comes from: `--surface`, `--k`, or inferred
/// from the largest `Ei` in the literals (rational).
#[derive(Debug, Args, Clone, Default)]
pub struct SurfaceArg {
    /// `rational:k=3`, `ruled:h=2,k=1`, `ruled-nontrivial:h=1`.
    #[arg(long)]
    pub surface: Option<String>,
    /// Shorthand for `--surface rational:k=K`.
    #[arg(long, conflicts_with = "surface")]
    pub k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub surface: SurfaceArg,
    #[arg(long, allow_hyphen_values = true)]
    pub square: i64,
    #[arg(long, default_value_t = 0)]
    pub genus: i64,
    /// Cut-off for the infinite `a <= 0` families (and coefficient bound on ruled surfaces).
    #[arg(long, default_value_t = 3)]
    pub nbound: u32,
}

#[derive(Debug, Args)]
pub struct SquaresArgs {
    #[arg(long)]
    pub total: u64,
    /// Also list representations whose entries do not sum to zero.
    #[arg(long)]
    pub any_sum: bool,
}

#[derive(Debug, Subcommand)]
pub enum CremonaCmd {
    /// Order and reflect until reduced, cyclic, or out of budget.
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        #[command(flatten)]
        surface: SurfaceArg,
    },
    /// Decide whether two classes lie in one Cremona orbit.
    Equiv {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[command(flatten)]
        surface: SurfaceArg,
    },
}

#[derive(Debug, Args)]
pub struct RaysInput {
    /// Comma-separated class literals.
    #[arg(long, allow_hyphen_values = true)]
    pub rays: Option<String>,
    /// Cone JSON: {"surface": .., "rays": [..], "facets": [..]}.
    #[arg(long, conflicts_with = "rays")]
    pub rays_file: Option<PathBuf>,
    #[command(flatten)]
    pub surface: SurfaceArg,
}

#[derive(Debug, Subcommand)]
pub enum ConeCmd {
    /// Dual cone: rays, lineality and facets.
    Dual(RaysInput),
    /// Cone generated by the -1 classes' dual inside the forward cone.
    Ksymp {
        #[arg(long)]
        k: usize,
    },
    /// Membership of a class, with an exact certificate.
    Member {
        #[command(flatten)]
        input: RaysInput,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// Check the K-negative extremal rays of the generated cone.
    Audit(RaysInput),
}

#[derive(Debug, Args)]
pub struct CurvesInput {
    /// Comma-separated class literals.
    #[arg(long, allow_hyphen_values = true)]
    pub curves: Option<String>,
    /// Configuration JSON.
    #[arg(long, conflicts_with = "curves")]
    pub curves_file: Option<PathBuf>,
    #[command(flatten)]
    pub surface: SurfaceArg,
}

#[derive(Debug, Args)]
pub struct NefArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub omega: String,
    #[command(flatten)]
    pub curves: CurvesInput,
}

#[derive(Debug, Args)]
pub struct InflateArgs {
    /// Configuration JSON.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Comma-separated curve literals instead of a file.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "config")]
    pub curves: Option<String>,
    #[command(flatten)]
    pub surface: SurfaceArg,
    /// Start class; defaults to the sum of the dual rays.
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<String>,
    /// Target ray of the positive dual.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "all")]
    pub ray: Option<String>,
    /// Achieve every ray (the default without `--ray`).
    #[arg(long)]
    pub all: bool,
    /// Also run N alternating maximal inflations (needs `--ray` with two supporting curves).
    #[arg(long, requires = "ray")]
    pub trace: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum ConfigCmd {
    /// Classification, dual and -1 coverage checks.
    Validate { file: PathBuf },
    /// Contract a -1 class and push the configuration down.
    Blowdown {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Emit a configuration catalog (`cp2+1`, `cp2+2`, `cp2+3`).
    Catalog {
        family: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum SwCmd {
    /// Certify non-vanishing of the invariant for a class.
    Cert {
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        #[command(flatten)]
        surface: SurfaceArg,
    },
    /// The certified set used by the configuration checks.
    Set {
        #[command(flatten)]
        surface: SurfaceArg,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Criterion group: all, enumeration, cp2+2, cones, inflation, configurations, cp2+3, cremona, swcert, ruled.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Include per-criterion timings (makes output non-reproducible).
    #[arg(long)]
    pub timings: bool,
}
