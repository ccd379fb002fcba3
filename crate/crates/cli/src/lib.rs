//! Command-line front end: argument model, run plans and the exit-code
//! contract. `main.rs` only parses arguments and forwards here.
//!
//! Exit codes: `0` every verdict matches its declared expectation (or none
//! was declared), `1` some verdict is unexpected, `2` input error.

pub mod commands;
pub mod plan;
pub mod render;

use std::io::Write;

use clap::{Args, Parser, Subcommand};

pub use plan::{exit_code, Expectations, InputError};

#[derive(Parser, Debug)]
#[command(name = "gvir", version, about = "Exact identity checks for graded Virasoro-type algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run identity checks on a graded algebra.
    Check(CheckArgs),
    /// Coboundary operators and the coboundary solver.
    Cohomology(CohomologyArgs),
    /// Phase space, double, deformation and lifted endomorphisms.
    Extensions(ExtensionsArgs),
    /// The differential-operator algebra L_k.
    Lk(LkArgs),
    /// Finite structure tables and Burgers systems.
    Burgers(BurgersArgs),
    /// Parse an expression and echo its canonical form and AST.
    Parse {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
}

/// Where the algebra comes from: a config file or inline flags.
#[derive(Args, Debug, Clone, Default)]
pub struct SpecArgs {
    /// Config file with `f`, `f_theta`, `a`, `b`, `eps`, `scalar` keys.
    #[arg(long, conflicts_with_all = ["f", "f_theta", "a", "b", "eps", "scalar"])]
    pub config: Option<std::path::PathBuf>,
    /// Structure function f(i, j).
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<String>,
    /// Central part f_θ(i, j).
    #[arg(long = "f-theta", allow_hyphen_values = true)]
    pub f_theta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<String>,
    /// rational | dual
    #[arg(long)]
    pub scalar: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Maximum counterexamples kept per report.
    #[arg(long, default_value_t = gvir_core::report::DEFAULT_CAP)]
    pub cap: usize,
    /// text | json
    #[arg(long, default_value = "text")]
    pub format: String,
    /// `holds|fails|vacuous` for every report, or `name=verdict` (repeatable).
    #[arg(long, value_delimiter = ',')]
    pub expect: Vec<String>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Comma-separated: skew, jacobi, jacobi_tg, lsa, lsa_scalar, assoc, alternative,
    /// derivation, derivation_scalar, cocycle, hereditary, bianchi, rho_compat,
    /// rho_compat_difference, universal, filippov, bremner, bmod, bmod_jacobi,
    /// crosscheck, skew_system.
    #[arg(long, value_delimiter = ',', required = true)]
    pub checks: Vec<String>,
    /// Window `lo..hi` for every selected check.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Per-check window override `name=lo..hi` (repeatable).
    #[arg(long = "window-for", allow_hyphen_values = true)]
    pub window_for: Vec<String>,
    /// Shift `x0` for hereditary, bianchi and rho_compat.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub shift: i64,
    /// Endomorphism table for hereditary/rho_compat: lines `src dst value`, optional `theta value`.
    #[arg(long)]
    pub endo: Option<std::path::PathBuf>,
    /// Hereditary variant: scalar_shift | general_table | shift1_table | element_def.
    #[arg(long, default_value = "scalar_shift")]
    pub variant: String,
    /// 2-cochain for `cocycle`: lines `i j value`.
    #[arg(long)]
    pub psi: Option<std::path::PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct CohomologyArgs {
    /// delta1 | delta2 | solve | kernel
    pub action: String,
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, allow_hyphen_values = true, default_value = "-4..4")]
    pub window: String,
    /// 1-cochain file, lines `x value` (delta1).
    #[arg(long)]
    pub phi: Option<std::path::PathBuf>,
    /// 2-cochain file, lines `i j value` (delta2, solve).
    #[arg(long)]
    pub psi: Option<std::path::PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ExtensionsArgs {
    /// tstar | double | deform | rho1 | rho2 | hydro
    pub action: String,
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, allow_hyphen_values = true, default_value = "-3..3")]
    pub window: String,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub shift: i64,
    /// Constants `g,mu,nu` for rho2.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub rho2: Vec<String>,
    /// Structure table for hydro.
    #[arg(long)]
    pub table: Option<std::path::PathBuf>,
    /// ρ matrix for hydro: `dim N` then `j i value`.
    #[arg(long)]
    pub rho: Option<std::path::PathBuf>,
    /// plain | latex (hydro)
    #[arg(long, default_value = "plain")]
    pub style: String,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct LkArgs {
    #[arg(long, default_value_t = 6)]
    pub pmax: i64,
    #[arg(long = "bremner-pmax", default_value_t = 2)]
    pub bremner_pmax: i64,
    /// Subset of assoc,closed,commutator,ternary,filippov,bremner,derivation,ops,final.
    #[arg(long, value_delimiter = ',')]
    pub checks: Vec<String>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct BurgersArgs {
    /// check | emit | truncate
    pub action: String,
    /// Structure table: `dim N` then `j k i value`.
    #[arg(long)]
    pub table: Option<std::path::PathBuf>,
    /// plain | latex (emit)
    #[arg(long, default_value = "plain")]
    pub style: String,
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, allow_hyphen_values = true, default_value = "0..2")]
    pub window: String,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Runs a parsed command, writing to `out`/`err`; returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Check(a) => commands::check(&a, out),
        Command::Cohomology(a) => commands::cohomology(&a, out),
        Command::Extensions(a) => commands::extensions(&a, out),
        Command::Lk(a) => commands::lk(&a, out),
        Command::Burgers(a) => commands::burgers(&a, out),
        Command::Parse { expr } => commands::parse(&expr, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
