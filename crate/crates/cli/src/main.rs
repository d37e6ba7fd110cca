//! Command-line surface for the affine-spectra library.
//!
//! Exit codes: 0 = success, 1 = domain failure (invalid system, mismatch),
//! 2 = usage error.  All output is deterministic: floats are rounded to 12
//! significant digits and all orderings are canonical, so identical inputs
//! produce byte-identical bytes.

mod commands;
mod output;
mod reproduce;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use affine_spectra::cycles::{LConvention, SearchMode};
use affine_spectra::Side;

#[derive(Parser)]
#[command(
    name = "affine-spectra",
    version,
    about = "Exact-arithmetic tools for Hadamard digit systems: validation, extreme-cycle \
             detection, Fourier transforms of the dual fractal measures, spectral sums, \
             window densities, and one-shot reproduction of the reference results.",
    after_help = "Exit codes: 0 success, 1 domain failure, 2 usage error.\n\
                  The scan command parallelizes across p; set RAYON_NUM_THREADS to bound it."
)]
struct Cli {
    /// Write the output to this file instead of stdout.
    #[arg(short, long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    /// Measure μ_B, frequency candidates Γ(L) (cycles driven by L, tested against B).
    B,
    /// Measure μ_L, frequency candidates Γ(B) (cycles driven by B, tested against L).
    L,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::B => Side::B,
            SideArg::L => Side::L,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Exhaustive integer-lattice search (1-D expanding scales only).
    Lattice1d,
    /// Bounded canonical-word search (any dimension; sound, not exhaustive).
    Words,
}

impl From<ModeArg> for SearchMode {
    fn from(m: ModeArg) -> SearchMode {
        match m {
            ModeArg::Lattice1d => SearchMode::Lattice1D,
            ModeArg::Words => SearchMode::Words,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    /// L_p = {0, p}.
    ZeroP,
    /// L_p = {0, np/2} with R = 2n (requires an even scale).
    ZeroNp2,
}

impl From<ConventionArg> for LConvention {
    fn from(c: ConventionArg) -> LConvention {
        match c {
            ConventionArg::ZeroP => LConvention::ZeroP,
            ConventionArg::ZeroNp2 => LConvention::ZeroNpHalf,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CycleFormat {
    Csv,
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Hadamard digit-system axioms for a system file.
    Validate {
        /// System file: {"R": [[..]], "B": [[..]], "L": [[..]]}, entries
        /// integers or "num/den" strings.
        system: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Find extreme cycles for one side and report the basis verdict.
    Cycles {
        system: PathBuf,
        #[arg(long, value_enum)]
        side: SideArg,
        /// Search mode; defaults to the exhaustive lattice search when the
        /// system is one-dimensional with an expanding scale, else words.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Maximum cycle length for the word search.
        #[arg(long, default_value_t = 8, value_name = "N")]
        max_word_len: usize,
        /// Upgrade "no cycles found" to an ONB verdict (only valid when an
        /// external argument supplies sufficiency).
        #[arg(long)]
        assume_sufficient: bool,
        #[arg(long, value_enum, default_value_t = CycleFormat::Csv)]
        format: CycleFormat,
    },
    /// Scan the one-parameter family (R, B, L_p) over odd p, listing every
    /// extreme cycle as CSV rows (p,cycle_index,length,points,digits).
    Scan {
        /// Scalar scale R.
        #[arg(long, default_value_t = 4)]
        r: i64,
        /// Comma-separated rational digits for B.
        #[arg(long, default_value = "0,2")]
        b: String,
        #[arg(long, value_enum, default_value_t = ConventionArg::ZeroP)]
        l_convention: ConventionArg,
        #[arg(long, default_value_t = 1)]
        p_min: u64,
        /// Scan odd p in [p-min, p-max] (required unless --p-list is given).
        #[arg(long, conflicts_with = "p_list")]
        p_max: Option<u64>,
        /// Explicit comma-separated p values (overrides the range and the
        /// odd-only rule).
        #[arg(long, value_delimiter = ',')]
        p_list: Option<Vec<u64>>,
    },
    /// Partial spectral sum σ_level(t) = Σ_{γ ∈ Γ_level} |μ̂(t+γ)|².
    Sigma {
        system: PathBuf,
        #[arg(long, value_enum)]
        side: SideArg,
        /// Evaluation point: comma-separated rationals ("3/10", "0.3", "-2").
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long)]
        level: usize,
        /// Certified accuracy of the reported value.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
    /// Transform μ̂(t) of the side's measure, with a certified error bound.
    Muhat {
        system: PathBuf,
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Cross-check against the cosine-product closed form (two-digit
        /// one-dimensional systems only) and report the deviation.
        #[arg(long)]
        closed_form: bool,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
    /// Window counts and the ratio count/h^alpha along geometric radii
    /// (CSV: n,h,count,ratio).
    Density {
        /// "gamma1" (the set Γ({0,1}, 4)) or "scaled:q" for its dilation by
        /// a positive rational q (windows are dilated alike).
        #[arg(long, default_value = "gamma1")]
        set: String,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Evaluate windows h_n = 1 + 4 + … + 4^{n-1} for n = 1..=n-max.
        #[arg(long, default_value_t = 12)]
        n_max: usize,
    },
    /// Finite-depth attractor sample of the side's iterated function system
    /// (point-cloud CSV, exact rationals unless --float).
    Attractor {
        system: PathBuf,
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long)]
        depth: usize,
        /// Emit floats (12 significant digits) instead of exact rationals.
        #[arg(long)]
        float: bool,
    },
    /// Re-derive every reference result and compare against the golden
    /// fixtures; exit 0 only if all claims hold.
    Reproduce {
        /// List the claims without running them.
        #[arg(long)]
        list: bool,
        /// Directory holding the golden fixtures (defaults to the fixtures
        /// directory of this crate's source checkout).
        #[arg(long, value_name = "DIR")]
        fixture_dir: Option<PathBuf>,
    },
}

/// A command's success output plus the exit code it asks for (validate and
/// reproduce report failures through the exit code while still printing).
pub struct CmdOutput {
    pub text: String,
    pub code: u8,
}

impl CmdOutput {
    fn ok(text: String) -> Self {
        CmdOutput { text, code: 0 }
    }
}

pub enum CliError {
    /// Invalid system, impossible computation, mismatch: exit 1.
    Domain(String),
    /// Malformed flags or arguments: exit 2.
    Usage(String),
}

fn run(cli: &Cli) -> Result<CmdOutput, CliError> {
    match &cli.command {
        Command::Validate { system, format } => commands::cmd_validate(system, *format),
        Command::Cycles {
            system,
            side,
            mode,
            max_word_len,
            assume_sufficient,
            format,
        } => commands::cmd_cycles(
            system,
            (*side).into(),
            mode.map(Into::into),
            *max_word_len,
            *assume_sufficient,
            *format,
        ),
        Command::Scan {
            r,
            b,
            l_convention,
            p_min,
            p_max,
            p_list,
        } => commands::cmd_scan(*r, b, (*l_convention).into(), *p_min, *p_max, p_list.as_deref()),
        Command::Sigma {
            system,
            side,
            t,
            level,
            tol,
            format,
        } => commands::cmd_sigma(system, (*side).into(), t, *level, *tol, *format),
        Command::Muhat {
            system,
            side,
            t,
            tol,
            closed_form,
            format,
        } => commands::cmd_muhat(system, (*side).into(), t, *tol, *closed_form, *format),
        Command::Density { set, alpha, n_max } => commands::cmd_density(set, *alpha, *n_max),
        Command::Attractor {
            system,
            side,
            depth,
            float,
        } => commands::cmd_attractor(system, (*side).into(), *depth, *float),
        Command::Reproduce { list, fixture_dir } => {
            reproduce::cmd_reproduce(*list, fixture_dir.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, &out.text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
