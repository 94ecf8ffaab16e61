use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use multinil::formats::emit_map;
use multinil::freenil::{VerifyOptions, DEFAULT_MAX_BASIS_TREES};
use multinil_cli::{
    check, invert, jacobian_report, load_algebra, load_map, verify_theorem, CheckBounds, CliError, JacobianInput,
    Outcome, Status, TheoremTarget,
};

#[derive(Parser)]
#[command(name = "multinil", version, about = "Exact nil-index and theorem checks for symmetric multilinear algebras")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Worker threads for row reduction and independent checks; 0 picks the core count.
    #[arg(long, global = true, env = "MULTINIL_WORKERS", default_value_t = 0)]
    workers: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Engel, Yagzhev and Gerstenhaber indices of an algebra file.
    Check {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
        engel_max: u64,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(2..))]
        yagzhev_max: u64,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
        gerst_max: u64,
    },
    /// Truncated inverse of a map F = Id − H, checked by composition.
    Invert {
        #[arg(long)]
        map: PathBuf,
        /// Truncation degree; defaults to d times the top of the Yagzhev window.
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value_t = 8)]
        p_max: usize,
        /// Also write the inverse as a map file.
        #[arg(long)]
        inverse_out: Option<PathBuf>,
    },
    /// Engel nilpotence from Yagzhev nilpotence in the free algebra.
    VerifyTheorem {
        /// Arity of the free algebra
        #[arg(short = 'd', required_unless_present = "binary_claim")]
        d: Option<usize>,
        /// Yagzhev index assumed: T_q = 0 on the window [p, d(p−1)+1]
        #[arg(short = 'p', required_unless_present = "binary_claim")]
        p: Option<usize>,
        /// Binary algebras with T_4 = T_5 = 0: Gerstenhaber index 6, 5-Engel.
        #[arg(long, conflicts_with_all = ["d", "p"])]
        binary_claim: bool,
        /// Largest tree basis to reduce before reporting "not attempted".
        #[arg(long, default_value_t = DEFAULT_MAX_BASIS_TREES)]
        max_basis_trees: usize,
        /// Skip the modular row selection and eliminate over the rationals throughout.
        #[arg(long)]
        no_prescreen: bool,
    },
    /// Jacobian matrix and determinant of F = Id − H.
    Jacobian {
        #[arg(long, conflicts_with = "map", required_unless_present = "map")]
        algebra: Option<PathBuf>,
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        p_max: usize,
    },
}

fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Check {
            algebra,
            engel_max,
            yagzhev_max,
            gerst_max,
        } => {
            let alg = load_algebra(&algebra)?;
            check(
                &alg,
                CheckBounds {
                    engel_max: engel_max as usize,
                    yagzhev_max: yagzhev_max as usize,
                    gerst_max: gerst_max as usize,
                },
            )
        }
        Command::Invert {
            map,
            degree,
            p_max,
            inverse_out,
        } => {
            let f = load_map(&map)?;
            let (outcome, g) = invert(&f, degree, p_max)?;
            if let Some(path) = inverse_out {
                write(&path, &emit_map(&g))?;
            }
            Ok(outcome)
        }
        Command::VerifyTheorem {
            d,
            p,
            binary_claim,
            max_basis_trees,
            no_prescreen,
        } => {
            let target = if binary_claim {
                TheoremTarget::BinaryClaim
            } else {
                TheoremTarget::Instance {
                    d: d.expect("required by clap"),
                    p: p.expect("required by clap"),
                }
            };
            let opts = VerifyOptions {
                max_basis_trees,
                prescreen: !no_prescreen,
            };
            verify_theorem(target, &opts)
        }
        Command::Jacobian { algebra, map, p_max } => {
            let input = match (algebra, map) {
                (Some(a), _) => JacobianInput::Algebra(load_algebra(&a)?),
                (None, Some(m)) => JacobianInput::Map(load_map(&m)?),
                (None, None) => unreachable!("clap requires one input"),
            };
            jacobian_report(input, p_max)
        }
    }
}

fn write(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.common.workers).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start workers: {e}");
            return ExitCode::from(Status::InputError.code() as u8);
        }
    };
    let result = pool.install(|| run(cli.command)).and_then(|outcome| {
        let body = match cli.common.format {
            Format::Text => &outcome.text,
            Format::Json => &outcome.document,
        };
        match &cli.common.out {
            Some(path) => write(path, body)?,
            None => print!("{body}"),
        }
        Ok(outcome.status)
    });
    let status = result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        Status::InputError
    });
    ExitCode::from(status.code() as u8)
}
