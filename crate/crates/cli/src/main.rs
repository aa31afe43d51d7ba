use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod render;

#[derive(Parser, Debug)]
#[command(name = "aoukit", version, about = "Exact computations in finite-dimensional AOU spaces")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Epsilon,
    Pi,
    Both,
}

/// A space argument is a file path or a builtin such as `linf(2)`.
#[derive(Subcommand, Debug)]
pub enum Command {
    /// Order unit, Archimedean and pointedness checks with witnesses.
    Validate { space: PathBuf },
    /// Order norm of a vector, or the interval bound of a functional.
    Norm {
        space: PathBuf,
        /// Vector as JSON, e.g. "[1,-1]" or '["1/2","3"]'.
        #[arg(long, conflicts_with = "functional", required_unless_present = "functional")]
        vector: Option<String>,
        /// Functional as JSON; reports min over [0, e] and its dual norm.
        #[arg(long)]
        functional: Option<String>,
        /// Tolerance for the functional bound.
        #[arg(long, requires = "functional", default_value = "0")]
        epsilon: String,
    },
    /// Extreme states and the induced embedding into linf(k).
    States { space: PathBuf },
    /// Quotient by the lineality of the closed cone.
    Archimedeanize { space: PathBuf },
    /// Order-quotient check of a map, or order-ideal check and quotient of a
    /// space by `--ideal`.
    Quotient {
        file: PathBuf,
        /// Basis of the subspace as JSON rows.
        #[arg(long)]
        ideal: Option<String>,
    },
    /// Unitality, positivity, order embedding and isometry of a map.
    CheckMap { map: PathBuf },
    /// Unital positive extension from a subspace to the whole space.
    Extend {
        /// Domain of the extension.
        #[arg(long)]
        space: PathBuf,
        /// Codomain.
        #[arg(long)]
        target: PathBuf,
        /// Basis of the subspace as JSON rows in the coordinates of `--space`.
        #[arg(long)]
        basis: String,
        /// Prescribed images of the basis as JSON rows.
        #[arg(long)]
        values: String,
    },
    /// Closest unital positive map into linf(k) by Jordan splitting.
    Pert { map: PathBuf },
    /// Positive perturbation of a unital map with the dimension bound.
    Perturb { map: PathBuf },
    /// Auerbach basis of the order-norm space.
    Auerbach { space: PathBuf },
    /// Membership of a tensor element in the injective and projective cones.
    TensorMember {
        tensor: PathBuf,
        #[arg(long, value_enum, default_value_t = KindArg::Both)]
        kind: KindArg,
    },
    /// Injective Banach norm of a tensor element.
    TensorNorm { tensor: PathBuf },
    /// Nuclearity of one space, cross-checked on a partner battery.
    Nuclear { space: PathBuf },
    /// Equality of the injective and projective cones for a pair.
    NuclearPair { left: PathBuf, right: PathBuf },
    /// Approximate factorization of the identity through linf(k).
    Factorize {
        space: PathBuf,
        /// Query vectors as JSON rows; defaults to the basis and the unit.
        #[arg(long)]
        vectors: Option<String>,
        #[arg(long, default_value = "0")]
        epsilon: String,
    },
    /// Reproduce the worked examples.
    Examples {
        #[arg(value_enum)]
        set: ExampleSet,
    },
    /// Canonical serialization of a space, map or tensor document.
    Roundtrip { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExampleSet {
    Paper,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(&cli.command) {
        Ok(out) => {
            emit(&out.render(cli.format));
            ExitCode::from(out.exit_code())
        }
        Err(f) => {
            if cli.format == Format::Json {
                emit(&serde_json::to_string_pretty(&f.to_json()).expect("JSON values serialize"));
            }
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}
