use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

use commands::Report;

/// Exact checks on finite groupoids, bibundles, convolution algebras,
/// symplectic relations and noncommutative-torus modules.
///
/// Reports are JSON on stdout, a short summary goes to stderr. Exit code 0
/// means every check passed, 1 that a check failed, 2 an input or usage
/// error. GROUPLIKE_BUDGET caps the 2-isomorphism search.
#[derive(Parser, Debug)]
#[command(name = "grouplike", version)]
struct Cli {
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    /// Built-in stacky group: `trivial:N`, `bz:N` or `quotient`.
    #[arg(long, conflicts_with = "file")]
    pub family: Option<String>,
    /// Stacky-group JSON with `groupoid`, `em`, `ee`, `einv`.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ClassArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub p1: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub q1: i64,
    /// Angle expression over `lam`, `pi`, `tau` and free names.
    #[arg(long, default_value = "a1", allow_hyphen_values = true)]
    pub alpha1: String,
    #[arg(long, allow_hyphen_values = true)]
    pub p2: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub q2: i64,
    #[arg(long, default_value = "a2", allow_hyphen_values = true)]
    pub alpha2: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the axioms of a groupoid or bibundle file.
    Validate { path: PathBuf },
    /// Compose two right principal bibundles.
    ComposeBibundles { first: PathBuf, second: PathBuf },
    /// Look for Morita invariants that differ; verify a bibundle if given.
    Morita {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        bibundle: Option<PathBuf>,
    },
    /// Check the stacky-group diagrams up to 2-isomorphism.
    StackyCheck {
        #[command(flatten)]
        source: FamilyArgs,
        /// Mutate one entry of Em with this seed before checking.
        #[arg(long)]
        mutate: Option<u64>,
    },
    /// Build the hopfish bimodules and check coassociativity and counit.
    Hopfish {
        #[command(flatten)]
        source: FamilyArgs,
    },
    /// Tensor two right modules through the coproduct bimodule.
    TensorMod {
        #[command(flatten)]
        source: FamilyArgs,
        /// `point:K` or `char:A`.
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Module the product should be isomorphic to.
        #[arg(long)]
        expect: Option<String>,
    },
    /// Classify the tensor product of two noncommutative-torus modules.
    NctTensor {
        #[command(flatten)]
        classes: ClassArgs,
    },
    /// Compare the classifier with circle composition.
    OracleCompare {
        /// Sweep all canonical coprime classes with |p|, |q| up to this bound.
        #[arg(long, conflicts_with_all = ["p1", "q1", "p2", "q2"])]
        sweep: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        p1: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        q1: Option<i64>,
        #[arg(long, default_value = "a1", allow_hyphen_values = true)]
        alpha1: String,
        #[arg(long, allow_hyphen_values = true)]
        p2: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        q2: Option<i64>,
        #[arg(long, default_value = "a2", allow_hyphen_values = true)]
        alpha2: String,
    },
    /// Zig-zag identities for ev and coev of a symplectic space.
    Zigzag {
        /// Symplectic JSON; relations named `ev`, `coev` replace the defaults.
        #[arg(long, conflicts_with_all = ["dim", "random"])]
        file: Option<PathBuf>,
        /// Standard space of this dimension.
        #[arg(long)]
        dim: Option<usize>,
        /// Random rational form of this dimension (uses --seed).
        #[arg(long)]
        random: Option<usize>,
    },
    /// Draw circles `p θ1 + q θ2 = α` on the torus as SVG.
    Plot {
        /// `p,q,alpha`; repeatable.
        #[arg(long = "circle", required = true, allow_hyphen_values = true)]
        circles: Vec<String>,
        /// Draw the components of the composition of exactly two circles.
        #[arg(long)]
        compose: bool,
        #[arg(long)]
        svg: PathBuf,
        /// Numeric stand-in for λ.
        #[arg(long)]
        lambda: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let report = commands::run(&cli.command, cli.seed);
    emit(report, cli.output.as_ref())
}

fn emit(report: Report, output: Option<&PathBuf>) -> ExitCode {
    let text = serde_json::to_string_pretty(&report.json).expect("json") + "\n";
    match output {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                eprintln!("error: cannot write {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    eprintln!("{}", report.summary);
    ExitCode::from(report.code)
}
