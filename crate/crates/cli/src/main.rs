//! `posetcoh`: homotopy and net cohomology of finite posets from the
//! command line.

mod cohomology;
mod generate;
mod input;
mod report;
mod sectors;
mod topology;

use clap::{Args, Parser, Subcommand};
use input::CliError;
use posetcoh::Tolerances;
use report::{Report, Row};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Debug, Parser)]
#[command(
    name = "posetcoh",
    version,
    about = "Homotopy and net cohomology of finite posets"
)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct Opts {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Numerical tolerance for unitary identities (algebra checks use ten times this).
    #[arg(long, global = true, value_name = "FLOAT")]
    tol: Option<f64>,
    /// Move bound for the homotopy witness search.
    #[arg(long, global = true, value_name = "INT")]
    depth: Option<usize>,
    /// Seed for commands that draw fixture parameters.
    #[arg(long, global = true, value_name = "INT")]
    seed: Option<u64>,
    /// Record wall time in the report.
    #[arg(long, global = true)]
    timing: bool,
}

/// Resolved options shared by every command.
#[derive(Debug, Clone)]
pub struct Settings {
    pub tol: Tolerances,
    pub depth: usize,
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SectorInputs {
    /// Net JSON; defaults to the full algebra of the cocycle dimension on every element.
    #[arg(long)]
    net: Option<PathBuf>,
    /// Puncture family JSON.
    #[arg(long)]
    punctures: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the order and disjointness axioms, and a net if given.
    Validate {
        poset: PathBuf,
        #[arg(long)]
        net: Option<PathBuf>,
    },
    /// Presentation, simplification and abelianization of the first homotopy group.
    Pi1 {
        poset: PathBuf,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
    },
    /// Decide homotopy of path pairs.
    Homotopy { poset: PathBuf, paths: PathBuf },
    /// Cocycle identity, unitarity, locality and path-independence.
    CocycleCheck {
        poset: PathBuf,
        cocycle: PathBuf,
        #[arg(long)]
        net: Option<PathBuf>,
    },
    /// Sort cocycles into unitary equivalence classes.
    Classify {
        poset: PathBuf,
        #[arg(required = true)]
        cocycles: Vec<PathBuf>,
        #[arg(long)]
        net: Option<PathBuf>,
    },
    /// The representation of the first homotopy group induced by a cocycle.
    Rep {
        poset: PathBuf,
        cocycle: PathBuf,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
    },
    /// Restrict a cocycle to a refinement, extend it back and check the equivalence.
    Refine {
        poset: PathBuf,
        /// JSON object with "members" and optionally "choice".
        sub: PathBuf,
        cocycle: PathBuf,
        /// Second cocycle, the target of --arrow.
        #[arg(long, requires = "arrow")]
        target: Option<PathBuf>,
        /// Intertwiner from the cocycle to --target.
        #[arg(long, requires = "target")]
        arrow: Option<PathBuf>,
        /// Write the extended cocycle here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Glue local cocycles over a puncture family.
    Glue {
        poset: PathBuf,
        #[arg(long)]
        punctures: PathBuf,
        /// Local cocycles keyed by puncture id.
        #[arg(long, conflicts_with = "cocycle", required_unless_present = "cocycle")]
        locals: Option<PathBuf>,
        /// Restrict this cocycle to the punctures and glue it back.
        #[arg(long)]
        cocycle: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Tensor product of two sector cocycles.
    Tensor {
        poset: PathBuf,
        z: PathBuf,
        z1: PathBuf,
        #[command(flatten)]
        inputs: SectorInputs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The symmetry between two sector cocycles.
    Symmetry {
        poset: PathBuf,
        z: PathBuf,
        z1: PathBuf,
        #[command(flatten)]
        inputs: SectorInputs,
        /// Also report the symmetry operator at this element.
        #[arg(long)]
        at: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Statistics parameter, dimension and statistical phase of a sector cocycle.
    Statistics {
        poset: PathBuf,
        z: PathBuf,
        #[command(flatten)]
        inputs: SectorInputs,
    },
    /// Conjugate of a simple sector cocycle.
    Conjugate {
        poset: PathBuf,
        z: PathBuf,
        #[command(flatten)]
        inputs: SectorInputs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the tensor, symmetry, left inverse and conjugation axioms on a winding battery.
    Axioms {
        poset: PathBuf,
        #[command(flatten)]
        inputs: SectorInputs,
        /// Winding angles; drawn from the seed when absent.
        #[arg(long = "theta", allow_negative_numbers = true)]
        thetas: Vec<f64>,
    },
    /// Generate fixtures.
    Generate {
        #[command(subcommand)]
        kind: generate::Kind,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Pi1 { .. } => "pi1",
            Command::Homotopy { .. } => "homotopy",
            Command::CocycleCheck { .. } => "cocycle-check",
            Command::Classify { .. } => "classify",
            Command::Rep { .. } => "rep",
            Command::Refine { .. } => "refine",
            Command::Glue { .. } => "glue",
            Command::Tensor { .. } => "tensor",
            Command::Symmetry { .. } => "symmetry",
            Command::Statistics { .. } => "statistics",
            Command::Conjugate { .. } => "conjugate",
            Command::Axioms { .. } => "axioms",
            Command::Generate { .. } => "generate",
        }
    }
}

fn dispatch(command: Command, s: &mut Settings) -> Result<Vec<Row>, CliError> {
    match command {
        Command::Validate { poset, net } => topology::validate(&poset, net.as_deref(), s),
        Command::Pi1 { poset, basepoint } => topology::pi1(&poset, basepoint),
        Command::Homotopy { poset, paths } => topology::homotopy(&poset, &paths, s),
        Command::CocycleCheck {
            poset,
            cocycle,
            net,
        } => cohomology::check(&poset, &cocycle, net.as_deref(), s),
        Command::Classify {
            poset,
            cocycles,
            net,
        } => cohomology::classify(&poset, &cocycles, net.as_deref(), s),
        Command::Rep {
            poset,
            cocycle,
            basepoint,
        } => cohomology::rep(&poset, &cocycle, basepoint, s),
        Command::Refine {
            poset,
            sub,
            cocycle,
            target,
            arrow,
            output,
        } => cohomology::refine(
            &poset,
            &sub,
            &cocycle,
            target.as_deref().zip(arrow.as_deref()),
            output.as_deref(),
            s,
        ),
        Command::Glue {
            poset,
            punctures,
            locals,
            cocycle,
            output,
        } => cohomology::glue(
            &poset,
            &punctures,
            locals.as_deref(),
            cocycle.as_deref(),
            output.as_deref(),
            s,
        ),
        Command::Tensor {
            poset,
            z,
            z1,
            inputs,
            output,
        } => sectors::tensor(&poset, &z, &z1, &inputs, output.as_deref(), s),
        Command::Symmetry {
            poset,
            z,
            z1,
            inputs,
            at,
            output,
        } => sectors::symmetry(&poset, &z, &z1, &inputs, at, output.as_deref(), s),
        Command::Statistics { poset, z, inputs } => sectors::statistics(&poset, &z, &inputs, s),
        Command::Conjugate {
            poset,
            z,
            inputs,
            output,
        } => sectors::conjugate(&poset, &z, &inputs, output.as_deref(), s),
        Command::Axioms {
            poset,
            inputs,
            thetas,
        } => {
            s.seed.get_or_insert(0);
            sectors::axioms(&poset, &inputs, &thetas, s)
        }
        Command::Generate { kind } => generate::run(kind),
    }
}

/// Sizes the global worker pool from `POSETCOH_THREADS`.
fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("POSETCOH_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| {
            CliError::Usage(format!(
                "POSETCOH_THREADS must be a positive integer, got {value:?}"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    if let Err(e) = configure_threads() {
        eprintln!("posetcoh: {e}");
        return ExitCode::from(2);
    }
    let tol = match cli.opts.tol {
        Some(t) if !(t.is_finite() && t > 0.0) => {
            eprintln!("posetcoh: --tol must be a positive number");
            return ExitCode::from(2);
        }
        Some(t) => Tolerances::scaled(t),
        None => Tolerances::default(),
    };
    let mut settings = Settings {
        tol,
        depth: cli.opts.depth.unwrap_or(posetcoh::homotopy::DEFAULT_DEPTH),
        seed: cli.opts.seed,
    };
    let name = cli.command.name();
    let start = Instant::now();
    let rows = match dispatch(cli.command, &mut settings) {
        Ok(rows) => rows,
        Err(e) => {
            eprintln!("posetcoh {name}: {e}");
            return ExitCode::from(2);
        }
    };
    let mut report = Report::new(name, rows);
    report.seed = settings.seed;
    if cli.opts.timing {
        report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    if cli.opts.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_table());
    }
    ExitCode::from(report.status.exit_code() as u8)
}
