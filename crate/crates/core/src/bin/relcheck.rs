//! Command-line front end. Exit codes: 0 the judgment holds, 1 it does
//! not, 2 malformed input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use relcheck::lambda::{self, BoolValue};
use relcheck::mll::{parse_proof_structure, ProofStructure};
use relcheck::relsem::{self, RelTerm};
use relcheck::riam::{self, Outcome, RunOptions};

#[derive(Parser)]
#[command(name = "relcheck", version, about = "Relational semantic type checking for MLL proof-structures and simply-typed λ-terms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a point with the token machine.
    Check(StructureArgs),
    /// Decide a point by exhaustive search over experiments.
    Oracle(StructureArgs),
    /// Run the token machine and print its event trace.
    Trace(StructureArgs),
    /// Decide whether a point belongs to the interpretation of a closed term.
    LambdaCheck {
        term: String,
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        point: String,
    },
    /// Evaluate a closed term of type o -> o -> o semantically.
    LambdaBool { term: String },
}

#[derive(Args)]
struct StructureArgs {
    /// A `.mllps` file.
    structure: PathBuf,
    /// Comma-separated conclusion points, e.g. "(a,b), (a,b)".
    #[arg(long, conflicts_with = "point_file", required_unless_present = "point_file")]
    point: Option<String>,
    /// Read the point from a file instead.
    #[arg(long)]
    point_file: Option<PathBuf>,
    /// Override the displacement cap (default: twice the number of cells).
    #[arg(long)]
    max_steps: Option<usize>,
    /// Prefix of generated variables.
    #[arg(long, default_value = relsem::DEFAULT_FRESH_PREFIX)]
    fresh_prefix: String,
    /// Also print the event trace (for `check`).
    #[arg(long)]
    trace: bool,
}

enum Failure {
    Input(String),
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(args: &StructureArgs) -> Result<(ProofStructure, Vec<RelTerm>), Failure> {
    let text = read(&args.structure)?;
    let ps = parse_proof_structure(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", args.structure.display())))?;
    let point_text = match (&args.point, &args.point_file) {
        (Some(p), _) => p.clone(),
        (None, Some(f)) => read(f)?,
        (None, None) => return Err(Failure::Input("no point given".into())),
    };
    let x = relsem::parse_point(point_text.trim()).map_err(|e| Failure::Input(format!("point: {e}")))?;
    relsem::check_point_shape(&ps, &x).map_err(|e| Failure::Input(format!("point: {e}")))?;
    Ok((ps, x))
}

fn run_machine(args: &StructureArgs, print_trace: bool) -> Result<bool, Failure> {
    let (ps, x) = load(args)?;
    let opts = RunOptions { max_displacements: args.max_steps, fresh_prefix: args.fresh_prefix.clone() };
    let run = riam::normal_run_with(&ps, &x, &opts).map_err(|e| Failure::Input(e.to_string()))?;
    if print_trace {
        print!("{}", run.render(&ps));
    }
    if let Outcome::Rejected { config, reason } = &run.outcome {
        eprintln!("rejected: {}", reason.display(&ps));
        eprintln!("configuration: {}", config.display(&ps));
    }
    Ok(run.accepted())
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Check(args) => run_machine(&args, args.trace),
        Command::Trace(args) => run_machine(&args, true),
        Command::Oracle(args) => {
            let (ps, x) = load(&args)?;
            if ps.cells().len() > 12 {
                eprintln!("warning: exhaustive search over {} cells may take very long", ps.cells().len());
            }
            relsem::oracle_check(&ps, &x).map_err(|e| Failure::Input(e.to_string()))
        }
        Command::LambdaCheck { term, ty, point } => {
            let m = lambda::parse_term(&term).map_err(|e| Failure::Input(format!("term: {e}")))?;
            let ty = lambda::parse_type(&ty).map_err(|e| Failure::Input(format!("type: {e}")))?;
            let alpha = lambda::parse_rpoint(&point).map_err(|e| Failure::Input(format!("point: {e}")))?;
            lambda::check_judgment(&m, &ty, &alpha).map_err(|e| Failure::Input(e.to_string()))
        }
        Command::LambdaBool { term } => {
            let m = lambda::parse_term(&term).map_err(|e| Failure::Input(format!("term: {e}")))?;
            let v = lambda::boolean_eval(&m).map_err(|e| Failure::Input(e.to_string()))?;
            println!("{}", if v == BoolValue::IsTrue { "true" } else { "false" });
            Ok(v == BoolValue::IsTrue)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
