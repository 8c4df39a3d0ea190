//! `gkzkit` command-line front end.

mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{CliError, Flags};
use input::{InputError, Model};

#[derive(Parser)]
#[command(name = "gkzkit", version, about = "Exact GKZ systems, β-terms and double residues")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Input file (JSON).
    file: Option<PathBuf>,
    /// Built-in input: quintic, p22211 or p72221.
    #[arg(long)]
    fixture: Option<String>,
    /// Also write the report as JSON to this path.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Truncation order of series (default 8, or the file's option).
    #[arg(long)]
    order: Option<u32>,
    /// Chart basis as relation vectors, e.g. "1,0,-1;0,1,1".
    #[arg(long, allow_hyphen_values = true)]
    chart: Option<String>,
    /// Root exponent r with x = t^r.
    #[arg(long = "t-exp")]
    t_exp: Option<u32>,
    /// Check only the k-th relation (1-based).
    #[arg(long)]
    rel: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Relation lattice of the point configuration.
    Relations(Common),
    /// Enhanced polytope and fan for the brane.
    Enhance(Common),
    /// Triangulation, primitive relations and certificates.
    Triangulate(Common),
    /// Stanley-Reisner ideal and divisor ring.
    Sr(Common),
    /// Components of the deformed Gamma series.
    Solve(Common),
    /// Check that the series is annihilated by the box operators.
    Verify(Common),
    /// Exact form identities and β-terms.
    Beta(Common),
    /// Double-residue computation of the inhomogeneous term.
    Aj(Common),
    /// Mirror map from single-log components.
    Mirrormap(Common),
}

fn load(c: &Common) -> Result<Model, InputError> {
    let input = match (&c.file, &c.fixture) {
        (Some(_), Some(_)) => return Err(InputError::new("", "give either a file or --fixture, not both")),
        (None, None) => return Err(InputError::new("", "an input file or --fixture is required")),
        (None, Some(name)) => input::fixture(name)?,
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| InputError::new("", format!("cannot read {}: {e}", path.display())))?;
            input::parse(&text)?
        }
    };
    Model::build(input)
}

fn run(cmd: &Command) -> Result<(report::Report, Option<PathBuf>), CliError> {
    let c = match cmd {
        Command::Relations(c)
        | Command::Enhance(c)
        | Command::Triangulate(c)
        | Command::Sr(c)
        | Command::Solve(c)
        | Command::Verify(c)
        | Command::Beta(c)
        | Command::Aj(c)
        | Command::Mirrormap(c) => c,
    };
    let model = load(c)?;
    let flags = Flags { order: c.order, chart: c.chart.clone(), t_exp: c.t_exp, rel: c.rel };
    let report = match cmd {
        Command::Relations(_) => commands::relations(&model, &flags),
        Command::Enhance(_) => commands::enhance(&model),
        Command::Triangulate(_) => commands::triangulate(&model),
        Command::Sr(_) => commands::sr(&model),
        Command::Solve(_) => commands::solve(&model, &flags),
        Command::Verify(_) => commands::verify(&model, &flags),
        Command::Beta(_) => commands::beta(&model, &flags),
        Command::Aj(_) => commands::aj(&model, &flags),
        Command::Mirrormap(_) => commands::mirrormap(&model, &flags),
    }?;
    Ok((report, c.json.clone()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok((report, json)) => {
            print!("{}", report.text());
            if let Some(path) = json {
                if let Err(e) = std::fs::write(&path, report.json()) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Input(e)) => {
            let at = if e.pointer.is_empty() { "(document)" } else { e.pointer.as_str() };
            eprintln!("input error at {at}: {}", e.message);
            ExitCode::from(2)
        }
        Err(CliError::Failed(m)) => {
            eprintln!("computation failed: {m}");
            ExitCode::from(1)
        }
    }
}
