use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use sector_doubler::analysis::{examples, Analysis};
use sector_doubler::data::builtin;
use sector_doubler::double::Mode;
use sector_doubler::graph::{compare_golden, emit_dot, load_golden, BipartiteGraph};
use sector_doubler::tolerance::Tolerances;
use sector_doubler::verify::{is_known, run_generic, run_suite};
use sector_doubler::Error;

/// Quantum double sector systems of conformal inclusions.
#[derive(Debug, Parser)]
#[command(name = "sector-doubler", version)]
struct Cli {
    command: Command,

    /// Built-in name (e6, e8, e8cc, e12, e24) or path to a descriptor.
    spec: Option<String>,

    #[arg(long, value_enum, default_value_t = ModeArg::Chiral)]
    mode: ModeArg,

    /// Defaults to `dot` for `graph` and `text` otherwise.
    #[arg(long, value_enum)]
    format: Option<Format>,

    /// Golden graph to compare against: a path, a bundled golden file name,
    /// or `auto` for the spec's bundled golden.
    #[arg(long)]
    golden: Option<String>,

    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,

    /// Run `verify` over every bundled example.
    #[arg(long)]
    all: bool,

    /// Monodromy tolerance for degenerate sets and relative permutants.
    #[arg(long, value_parser = positive)]
    degeneracy_tol: Option<f64>,

    /// Relative tolerance of the global-index certificate.
    #[arg(long, value_parser = positive)]
    certificate_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    Examples,
    Analyze,
    Graph,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Chiral,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

enum Failure {
    Usage(String),
    Error(Error),
    /// Output was produced but some check failed.
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

struct Output {
    body: String,
    passed: bool,
    /// Printed to stderr after the body.
    notes: String,
}

fn json<T: serde::Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn require_spec(cli: &Cli) -> Result<&str, Failure> {
    cli.spec.as_deref().ok_or_else(|| Failure::Usage(format!("`{:?}` needs a spec argument", cli.command).to_lowercase()))
}

fn tolerances(cli: &Cli) -> Tolerances {
    let mut tol = Tolerances::default();
    if let Some(x) = cli.degeneracy_tol {
        tol.degeneracy = x;
    }
    if let Some(x) = cli.certificate_tol {
        tol.certificate = x;
    }
    tol
}

fn mode(cli: &Cli) -> Mode {
    match cli.mode {
        ModeArg::Chiral => Mode::Chiral,
        ModeArg::Full => Mode::Full,
    }
}

fn cmd_examples(format: Format) -> Result<Output, Failure> {
    let list = examples()?;
    let body = match format {
        Format::Json => json(&serde_json::json!({ "schema": sector_doubler::SCHEMA, "examples": list })),
        Format::Text => {
            let mut s = String::new();
            for e in &list {
                let _ = writeln!(
                    s,
                    "{}: {}  [{} graph; {} labels, {} ambichiral, {} chiral vertices, {} branching entries]",
                    e.name, e.title, e.graph, e.labels, e.ambichiral, e.chiral_vertices, e.branching_nonzero
                );
            }
            s
        }
        Format::Dot => return Err(Failure::Usage("`examples` supports json and text".into())),
    };
    Ok(Output { body, passed: true, notes: String::new() })
}

fn cmd_analyze(cli: &Cli, format: Format) -> Result<Output, Failure> {
    let analysis = Analysis::load(require_spec(cli)?, mode(cli), &tolerances(cli))?;
    let report = analysis.report();
    let body = match format {
        Format::Json => json(&report),
        Format::Text => report.text(),
        Format::Dot => return Err(Failure::Usage("`analyze` supports json and text".into())),
    };
    Ok(Output { body, passed: report.passed(), notes: String::new() })
}

fn graph_text(g: &BipartiteGraph) -> String {
    let mut s = format!("{}: {} top, {} bottom, {} edges\n", g.name, g.top.len(), g.bottom.len(), g.edge_count());
    for e in &g.edges {
        let _ = writeln!(s, "  {} -- {} x{}", g.top[e.top], g.bottom[e.bottom], e.mult);
    }
    s
}

fn cmd_graph(cli: &Cli, format: Format) -> Result<Output, Failure> {
    let spec = require_spec(cli)?;
    if cli.mode == ModeArg::Full {
        return Err(Failure::Usage("the dual principal graph is computed in chiral mode".into()));
    }
    let analysis = Analysis::load(spec, Mode::Chiral, &tolerances(cli))?;
    let graph = analysis.graph()?;
    let body = match format {
        Format::Dot => emit_dot(&graph),
        Format::Json => json(&graph.to_document()),
        Format::Text => graph_text(&graph),
    };
    let (passed, notes) = match &cli.golden {
        None => (true, String::new()),
        Some(g) => {
            let source = if g == "auto" {
                builtin(spec)
                    .and_then(|b| b.golden)
                    .ok_or_else(|| Failure::Usage(format!("`{spec}` has no bundled golden graph")))?
                    .to_string()
            } else {
                g.clone()
            };
            let report = compare_golden(&graph, &load_golden(&source)?);
            (report.matched, report.to_string())
        }
    };
    Ok(Output { body, passed, notes })
}

fn cmd_verify(cli: &Cli, format: Format) -> Result<Output, Failure> {
    let tol = tolerances(cli);
    let report = match (&cli.spec, cli.all) {
        (Some(_), true) => return Err(Failure::Usage("give either a spec or --all".into())),
        (Some(s), false) if is_known(s) => run_suite(Some(s), &tol),
        (Some(s), false) => run_generic(s, &tol),
        (None, _) => run_suite(None, &tol),
    };
    let body = match format {
        Format::Json => json(&report),
        Format::Text => format!("{report}\n"),
        Format::Dot => return Err(Failure::Usage("`verify` supports json and text".into())),
    };
    Ok(Output { body, passed: report.passed, notes: String::new() })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let format = cli.format.unwrap_or(if cli.command == Command::Graph { Format::Dot } else { Format::Text });
    if cli.golden.is_some() && cli.command != Command::Graph {
        return Err(Failure::Usage("--golden only applies to `graph`".into()));
    }
    match cli.command {
        Command::Examples => cmd_examples(format),
        Command::Analyze => cmd_analyze(cli, format),
        Command::Graph => cmd_graph(cli, format),
        Command::Verify => cmd_verify(cli, format),
    }
}

fn emit(cli: &Cli, out: &Output) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => std::fs::write(path, &out.body).map_err(|source| {
            Failure::Error(Error::Io { path: path.display().to_string(), source })
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.body.as_bytes());
            let _ = stdout.flush();
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| {
        emit(&cli, &out)?;
        eprint!("{}", out.notes);
        if out.passed {
            Ok(())
        } else {
            Err(Failure::Check)
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Error(e)) => {
            eprintln!("error: {}: {e}", e.module());
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
