//! The `diaplan` command line: `check` and `run`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::dsl::{export_dot, parse_graph, parse_program, print_graph};
use crate::eval::{check_predicates, check_visibility, run, Budget, Outcome};
use crate::graph::{Edge, EdgeKind, Graph};
use crate::program::{NamedGraph, Program};
use crate::report::ValidationReport;
use crate::shapes::check_program;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;
pub const EXIT_EXCEPTION: i32 = 4;
pub const EXIT_BUDGET: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "diaplan", version, about = "Check and run diagram programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and statically check program files.
    Check {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Evaluate the predicate calls of an input graph.
    Run(RunConfig),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Dsl,
    Dot,
}

#[derive(clap::Args, Debug, Clone)]
pub struct RunConfig {
    /// Program file.
    #[arg(value_name = "PROGRAM", required_unless_present = "program_flag")]
    program: Option<PathBuf>,
    #[arg(long = "program", value_name = "PATH", conflicts_with = "program")]
    program_flag: Option<PathBuf>,
    /// A graph declared in the program, or a file of graph statements.
    #[arg(long, default_value = "main")]
    input: String,
    /// Predicate to call on the input graph.
    #[arg(long)]
    goal: Option<String>,
    /// Goal arguments: node names of the input graph, `@name` for an edge passed as parameter.
    /// Without this flag the input graph's points are used.
    #[arg(long, value_delimiter = ',')]
    args: Option<Vec<String>>,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_steps: u64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    max_depth: u64,
    /// Write the evaluation trace to this file.
    #[arg(long, value_name = "FILE")]
    trace: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Dsl)]
    format: Format,
    /// Evaluate even if static checking reports violations.
    #[arg(long)]
    no_typecheck: bool,
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_IO;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match cli.command {
        Command::Check { paths } => cmd_check(&paths, err),
        Command::Run(config) => cmd_run(&config, out, err),
    }
}

fn load(path: &Path) -> Result<Program, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_program(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// All static checks of a parsed program.
pub fn check_all(p: &Program) -> ValidationReport {
    let mut r = check_predicates(p);
    r.extend(check_visibility(p));
    r.extend(check_program(p));
    r
}

pub fn cmd_check(paths: &[PathBuf], err: &mut dyn std::io::Write) -> i32 {
    let mut code = EXIT_OK;
    for path in paths {
        match load(path) {
            Err(e) => {
                let _ = writeln!(err, "{e}");
                code = EXIT_IO;
            }
            Ok(p) => {
                let report = check_all(&p);
                for v in &report.violations {
                    let _ = writeln!(err, "{}: {v}", path.display());
                }
                if !report.is_empty() && code == EXIT_OK {
                    code = EXIT_VIOLATIONS;
                }
            }
        }
    }
    code
}

fn input_graph(p: &Program, input: &str) -> Result<NamedGraph, String> {
    if let Some(g) = p.graph(input) {
        return Ok(g.clone());
    }
    let path = Path::new(input);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| format!("{input}: {e}"))?;
        return parse_graph(&text).map_err(|e| format!("{input}: {e}"));
    }
    Err(format!("no graph or file named {input}"))
}

fn add_goal(ng: &NamedGraph, goal: &str, args: Option<&[String]>) -> Result<Graph, String> {
    let mut g = ng.graph.clone();
    let (mut att, mut params) = (Vec::new(), Vec::new());
    match args {
        None => att = g.points().to_vec(),
        Some(args) => {
            for a in args {
                if let Some(e) = a.strip_prefix('@') {
                    params.push(*ng.edges.get(e).ok_or_else(|| format!("no edge named {e}"))?);
                } else {
                    att.push(*ng.nodes.get(a.as_str()).ok_or_else(|| format!("no node named {a}"))?);
                }
            }
        }
    }
    g.add_edge(Edge::call(goal, att).with_params(params));
    Ok(g)
}

fn render(g: &Graph, format: Format) -> String {
    match format {
        Format::Dot => export_dot(g),
        Format::Dsl => {
            let mut s = String::from("graph result {\n");
            for line in print_graph(g).lines() {
                let _ = writeln!(s, "    {line}");
            }
            s.push_str("}\n");
            s
        }
    }
}

pub fn cmd_run(config: &RunConfig, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32 {
    let path = config.program.as_ref().or(config.program_flag.as_ref()).expect("program path");
    let program = match load(path) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            return EXIT_IO;
        }
    };
    if !config.no_typecheck {
        let report = check_all(&program);
        if !report.is_empty() {
            let _ = write!(err, "{report}");
            return EXIT_VIOLATIONS;
        }
    }
    let host = input_graph(&program, &config.input).and_then(|ng| match &config.goal {
        Some(goal) => {
            if program.predicate(goal).is_none() {
                return Err(format!("no predicate named {goal}"));
            }
            add_goal(&ng, goal, config.args.as_deref())
        }
        None => Ok(ng.graph),
    });
    let host = match host {
        Ok(h) => h,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            return EXIT_IO;
        }
    };
    if !host.edges().any(|(_, e)| e.kind == EdgeKind::Call) {
        let _ = writeln!(err, "note: the input graph calls no predicate");
    }
    let budget = Budget {
        max_steps: config.max_steps.try_into().unwrap_or(usize::MAX),
        max_depth: config.max_depth.try_into().unwrap_or(usize::MAX),
    };
    let evaluation = run(&program, &host, budget);
    if let Some(trace) = &config.trace {
        if let Err(e) = fs::write(trace, evaluation.trace_text()) {
            let _ = writeln!(err, "{}: {e}", trace.display());
            return EXIT_IO;
        }
    }
    match evaluation.outcome {
        Outcome::Success(g) => {
            let _ = out.write_all(render(&g, config.format).as_bytes());
            EXIT_OK
        }
        Outcome::Failure => {
            let _ = writeln!(err, "failure");
            EXIT_FAILURE
        }
        Outcome::Exception { predicate, step } => {
            let _ = writeln!(err, "exception raised by {predicate} at step {step}");
            EXIT_EXCEPTION
        }
        Outcome::BudgetExhausted => {
            let _ = writeln!(err, "budget exhausted after {} steps", evaluation.steps);
            EXIT_BUDGET
        }
    }
}
