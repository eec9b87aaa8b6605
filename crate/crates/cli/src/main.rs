use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use prym_locus::fs_detect::{fs_component_genera, DEFAULT_ORBIT_CAP};
use prym_locus::report::{check_report, classification_report, fs_report};
use prym_locus::verify::{run_suite, CheckOptions, GenSpec, SCHEMA_VERSION};
use prym_locus::{dicing::analyze, parse_graph, Error, EquivariantGraph};

mod human;

const EXIT_INVALID: u8 = 2;
const EXIT_CAPS: u8 = 3;
const EXIT_COUNTEREXAMPLE: u8 = 4;

#[derive(Parser)]
#[command(name = "prym-locus", version, about = "Indeterminacy of the extended Prym map from dual graphs")]
struct Cli {
    #[arg(long, value_enum, global = true, default_value_t = Format::Human)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis of one graph: classification, (*), (**), FS degenerations.
    Check {
        #[arg(long)]
        input: PathBuf,
    },
    /// Edge-orbit types and multipliers.
    Classify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Friedman-Smith degeneration search.
    Fs {
        #[arg(long)]
        input: PathBuf,
        /// Only report this threshold (default: both 2 and 4).
        #[arg(long, value_parser = parse_min_edges)]
        min_fs_edges: Option<usize>,
    },
    /// Enumerate small graphs and cross-check every criterion.
    Verify {
        /// Newline-delimited report; summary and counterexamples go beside it.
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_fixed_vertices: usize,
        #[arg(long, default_value_t = 1)]
        max_vertex_pairs: usize,
        #[arg(long, default_value_t = 4)]
        max_fixed_edges: usize,
        #[arg(long, default_value_t = 4)]
        max_edge_pairs: usize,
        /// Cap on fixed edges plus exchanged pairs together.
        #[arg(long, default_value_t = 4)]
        max_edge_orbits: usize,
        #[arg(long, action = ArgAction::Set, num_args = 0..=1, default_value_t = true, default_missing_value = "true")]
        allow_loops: bool,
        #[arg(long)]
        dedup: bool,
        /// Corrupt the (**) matrix to exercise failure reporting.
        #[arg(long, hide = true)]
        inject_mutant: bool,
    },
    /// Genus splittings indexing components of the Friedman-Smith locus.
    Components {
        #[arg(long)]
        g: i64,
        #[arg(long)]
        n: i64,
    },
}

fn parse_min_edges(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v @ (2 | 4)) => Ok(v),
        _ => Err("expected 2 or 4".into()),
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match &err {
            Error::CapExceeded { .. } => EXIT_CAPS,
            Error::Io(_) | Error::Invariant(_) => 1,
            _ => EXIT_INVALID,
        };
        let mut message = err.to_string();
        if let Error::Invalid(violations) = &err {
            for v in violations {
                message.push_str(&format!("\n  [{}] {}", v.code, v.message));
            }
        }
        Failure { code, message }
    }
}

fn load(path: &PathBuf) -> Result<EquivariantGraph, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_INVALID,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    Ok(parse_graph(&text)?)
}

fn structured<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let format = cli.format;
    let emit = |human: String, structured: String| {
        print!("{}", if format == Format::Human { human } else { structured });
    };
    match cli.command {
        Command::Check { input } => {
            let g = load(&input)?;
            let r = check_report(&g, &[2, 4], DEFAULT_ORBIT_CAP)?;
            emit(human::check(&r), structured(&r));
        }
        Command::Classify { input } => {
            let a = analyze(&load(&input)?)?;
            let r = classification_report(&a);
            let mut text = String::new();
            human::classification(&mut text, &r);
            emit(text, structured(&r));
        }
        Command::Fs { input, min_fs_edges } => {
            let a = analyze(&load(&input)?)?;
            let thresholds = min_fs_edges.map_or_else(|| vec![2, 4], |m| vec![m]);
            let r = fs_report(&a.graph, &thresholds, DEFAULT_ORBIT_CAP)?;
            let mut text = String::new();
            human::fs(&mut text, &r);
            emit(text, structured(&r));
        }
        Command::Verify {
            output,
            max_fixed_vertices,
            max_vertex_pairs,
            max_fixed_edges,
            max_edge_pairs,
            max_edge_orbits,
            allow_loops,
            dedup,
            inject_mutant,
        } => {
            let spec = GenSpec {
                max_fixed_vertices,
                max_vertex_pairs,
                max_fixed_edges,
                max_edge_pairs,
                max_edge_orbits: Some(max_edge_orbits),
                allow_loops,
                dedup,
            };
            let opts = CheckOptions { mutant: inject_mutant, ..CheckOptions::default() };
            let report = run_suite(&spec, &output, &opts)?;
            emit(human::suite(&report.summary), structured(&report.summary));
            if !report.success() {
                eprintln!("counterexamples written to {}", report.counterexample_path.display());
                return Ok(EXIT_COUNTEREXAMPLE);
            }
        }
        Command::Components { g, n } => {
            let pairs = fs_component_genera(g, n)?;
            #[derive(Serialize)]
            struct Listing<'a> {
                schema_version: u32,
                g: i64,
                n: i64,
                splittings: &'a [(i64, i64)],
                count: usize,
            }
            let listing = Listing { schema_version: SCHEMA_VERSION, g, n, splittings: &pairs, count: pairs.len() };
            emit(human::components(g, n, &pairs), structured(&listing));
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
