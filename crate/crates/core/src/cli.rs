//! Command-line front end. [`run`] never touches the process streams, so it
//! can be driven from tests.
//!
//! Exit codes: 0 success, 1 internal cross-check failure, 2 input error.

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::catalog::{catalog_get, catalog_list};
use crate::center_components::{ring_characters, DEFAULT_SEED};
use crate::error::Error;
use crate::io::{datum_to_value, load_datum, parse_datum_unchecked, Datum};
use crate::klein::kappa_lagrangian;
use crate::metric_groups::{enumerate_pointed_extensions, ExtensionOptions};
use crate::report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "minext", version, about = "Invariants of premodular data and pointed minimal nondegenerate extensions")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Seed for the numeric character search.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (default: rayon's choice).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the axioms of a datum and list violations.
    Validate { input: String },
    /// Full pipeline: classification, components, Klein invariant, verdict.
    Analyze {
        input: String,
        /// Include per-stage timings (makes output nondeterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Klein invariant of a slightly degenerate datum.
    Kappa { input: String },
    /// Components of the centre and the matching characters.
    Components { input: String },
    /// Pointed minimal nondegenerate extensions of a slightly degenerate metric group.
    Extend {
        input: String,
        /// Upper bound on the order of the extension group.
        #[arg(long, default_value_t = 64)]
        max_order: usize,
        /// Identify extensions by any isometry, not only those fixing the fermion.
        #[arg(long)]
        free_fermion: bool,
    },
    /// Gauss sum, global dimension and (for metric groups) radical and signature.
    Gauss { input: String },
    /// Built-in examples.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    List,
    Show { name: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutput {
    fn ok(stdout: String) -> Self {
        CliOutput {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: String) -> Self {
        CliOutput {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

fn input_error(err: &Error) -> CliOutput {
    let mut msg = format!("error: {err}\n");
    if let Error::Validation(list) = err {
        for v in list {
            msg.push_str(&format!("  {}: {v}\n", v.name()));
        }
    }
    CliOutput::fail(2, msg)
}

fn emit<T: Serialize>(format: Format, value: &T, table: impl FnOnce(&T) -> String) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Table => table(value),
    }
}

/// `catalog:<name>` or a path to a JSON file, validated.
fn resolve(input: &str) -> Result<Datum, Error> {
    match input.strip_prefix("catalog:") {
        Some(name) => Ok(catalog_get(name)?.payload),
        None => load_datum(input),
    }
}

fn resolve_unchecked(input: &str) -> Result<Datum, Error> {
    match input.strip_prefix("catalog:") {
        Some(name) => Ok(catalog_get(name)?.payload),
        None => parse_datum_unchecked(&std::fs::read_to_string(input)?),
    }
}

pub fn run<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => CliOutput::ok(text),
                _ => CliOutput::fail(2, text),
            };
        }
    };
    match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => CliOutput::fail(2, format!("error: cannot build thread pool: {e}\n")),
        },
        None => dispatch(&cli),
    }
}

fn dispatch(cli: &Cli) -> CliOutput {
    let fmt = cli.format;
    match &cli.command {
        Command::Validate { input } => {
            let datum = match resolve_unchecked(input) {
                Ok(d) => d,
                Err(e) => return input_error(&e),
            };
            let violations = datum.validate();
            let r = report::ValidationReport {
                input_name: input.clone(),
                input_type: datum.type_name().into(),
                valid: violations.is_empty(),
                violations,
            };
            let out = emit(fmt, &r, report::validation_table);
            CliOutput {
                code: if r.valid { 0 } else { 2 },
                stdout: out,
                stderr: String::new(),
            }
        }
        Command::Analyze { input, timings } => {
            let datum = match resolve(input) {
                Ok(d) => d,
                Err(e) => return input_error(&e),
            };
            match report::analyze(input, &datum, cli.seed, *timings) {
                Ok(r) => CliOutput::ok(emit(fmt, &r, report::analysis_table)),
                Err(e) => CliOutput::fail(1, format!("internal check failed: {e}\n")),
            }
        }
        Command::Kappa { input } => {
            let datum = match resolve(input) {
                Ok(d) => d,
                Err(e) => return input_error(&e),
            };
            match kappa_lagrangian(&datum.to_premodular()) {
                Ok(k) => CliOutput::ok(emit(fmt, &k, report::kappa_table)),
                Err(e @ Error::CrossCheckMismatch(_)) => CliOutput::fail(1, format!("internal check failed: {e}\n")),
                Err(e) => input_error(&e),
            }
        }
        Command::Components { input } => {
            let datum = match resolve(input) {
                Ok(d) => d,
                Err(e) => return input_error(&e),
            };
            match ring_characters(&datum.to_premodular(), cli.seed) {
                Ok(c) => CliOutput::ok(emit(fmt, &c, report::components_table)),
                Err(e) => CliOutput::fail(1, format!("internal check failed: {e}\n")),
            }
        }
        Command::Extend {
            input,
            max_order,
            free_fermion,
        } => {
            let datum = match resolve(input) {
                Ok(d) => d,
                Err(e) => return input_error(&e),
            };
            let Datum::MetricGroup(mg) = datum else {
                return CliOutput::fail(2, "error: `extend` requires a metric_group input\n".into());
            };
            let opts = ExtensionOptions {
                max_order: *max_order,
                fix_fermion: !free_fermion,
            };
            match enumerate_pointed_extensions(&mg, opts) {
                Ok(exts) => {
                    let r = report::extension_report(input, &mg, &exts, opts.fix_fermion, *max_order);
                    CliOutput::ok(emit(fmt, &r, report::extension_table))
                }
                Err(e @ Error::CrossCheckMismatch(_)) => CliOutput::fail(1, format!("internal check failed: {e}\n")),
                Err(e) => input_error(&e),
            }
        }
        Command::Gauss { input } => match resolve(input) {
            Ok(d) => CliOutput::ok(emit(fmt, &report::gauss_report(input, &d), report::gauss_table)),
            Err(e) => input_error(&e),
        },
        Command::Catalog { action } => match action {
            CatalogAction::List => {
                #[derive(Serialize)]
                struct Item {
                    name: String,
                    kind: String,
                    doc: String,
                }
                let items: Vec<Item> = catalog_list()
                    .into_iter()
                    .map(|(name, kind, doc)| Item {
                        name,
                        kind: kind.as_str().into(),
                        doc,
                    })
                    .collect();
                CliOutput::ok(emit(fmt, &items, |items| {
                    items
                        .iter()
                        .map(|i| format!("{:<18}{:<14}{}\n", i.name, i.kind, i.doc))
                        .collect()
                }))
            }
            CatalogAction::Show { name } => match catalog_get(name) {
                Ok(entry) => match fmt {
                    Format::Json => {
                        let mut s = serde_json::to_string_pretty(&datum_to_value(&entry.payload))
                            .expect("datum serializes");
                        s.push('\n');
                        CliOutput::ok(s)
                    }
                    Format::Table => {
                        let mut s = format!("{:<22}{}\n{:<22}{}\n{:<22}{}\n", "name", entry.name, "kind", entry.kind.as_str(), "doc", entry.doc);
                        s.push_str(&report::datum_summary(&entry.payload.to_premodular()));
                        CliOutput::ok(s)
                    }
                },
                Err(e) => input_error(&e),
            },
        },
    }
}
