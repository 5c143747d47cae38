//! The `cbtree` command-line surface.
//!
//! Usage: `cbtree <expr-or-@file> <command> [options]`. The first positional
//! is a tree expression (see [`crate::dsl`]), an `@file.json` automaton
//! import, or the literal `check-laws`; the second picks what to do with the
//! evaluated value.
//!
//! Exit codes: 0 success, 1 at least one law-check failure, 2 usage, parse,
//! or representation error, 3 schematic rank-pattern (probe) mismatch.

use clap::Parser;

use crate::analysis::{self, IsolatedBranches};
use crate::dsl;
use crate::eval::{self, EvalError, Value};
use crate::oracle;
use crate::render::{render_value, Format};
use crate::tree::{AutomatonDoc, TreeAutomaton};
use crate::words::{FiniteWord, UPWord};

#[derive(Parser, Debug)]
#[command(
    name = "cbtree",
    about = "Cantor-Bendixson analysis of trees given as prefix automata",
    disable_help_subcommand = true
)]
struct Cli {
    /// Tree expression, `@file.json` automaton import, or `check-laws`.
    target: String,

    /// One of: rank, derive, prune, kernel, classify, member, branch,
    /// isolated, render, export-json, check-laws.
    command: Option<String>,

    /// Extra argument: a word for `member`, an ultimately periodic word for
    /// `branch` (e.g. `ab(ba)^w`), a step count for `derive`.
    arg: Option<String>,

    /// Truncation depth for `render`.
    #[arg(long, default_value_t = 3)]
    depth: usize,

    /// Rendering format: `ascii` or `dot`.
    #[arg(long, default_value = "ascii")]
    format: String,

    /// Base seed for `check-laws`.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Instances per suite for `check-laws`.
    #[arg(long, default_value_t = 100)]
    count: usize,

    /// Cap on enumerated branches for `isolated`.
    #[arg(long = "max-enum", default_value_t = 64)]
    max_enum: usize,

    /// Verification depth for schematic values (also the component bound when
    /// rendering a root family).
    #[arg(long, default_value_t = 8)]
    probe: usize,

    /// Sabotage the named law in `check-laws`, to confirm the harness can
    /// fail. Example: `--mutate prop1.3`.
    #[arg(long)]
    mutate: Option<String>,
}

/// A failure to report on stderr, with its process exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

/// Prints one line to stdout. If the consumer closed the pipe (e.g. `head`),
/// stops quietly instead of panicking.
fn emit(text: impl std::fmt::Display) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{text}").is_err() {
        std::process::exit(0);
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Failure {
        fail(e.exit_code(), e.to_string())
    }
}

/// Entry point; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("cbtree: {}", failure.message);
            failure.code
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, Failure> {
    if cli.target == "check-laws" || cli.command.as_deref() == Some("check-laws") {
        return Ok(check_laws(cli));
    }
    let value = load_value(cli)?;
    let Some(command) = cli.command.as_deref() else {
        return Err(fail(2, "missing command (try `rank`, `classify`, or `render`)"));
    };
    match command {
        "rank" => rank(&value, cli.probe),
        "derive" => {
            let steps = match cli.arg.as_deref() {
                None => 1,
                Some(text) => text
                    .parse::<usize>()
                    .map_err(|_| fail(2, format!("`derive` takes a step count, got `{text}`")))?,
            };
            let mut t = regular(value, "derive")?;
            for _ in 0..steps {
                t = analysis::derive(&t);
            }
            print_doc(&t)
        }
        "prune" => print_doc(&analysis::prune(&regular(value, "prune")?)),
        "kernel" => print_doc(&analysis::kernel(&regular(value, "kernel")?)),
        "classify" => {
            emit(format_args!("{}", analysis::classify_branches(&regular(value, "classify")?)));
            Ok(0)
        }
        "member" => member(&value, required_arg(cli, "member", "a word")?),
        "branch" => branch(&value, required_arg(cli, "branch", "an ultimately periodic word")?),
        "isolated" => isolated(&regular(value, "isolated")?, cli.max_enum),
        "render" => {
            let format: Format = cli
                .format
                .parse()
                .map_err(|message: String| fail(2, message))?;
            let color = std::env::var("CBTREE_COLOR").as_deref() == Ok("1");
            emit(format_args!("{}", render_value(&value, format, cli.depth, cli.probe, color)));
            Ok(0)
        }
        "export-json" => print_doc(&regular(value, "export-json")?),
        other => Err(fail(2, format!("unknown command `{other}`"))),
    }
}

/// Evaluates the target into a value (expression or JSON import).
fn load_value(cli: &Cli) -> Result<Value, Failure> {
    if let Some(path) = cli.target.strip_prefix('@') {
        let text = std::fs::read_to_string(path)
            .map_err(|e| fail(2, format!("cannot read `{path}`: {e}")))?;
        let doc: AutomatonDoc = serde_json::from_str(&text)
            .map_err(|e| fail(2, format!("`{path}` is not an automaton document: {e}")))?;
        let t = TreeAutomaton::from_document(&doc)
            .map_err(|e| fail(2, format!("`{path}`: {e}")))?;
        return Ok(Value::Tree(t));
    }
    let program = dsl::parse_program(&cli.target).map_err(|e| fail(2, e.to_string()))?;
    Ok(eval::eval(&program.expr, &program.alphabet, cli.probe)?)
}

/// Unwraps a regular tree, or reports the representation mismatch the same
/// way the evaluator would.
fn regular(value: Value, command: &'static str) -> Result<TreeAutomaton, Failure> {
    match value {
        Value::Tree(t) => Ok(t),
        other => Err(EvalError::Representation { combinator: command, found: other.kind() }.into()),
    }
}

fn required_arg<'a>(cli: &'a Cli, command: &str, what: &str) -> Result<&'a str, Failure> {
    cli.arg
        .as_deref()
        .ok_or_else(|| fail(2, format!("`{command}` needs {what} as an argument")))
}

fn print_doc(t: &TreeAutomaton) -> Result<i32, Failure> {
    let doc = t.to_document();
    let text = serde_json::to_string_pretty(&doc)
        .expect("automaton documents always serialize");
    emit(format_args!("{text}"));
    Ok(0)
}

fn rank(value: &Value, probe: usize) -> Result<i32, Failure> {
    match value {
        Value::Tree(t) => {
            let (ordinal, thin) = analysis::rank(t);
            emit(format_args!("{ordinal} ({})", if thin { "thin" } else { "not thin" }));
        }
        Value::Spine(sp) => emit(sp.rank(probe).map_err(EvalError::from)?),
        Value::Family(fam) => emit(fam.rank(probe).map_err(EvalError::from)?),
    }
    Ok(0)
}

/// Splits a root-family argument `3abb` into the component index and the rest.
fn family_arg<'a>(arg: &'a str, what: &str) -> Result<(usize, &'a str), Failure> {
    let end = arg.find(|c: char| !c.is_ascii_digit()).unwrap_or(arg.len());
    let (digits, rest) = arg.split_at(end);
    let index = digits.parse::<usize>().map_err(|_| {
        fail(2, format!("a root family needs a component index prefix, e.g. `3{what}`"))
    })?;
    Ok((index, rest))
}

fn member(value: &Value, arg: &str) -> Result<i32, Failure> {
    let answer = match value {
        Value::Tree(t) => {
            let u = FiniteWord::parse(t.alphabet(), arg).map_err(|e| fail(2, e.to_string()))?;
            t.member(&u)
        }
        Value::Spine(sp) => {
            let u = FiniteWord::parse(sp.alphabet(), arg).map_err(|e| fail(2, e.to_string()))?;
            sp.member(&u)
        }
        Value::Family(fam) => {
            let (index, rest) = family_arg(arg, "abb")?;
            let u = FiniteWord::parse(fam.alphabet(), rest).map_err(|e| fail(2, e.to_string()))?;
            fam.member(index, &u)
        }
    };
    emit(format_args!("{answer}"));
    Ok(0)
}

fn branch(value: &Value, arg: &str) -> Result<i32, Failure> {
    let answer = match value {
        Value::Tree(t) => {
            let w = UPWord::parse(t.alphabet(), arg).map_err(|e| fail(2, e.to_string()))?;
            t.branch_member(&w)
        }
        Value::Spine(sp) => {
            let w = UPWord::parse(sp.alphabet(), arg).map_err(|e| fail(2, e.to_string()))?;
            sp.branch_member(&w)
        }
        Value::Family(fam) => {
            let (index, rest) = family_arg(arg, "(a)^w")?;
            let w = UPWord::parse(fam.alphabet(), rest).map_err(|e| fail(2, e.to_string()))?;
            fam.branch_member(index, &w)
        }
    };
    emit(format_args!("{answer}"));
    Ok(0)
}

fn isolated(t: &TreeAutomaton, max_enum: usize) -> Result<i32, Failure> {
    match analysis::isolated_branches(t, max_enum) {
        IsolatedBranches::Finite(branches) if branches.is_empty() => emit("(none)"),
        IsolatedBranches::Finite(branches) => {
            for w in branches {
                emit(format_args!("{w}"));
            }
        }
        IsolatedBranches::Infinite { families, sample } => {
            emit(format_args!("(infinitely many)"));
            for f in families {
                emit(format_args!("family {f}"));
            }
            for w in sample {
                emit(format_args!("sample {w}"));
            }
        }
    }
    Ok(0)
}

/// Runs both law suites and prints one JSON line per instance. Exit code 1
/// iff any instance fails.
fn check_laws(cli: &Cli) -> i32 {
    let mutate = cli.mutate.as_deref();
    let mut all_pass = true;
    for report in oracle::run_word_suite(cli.seed, cli.count, mutate)
        .iter()
        .chain(oracle::run_tree_suite(cli.seed, cli.count, mutate).iter())
    {
        all_pass &= report.pass;
        emit(format_args!("{}", report.to_json()));
    }
    if all_pass {
        0
    } else {
        1
    }
}
