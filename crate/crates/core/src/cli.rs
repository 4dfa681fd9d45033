//! Command-line driver.
//!
//! Exit status 2 means unreadable or malformed input (or bad usage), 3 means
//! well-formed input that fails validation. Search outcomes are reported in
//! the output document and never through the exit status.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::automata::RegularSet;
use crate::checker::{check_domain, entail, eval_sentence, solve, Bounds, CheckError, Direction, Verdict};
use crate::completion::{cet_axioms, completion_defs};
use crate::models::{from_json, to_json, ModelError, ModelPresentation};
use crate::simpleform::prepare;
use crate::sns::{assemble_sentence, emit, SnsError};
use crate::syntax::{
    parse_formula, parse_formula_infer, parse_program, parse_query, validate_formula, validate_program, Formula,
    Signature, SyntaxError,
};

#[derive(Debug, Parser)]
#[command(name = "moncomp", version, about = "Completion of monadic general programs and bounded countermodel search")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Print the domain and predicate automata of models to stderr.
    #[arg(long, global = true)]
    pub dump_automata: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the completed definitions of a program.
    Complete {
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        language: Option<PathBuf>,
        /// Also print the freeness axioms, instantiated up to this term depth.
        #[arg(long)]
        cet_depth: Option<usize>,
    },
    /// Print the simple normalized form of a formula.
    Simplify {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        language: Option<PathBuf>,
    },
    /// Print the successor-logic sentence for a closed formula.
    EmitSns {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        language: Option<PathBuf>,
    },
    /// Check that a model file's domain satisfies the domain conditions.
    CheckDomain {
        #[arg(long)]
        model: PathBuf,
    },
    /// Evaluate a closed formula in a model.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: PathBuf,
    },
    /// Search for a model of a closed formula.
    Solve {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        language: Option<PathBuf>,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    /// Search for countermodels to a query and to its negation under the
    /// completion of a program.
    Entail {
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        query: PathBuf,
        #[arg(long)]
        language: Option<PathBuf>,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub max_roots: Option<usize>,
    #[arg(long)]
    pub max_nonroots: Option<usize>,
    #[arg(long)]
    pub max_prefix: Option<usize>,
    #[arg(long)]
    pub max_period: Option<usize>,
    #[arg(long)]
    pub max_multiplicity: Option<usize>,
    #[arg(long)]
    pub granularity: Option<usize>,
    /// Must be at least 1.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub length_period: Option<u64>,
    /// Wall-clock budget per search, in seconds.
    #[arg(long)]
    pub budget: Option<f64>,
}

impl BoundsArgs {
    fn resolve(&self) -> Result<Bounds, Failure> {
        let mut b = Bounds::default();
        let set = |slot: &mut usize, v: Option<usize>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut b.max_roots, self.max_roots);
        set(&mut b.max_nonroots, self.max_nonroots);
        set(&mut b.max_prefix, self.max_prefix);
        set(&mut b.max_period, self.max_period);
        set(&mut b.max_multiplicity, self.max_multiplicity);
        set(&mut b.granularity, self.granularity);
        if let Some(p) = self.length_period {
            b.length_period = p as usize;
        }
        if let Some(s) = self.budget {
            b.budget = Duration::try_from_secs_f64(s).map_err(|_| Failure::usage(format!("invalid budget `{s}`")))?;
        }
        Ok(b)
    }
}

/// An error together with the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub status: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: String) -> Self {
        Failure { status: 2, message }
    }

    fn invalid(message: String) -> Self {
        Failure { status: 3, message }
    }
}

fn context(path: &Path, e: impl std::fmt::Display) -> String {
    format!("{}: {e}", path.display())
}

fn syntax_failure(path: &Path, e: SyntaxError) -> Failure {
    let status = if e.is_parse_error() { 2 } else { 3 };
    Failure { status, message: context(path, e) }
}

fn model_failure(path: &Path, e: ModelError) -> Failure {
    let status = if e.is_parse_error() { 2 } else { 3 };
    Failure { status, message: context(path, e) }
}

fn check_failure(e: CheckError) -> Failure {
    match e {
        CheckError::Syntax(e) if e.is_parse_error() => Failure::usage(e.to_string()),
        CheckError::Model(e) if e.is_parse_error() => Failure::usage(e.to_string()),
        CheckError::Sns(e @ SnsError::Parse { .. }) => Failure::usage(e.to_string()),
        CheckError::Internal(msg) => Failure {
            status: 1,
            message: format!("internal error: {msg}"),
        },
        e => Failure::invalid(e.to_string()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(context(path, e)))
}

fn language(path: Option<&PathBuf>) -> Result<Option<Signature>, Failure> {
    let Some(path) = path else { return Ok(None) };
    let (program, sig) = parse_program(&read(path)?, None).map_err(|e| syntax_failure(path, e))?;
    if !program.clauses.is_empty() {
        return Err(Failure::invalid(context(path, "a language file holds only directives")));
    }
    Ok(Some(sig))
}

fn formula(path: &Path, sig: Option<&Signature>) -> Result<(Formula, Signature), Failure> {
    let text = read(path)?;
    let parsed = match sig {
        Some(sig) => parse_formula(&text, sig).map(|f| (f, sig.clone())),
        None => parse_formula_infer(&text, &Signature::default()),
    };
    let (f, sig) = parsed.map_err(|e| syntax_failure(path, e))?;
    sig.check().map_err(|e| syntax_failure(path, e))?;
    Ok((f, sig))
}

fn closed_formula(path: &Path, sig: Option<&Signature>) -> Result<(Formula, Signature), Failure> {
    let (f, sig) = formula(path, sig)?;
    validate_formula(&f, &sig, true).map_err(|e| syntax_failure(path, e))?;
    Ok((f, sig))
}

fn model(path: &Path) -> Result<ModelPresentation, Failure> {
    from_json(&read(path)?).map_err(|e| model_failure(path, e))
}

fn dump_model(m: &ModelPresentation, d: &RegularSet) {
    eprintln!("D:\n{d}");
    for (name, p) in m.sig().predicates.iter().zip(m.colorings(d)) {
        eprintln!("P_{name}:\n{p}");
    }
}

fn signature_value(sig: &Signature) -> Value {
    json!({
        "constants": sig.constants,
        "functions": sig.functions,
        "predicates": sig.predicates,
    })
}

/// The output document: text and its structured twin.
struct Report {
    text: String,
    value: Value,
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Sat { witness, candidates } => {
            format!("model found after {candidates} candidate(s):\n{}\n", to_json(witness))
        }
        Verdict::NoModelWithinBounds { candidates, frontier, .. } => {
            let mut s = format!("no model within bounds after {candidates} candidate(s)\n");
            if let Some(f) = frontier {
                let _ = writeln!(s, "time budget exhausted at {f}");
            }
            s
        }
    }
}

fn direction_text(label: &str, d: &Direction) -> String {
    match &d.verdict {
        Verdict::Sat { witness, candidates } => format!(
            "{label}: countermodel found after {candidates} candidate(s):\n{}\n",
            to_json(witness)
        ),
        Verdict::NoModelWithinBounds { candidates, frontier, .. } => {
            let mut s = format!(
                "{label}: no countermodel within bounds (consistent with entailment, not a proof); {candidates} candidate(s)\n"
            );
            if let Some(f) = frontier {
                let _ = writeln!(s, "  time budget exhausted at {f}");
            }
            s
        }
    }
}

fn run_command(cli: &Cli) -> Result<Report, Failure> {
    let mut text = String::new();
    let value = match &cli.command {
        Command::Complete {
            program,
            language: lang,
            cet_depth,
        } => {
            let lang = language(lang.as_ref())?;
            let (p, sig) = parse_program(&read(program)?, lang.as_ref()).map_err(|e| syntax_failure(program, e))?;
            validate_program(&p, &sig).map_err(|e| syntax_failure(program, e))?;
            let defs = completion_defs(&p, &sig);
            let lines: Vec<String> = defs.defs.iter().map(|d| d.formula.display(&sig).to_string()).collect();
            for l in &lines {
                let _ = writeln!(text, "{l}.");
            }
            let cet: Option<Vec<String>> =
                cet_depth.map(|d| cet_axioms(&sig, d).iter().map(|a| a.display(&sig).to_string()).collect());
            if let Some(cet) = &cet {
                text.push_str("% freeness axioms\n");
                for a in cet {
                    let _ = writeln!(text, "{a}.");
                }
            }
            json!({
                "command": "complete",
                "signature": signature_value(&sig),
                "definitions": lines,
                "cet_depth": cet_depth,
                "cet": cet,
            })
        }
        Command::Simplify { formula: path, language: lang } => {
            let lang = language(lang.as_ref())?;
            let (f, sig) = formula(path, lang.as_ref())?;
            let s = prepare(&f).formula().display(&sig).to_string();
            let _ = writeln!(text, "{s}");
            json!({"command": "simplify", "signature": signature_value(&sig), "formula": s})
        }
        Command::EmitSns { formula: path, language: lang } => {
            let lang = language(lang.as_ref())?;
            let (f, sig) = closed_formula(path, lang.as_ref())?;
            let s = emit(&assemble_sentence(&f, &sig).map_err(|e| Failure::invalid(e.to_string()))?);
            let _ = writeln!(text, "{s}");
            json!({"command": "emit-sns", "signature": signature_value(&sig), "sentence": s})
        }
        Command::CheckDomain { model: path } => {
            let m = model(path)?;
            let d = m.embed();
            if cli.dump_automata {
                dump_model(&m, &d);
            }
            let ok = check_domain(&d, m.sig()).map_err(check_failure)?;
            let _ = writeln!(text, "{ok}");
            json!({"command": "check-domain", "domain": ok, "states": d.states()})
        }
        Command::Eval { model: mpath, formula: fpath } => {
            let m = model(mpath)?;
            if cli.dump_automata {
                dump_model(&m, &m.embed());
            }
            let (f, _) = closed_formula(fpath, Some(m.sig()))?;
            let truth = eval_sentence(&m, &f).map_err(check_failure)?;
            let _ = writeln!(text, "{truth}");
            json!({"command": "eval", "value": truth})
        }
        Command::Solve {
            formula: path,
            language: lang,
            bounds,
        } => {
            let b = bounds.resolve()?;
            let lang = language(lang.as_ref())?;
            let (f, sig) = closed_formula(path, lang.as_ref())?;
            let v = solve(&f, &sig, &b).map_err(check_failure)?;
            if cli.dump_automata {
                if let Some(w) = v.witness() {
                    dump_model(w, &w.embed());
                }
            }
            text.push_str(&verdict_text(&v));
            json!({"command": "solve", "signature": signature_value(&sig), "result": v.to_value()})
        }
        Command::Entail {
            program,
            query,
            language: lang,
            bounds,
        } => {
            let b = bounds.resolve()?;
            let lang = language(lang.as_ref())?;
            let (p, sig) = parse_program(&read(program)?, lang.as_ref()).map_err(|e| syntax_failure(program, e))?;
            let (q, sig) = parse_query(&read(query)?, &sig, lang.is_some()).map_err(|e| syntax_failure(query, e))?;
            sig.check().map_err(|e| syntax_failure(query, e))?;
            let r = entail(&p, &q, &sig, &b).map_err(check_failure)?;
            if cli.dump_automata {
                for d in [&r.positive, &r.negative] {
                    if let Some(w) = d.countermodel() {
                        dump_model(w, &w.embed());
                    }
                }
            }
            let qtext = r.query.display(&sig).to_string();
            let _ = writeln!(text, "query: {qtext}");
            text.push_str(&direction_text("Q", &r.positive));
            text.push_str(&direction_text("not Q", &r.negative));
            let dir = |d: &Direction| {
                json!({
                    "sentence": d.sentence.display(&sig).to_string(),
                    "countermodel_found": d.verdict.is_sat(),
                    "result": d.verdict.to_value(),
                })
            };
            json!({
                "command": "entail",
                "signature": signature_value(&sig),
                "query": qtext,
                "positive": dir(&r.positive),
                "negative": dir(&r.negative),
            })
        }
    };
    Ok(Report { text, value })
}

/// Runs a parsed command line, returning the document to print on stdout.
pub fn run(cli: &Cli) -> Result<String, Failure> {
    let start = Instant::now();
    let report = run_command(cli)?;
    Ok(match cli.format {
        Format::Text => report.text,
        Format::Json => {
            let mut value = report.value;
            value["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
            let mut s = serde_json::to_string_pretty(&value).expect("serializable");
            s.push('\n');
            s
        }
    })
}

pub fn main_entry() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.status)
        }
    }
}
