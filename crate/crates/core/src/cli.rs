//! The `dlwb` command line. [`run`] takes the argument vector and the two
//! output streams so it can be driven from tests without spawning a process.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::engine::{least_fixpoint, Tag, TagSet};
use crate::fixtures;
use crate::sim::{
    check_coherence, check_inclusion_theorem, check_simulation, gen_theory, AdditionKind, Claim, GenConfig,
    SimCheckConfig, Verdict,
};
use crate::syntax::{add_theories, validate_theory, Theory};
use crate::text::{conclusions_json, format_conclusions, parse_theory_with, print_theory, ParseOptions};
use crate::transform::TransformKind;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "dlwb", version, about = "Defeasible logic workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a theory and print its canonical form.
    Parse {
        file: PathBuf,
        #[arg(long)]
        loose: bool,
    },
    /// Print the conclusions of a theory for the selected tags.
    Infer {
        file: PathBuf,
        /// Comma separated tag spellings (D, pd, pd*, d, d*, s, s*).
        #[arg(long, value_delimiter = ',')]
        tags: Vec<Tag>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        loose: bool,
    },
    /// Apply a transformation and print the resulting theory.
    Transform {
        file: PathBuf,
        #[arg(long)]
        kind: TransformKind,
        #[arg(long)]
        loose: bool,
    },
    /// Print the union of two label-disjoint theories.
    Add {
        base: PathBuf,
        addition: PathBuf,
        #[arg(long)]
        loose: bool,
    },
    /// Check a simulation claim against random modular additions.
    CheckSim {
        file: PathBuf,
        #[arg(long)]
        transform: TransformKind,
        #[arg(long)]
        source: Tag,
        #[arg(long)]
        target: Tag,
        #[arg(long)]
        additions: AdditionKind,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Addition used for the first trial.
        #[arg(long)]
        fixture: Option<PathBuf>,
        #[arg(long)]
        loose: bool,
    },
    /// Check the inclusion chain and coherence on files and/or random theories.
    CheckProps {
        files: Vec<PathBuf>,
        /// Number of random theories; requires --seed.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        loose: bool,
    },
    /// Reproduce the bundled worked examples.
    Examples {
        #[arg(long)]
        json: bool,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

type Outcome = Result<i32, Failure>;

/// Runs one command and returns its exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Parse { file, loose } => {
            let d = load(&file, loose)?;
            emit(out, &print_theory(&d))?;
            Ok(EXIT_OK)
        }
        Command::Infer {
            file,
            tags,
            json,
            loose,
        } => {
            let d = load(&file, loose)?;
            let wanted = if tags.is_empty() { TagSet::ALL } else { TagSet::of(&tags) };
            let c = least_fixpoint(&d, wanted).restrict(wanted);
            let text = if json {
                let mut s = conclusions_json(&c);
                s.push('\n');
                s
            } else {
                format_conclusions(&c)
            };
            emit(out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Transform { file, kind, loose } => {
            let d = load(&file, loose)?;
            emit(out, &print_theory(&kind.apply(&d)))?;
            Ok(EXIT_OK)
        }
        Command::Add { base, addition, loose } => {
            let d = load(&base, loose)?;
            let a = load(&addition, loose)?;
            match add_theories(&d, &a) {
                Ok(sum) => {
                    emit(out, &print_theory(&sum))?;
                    Ok(EXIT_OK)
                }
                Err(e) => Err(Failure {
                    code: EXIT_FAILED,
                    message: e.to_string(),
                }),
            }
        }
        Command::CheckSim {
            file,
            transform,
            source,
            target,
            additions,
            trials,
            seed,
            fixture,
            loose,
        } => {
            let d = load(&file, loose)?;
            let fixture = fixture.map(|p| load(&p, loose)).transpose()?;
            let deterministic = fixture.is_some() && trials <= 1;
            let seed = match seed {
                Some(s) => s,
                None if deterministic => 0,
                None => return Err(Failure::usage("--seed is required when additions are generated")),
            };
            if trials == 0 {
                return Err(Failure::usage("--trials must be positive"));
            }
            let claim = Claim::new(transform, source, target, additions);
            let mut cfg = SimCheckConfig::new(claim, trials, seed);
            cfg.fixture = fixture;
            let report = check_simulation(&d, &cfg).map_err(|e| Failure::usage(e.to_string()))?;
            emit(out, &format!("{}\n", report.to_json()))?;
            Ok(match report.verdict {
                Verdict::AllPass => EXIT_OK,
                Verdict::Mismatch => EXIT_FAILED,
            })
        }
        Command::CheckProps {
            files,
            trials,
            seed,
            json,
            loose,
        } => check_props(&files, trials, seed, json, loose, out),
        Command::Examples { json } => {
            let results = fixtures::run_examples();
            let text = if json {
                let rows: Vec<_> = results
                    .iter()
                    .map(|r| ExampleRow {
                        name: r.name,
                        passed: r.passed,
                        detail: &r.detail,
                    })
                    .collect();
                format!("{}\n", serde_json::to_string_pretty(&rows).expect("rows serialise"))
            } else {
                let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
                results
                    .iter()
                    .map(|r| {
                        let mark = if r.passed { "PASS" } else { "FAIL" };
                        format!("{mark}  {:<width$}  {}\n", r.name, r.detail)
                    })
                    .collect()
            };
            emit(out, &text)?;
            Ok(if results.iter().all(|r| r.passed) {
                EXIT_OK
            } else {
                EXIT_FAILED
            })
        }
    }
}

#[derive(Serialize)]
struct ExampleRow<'a> {
    name: &'a str,
    passed: bool,
    detail: &'a str,
}

#[derive(Serialize)]
struct PropsRow {
    theory: String,
    inclusion: Vec<String>,
    coherence: Vec<String>,
}

fn check_props(
    files: &[PathBuf],
    trials: Option<usize>,
    seed: Option<u64>,
    json: bool,
    loose: bool,
    out: &mut dyn Write,
) -> Outcome {
    let mut subjects: Vec<(String, Theory)> = Vec::new();
    for f in files {
        subjects.push((f.display().to_string(), load(f, loose)?));
    }
    match (trials, seed) {
        (Some(_), None) => return Err(Failure::usage("--trials needs --seed")),
        (t, Some(s)) => {
            let gen = GenConfig::default();
            for i in 0..t.unwrap_or(200) as u64 {
                subjects.push((format!("random#{i}"), gen_theory(&gen, s ^ i)));
            }
        }
        (None, None) if files.is_empty() => {
            return Err(Failure::usage("give theory files or --seed for random theories"))
        }
        (None, None) => {}
    }
    let rows: Vec<PropsRow> = subjects
        .iter()
        .map(|(name, d)| PropsRow {
            theory: name.clone(),
            inclusion: check_inclusion_theorem(d)
                .iter()
                .map(|v| {
                    let witnesses: Vec<String> = v.witnesses.iter().map(|q| q.to_string()).collect();
                    format!("{}: {}", v.containment, witnesses.join(" "))
                })
                .collect(),
            coherence: check_coherence(d)
                .iter()
                .map(|(tag, q)| format!("+{tag} and -{tag} {q}"))
                .collect(),
        })
        .collect();
    let failed = rows.iter().filter(|r| !r.inclusion.is_empty() || !r.coherence.is_empty()).count();
    let text = if json {
        format!("{}\n", serde_json::to_string_pretty(&rows).expect("rows serialise"))
    } else {
        let mut s = String::new();
        for r in &rows {
            if r.inclusion.is_empty() && r.coherence.is_empty() {
                continue;
            }
            for v in &r.inclusion {
                s.push_str(&format!("{}: inclusion violated {v}\n", r.theory));
            }
            for v in &r.coherence {
                s.push_str(&format!("{}: incoherent {v}\n", r.theory));
            }
        }
        s.push_str(&format!("{} theories checked, {} with violations\n", rows.len(), failed));
        s
    };
    emit(out, &text)?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILED })
}

fn load(path: &Path, loose: bool) -> Result<Theory, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let d = parse_theory_with(&text, ParseOptions { loose }).map_err(|errors| {
        let lines: Vec<String> = errors.iter().map(|e| format!("{}:{e}", path.display())).collect();
        Failure::usage(lines.join("\n"))
    })?;
    let v = validate_theory(&d);
    if !v.is_ok() {
        let lines: Vec<String> = v.violations.iter().map(|x| format!("{}: {x}", path.display())).collect();
        return Err(Failure::usage(lines.join("\n")));
    }
    Ok(d)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Failure::usage(format!("cannot write output: {e}")))
}
