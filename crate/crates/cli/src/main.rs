//! `stagec`: check, elaborate, lint and run staged programs.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;
use stagec::corpus::check_dir;
use stagec::eval::TraceEvent;
use stagec::{pretty_core, Diagnostic, Pipeline, PipelineError, StepBudget};

#[derive(Parser, Debug)]
#[command(
    name = "stagec",
    version,
    about = "Typechecker, elaborator and evaluator for a staged calculus with type classes"
)]
struct Cli {
    /// Report diagnostics and results as JSON
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Typecheck a source program
    Check { file: PathBuf },
    /// Print the elaborated core program
    Elaborate {
        file: PathBuf,
        /// Write to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Typecheck a core program
    Lint { file: PathBuf },
    /// Elaborate and evaluate a source program
    Run {
        file: PathBuf,
        /// Give up after this many reduction steps
        #[arg(long, env = "STAGEC_MAX_STEPS", default_value_t = StepBudget::DEFAULT.0)]
        max_steps: u64,
        /// Print every intermediate program
        #[arg(long)]
        trace: bool,
    },
    /// Check every `.sth` file in a directory against its verdict header
    Corpus { dir: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(&cli) as u8)
}

fn read(path: &Path, json: bool) -> Result<String, i32> {
    std::fs::read_to_string(path).map_err(|e| {
        report(
            &Diagnostic::usage(format!("cannot read {}: {e}", path.display())),
            path,
            json,
        );
        2
    })
}

fn report(d: &Diagnostic, file: &Path, json: bool) {
    if json {
        eprintln!("{}", d.to_json());
    } else {
        eprintln!("{}", d.render(&file.display().to_string()));
    }
}

fn fail(e: &PipelineError, file: &Path, json: bool) -> i32 {
    report(&e.diagnostic(), file, json);
    e.exit_code()
}

fn run(cli: &Cli) -> i32 {
    let json = cli.json;
    match &cli.command {
        Command::Check { file } => {
            let src = match read(file, json) {
                Ok(s) => s,
                Err(code) => return code,
            };
            match Pipeline::default().check(&src) {
                Ok(_) => 0,
                Err(e) => fail(&e, file, json),
            }
        }
        Command::Elaborate { file, out } => {
            let src = match read(file, json) {
                Ok(s) => s,
                Err(code) => return code,
            };
            let core = match Pipeline::default().elaborate(&src) {
                Ok(c) => c,
                Err(e) => return fail(&e, file, json),
            };
            let text = pretty_core(&core);
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        let d = Diagnostic::usage(format!("cannot write {}: {e}", path.display()));
                        report(&d, path, json);
                        return 2;
                    }
                }
                None => print!("{text}"),
            }
            0
        }
        Command::Lint { file } => {
            let src = match read(file, json) {
                Ok(s) => s,
                Err(code) => return code,
            };
            match Pipeline::default().lint_core(&src) {
                Ok(_) => 0,
                Err(e) => fail(&e, file, json),
            }
        }
        Command::Run {
            file,
            max_steps,
            trace,
        } => {
            let src = match read(file, json) {
                Ok(s) => s,
                Err(code) => return code,
            };
            let pipeline = Pipeline::new(StepBudget(*max_steps));
            let result = pipeline.run_traced(&src, |k, rule, p| {
                if !*trace {
                    return;
                }
                if json {
                    let ev = TraceEvent {
                        step: k,
                        rule,
                        program: pretty_core(p),
                    };
                    println!(
                        "{}",
                        serde_json::to_string(&ev).expect("trace events serialize")
                    );
                } else {
                    println!("[{k}] {rule}");
                    print!("{}", pretty_core(p));
                }
            });
            match result {
                Ok(out) => {
                    if json {
                        println!("{}", json!({"value": out.display(), "steps": out.steps}));
                    } else {
                        println!("{}", out.display());
                    }
                    0
                }
                Err(e) => fail(&e, file, json),
            }
        }
        Command::Corpus { dir } => {
            let results = match check_dir(&Pipeline::default(), dir) {
                Ok(r) => r,
                Err(e) => {
                    let d = Diagnostic::usage(format!("cannot read {}: {e}", dir.display()));
                    report(&d, dir, json);
                    return 2;
                }
            };
            let passed = results.iter().filter(|r| r.passed).count();
            if json {
                println!(
                    "{}",
                    serde_json::to_string(&results).expect("results serialize")
                );
            } else {
                let width = results.iter().map(|r| r.file.len()).max().unwrap_or(0);
                for r in &results {
                    let mark = if r.passed { "PASS" } else { "FAIL" };
                    let mut line = format!("{mark}  {:width$}  {}", r.file, r.expected);
                    if !r.passed {
                        line.push_str(&format!("  (got {})", r.actual));
                    }
                    println!("{line}");
                }
                println!("{passed}/{} verdicts matched", results.len());
            }
            if passed == results.len() {
                0
            } else {
                1
            }
        }
    }
}
