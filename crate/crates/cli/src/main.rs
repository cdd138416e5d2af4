use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use linfer::{check_program, render_types, Diagnostic, SolveOptions};

#[derive(Parser)]
#[command(
    name = "linfer",
    version,
    about = "Infer multiplicity-qualified types for .lin programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Typecheck a file and print the type of every binding.
    Check {
        file: PathBuf,
        /// Print generated constraints and solver steps to stderr.
        #[arg(long)]
        dump_constraints: bool,
        /// Keep ambiguous multiplicity variables instead of eliminating them.
        #[arg(long)]
        no_elim: bool,
        /// Verify every logic query against brute-force enumeration.
        #[arg(long)]
        oracle_check: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match cli.command {
        Command::Check {
            file,
            dump_constraints,
            no_elim,
            oracle_check,
        } => check(&file, dump_constraints, no_elim, oracle_check),
    }
}

fn check(file: &PathBuf, dump: bool, no_elim: bool, oracle_check: bool) -> ExitCode {
    let src = match std::fs::read_to_string(file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", file.display());
            return ExitCode::from(2);
        }
    };
    let opts = SolveOptions {
        eliminate: !no_elim,
        oracle_check,
        trace: dump,
    };
    let report = match check_program(&src, opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{}:{}", file.display(), Diagnostic::parse(&e).render(&src));
            return ExitCode::from(1);
        }
    };
    if dump {
        eprint!("{}", report.dump());
    }
    print!("{}", render_types(&report));
    for d in report.errors() {
        eprintln!("{}:{}", file.display(), d.render(&src));
    }
    if oracle_check {
        let s = report.stats;
        eprintln!(
            "oracle: {} queries checked, {} skipped (entail {}, sat {}, qe {})",
            s.oracle_checks, s.oracle_skipped, s.entail_calls, s.sat_calls, s.qe_calls
        );
    }
    if report.is_ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
