//! `thoma`: command-line access to the thoma-core library.
//!
//! Exit codes: 0 success, 1 validation failure or bad input, 2 numerical
//! instability.

mod commands;
mod output;
mod params;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thoma_core::error::Error;

use crate::commands::*;
use crate::output::Format;

#[derive(Parser, Debug)]
#[command(name = "thoma", version, about = "Z-measures, Jack graphs, coalescent coefficients and the dual process")]
struct Cli {
    /// Output format (CSV by default; `density` defaults to JSON).
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Append the invariant-check summary; a failed invariant gives exit code 1.
    #[arg(long, global = true)]
    report: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Partitions of n in reverse lexicographic order.
    Partitions(PartitionsArgs),
    /// Recursion dimensions against the closed forms.
    Dims(DimsArgs),
    /// Expansion of the Jack function J_η in another basis.
    Jack(JackArgs),
    /// M_n(η) over one level.
    ZmeasureTable(ZTableArgs),
    /// Up-down chain on one level against M_n.
    UpdownSim(UpDownArgs),
    /// Death-process coefficients d_mn(t) or d_n(t).
    Coalescent(CoalescentArgs),
    /// Dual jump process paths against the analytic law.
    DualSim(DualSimArgs),
    /// Exact duality residuals at ϑ = 1.
    DualityCheck(DualityArgs),
    /// Eigenvalues of the pre-generator on low-degree polynomials.
    SpectrumCheck(SpectrumArgs),
    /// Both series for the transition density q(t,σ,ω).
    Density(DensityArgs),
    /// Ergodic bound against the coefficient tail over a time grid.
    Ergodic(ErgodicArgs),
    /// Weak-convergence probe for test functions j_ζ.
    Probe(ProbeArgs),
}

fn run(cli: &Cli) -> thoma_core::error::Result<output::Output> {
    match &cli.command {
        Command::Partitions(a) => partitions(a),
        Command::Dims(a) => dims(a),
        Command::Jack(a) => jack(a),
        Command::ZmeasureTable(a) => zmeasure_table(a),
        Command::UpdownSim(a) => updown_sim(a),
        Command::Coalescent(a) => coalescent(a),
        Command::DualSim(a) => dual_sim(a),
        Command::DualityCheck(a) => duality_check(a),
        Command::SpectrumCheck(a) => spectrum_check(a),
        Command::Density(a) => density(a),
        Command::Ergodic(a) => ergodic(a),
        Command::Probe(a) => probe(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Ok(n) = std::env::var("THOMA_THREADS") {
        if let Ok(n) = n.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(if matches!(e, Error::Unstable(_)) { 2 } else { 1 });
        }
    };
    let written = match &cli.output {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            out.write(&mut w, cli.format, cli.report)?;
            w.flush()
        }),
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            out.write(&mut w, cli.format, cli.report)
        }
    };
    if let Err(e) = written {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return ExitCode::SUCCESS;
        }
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    // the summary decides the exit code only when it was asked for, except
    // for the check commands whose output is the verdict itself
    if !out.passed && (cli.report || out.always_checked) {
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
