use atiyah_cli::{run, Scenario};
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "atiyah", version, about = "Verify discrete connections and their groupoids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the suites of a scenario file and write a JSON report.
    Run {
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let Command::Run { scenario, out, seed, samples, tol } = cli.command;
    let mut s = match Scenario::load(&scenario) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    s.seed = seed.unwrap_or(s.seed);
    s.samples = samples.unwrap_or(s.samples);
    s.tolerance = tol.unwrap_or(s.tolerance);
    if let Err(e) = s.validate() {
        eprintln!("{e}");
        return ExitCode::from(2);
    }
    let report = run(&s);
    if let Err(e) = std::fs::write(&out, report.to_json()) {
        eprintln!("cannot write {}: {e}", out.display());
        return ExitCode::from(2);
    }
    for r in &report.suites {
        let status = if r.pass { "pass" } else { "FAIL" };
        println!("{status} {:<20} max_defect={:.3e} samples={} {}ms", r.suite.as_str(), r.max_defect, r.samples, r.wall_time_ms);
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
