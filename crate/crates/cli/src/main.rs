use clap::Parser;
use hadamard_cli::{run, Cli, Report};
use std::io::Write;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

/// Stdout may be a closed pipe; losing summary lines must not abort the run.
fn say(line: &str) {
    let _ = writeln!(std::io::stdout(), "{line}");
}

fn write(report: &Report) -> Result<(), hadamard_cli::CliError> {
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    report.table.write(&report.out, Some(timestamp))?;
    say(&format!("wrote {}", report.out.display()));
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (report, err) = run(&cli.command);
    if let Some(report) = &report {
        for line in &report.lines {
            say(line);
        }
        if let Err(e) = write(report) {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    }
    if let Some(e) = err {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code());
    }
    let passed = report.is_some_and(|r| r.passed());
    ExitCode::from(if passed { 0 } else { 1 })
}
