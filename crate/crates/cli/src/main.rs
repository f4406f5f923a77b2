use std::io::Write;
use std::process::ExitCode;

use monopole_cli::{execute, CliError, EXIT_INVALID};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let outcome = match execute(&argv) {
        Ok(o) => o,
        Err(CliError::Usage(e)) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
        Err(e) => {
            eprintln!("monopole-spectra: {e}");
            return ExitCode::from(e.exit_code());
        }
    };

    let written = match &outcome.cli.opts.output {
        Some(path) => std::fs::write(path, &outcome.rendered)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(outcome.rendered.as_bytes())
            .map_err(|e| format!("cannot write to stdout: {e}")),
    };
    if let Err(msg) = written {
        eprintln!("monopole-spectra: {msg}");
        return ExitCode::from(EXIT_INVALID);
    }
    for check in outcome.envelope.checks.iter().filter(|c| !c.passed) {
        eprintln!("monopole-spectra: check failed: {} ({:e} > {:e})", check.name, check.measured, check.tolerance);
    }
    ExitCode::from(outcome.exit_code())
}
