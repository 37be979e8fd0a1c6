use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use wittforge::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = run(&cli);
    let mut err = std::io::stderr().lock();
    for line in &report.table {
        let _ = writeln!(err, "{line}");
    }
    let mut out = std::io::stdout().lock();
    if let Err(e) = report.write(cli.emit, &mut out) {
        let _ = writeln!(err, "error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(report.status.code())
}
