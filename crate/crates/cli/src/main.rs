use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use rarefact_cli::{run, RunConfig};

fn main() -> ExitCode {
    let config = RunConfig::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(&config, &mut out);
    let _ = out.flush();
    match result {
        Ok(status) => ExitCode::from(status.exit_code()),
        Err(e) => {
            eprintln!("rarefact: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
