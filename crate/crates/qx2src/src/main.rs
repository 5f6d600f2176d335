use std::process::ExitCode;

use clap::Parser;

use qx2src::{run, Cli, Outcome};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Outcome::Usage.code() } else { 0 });
        }
    };
    ExitCode::from(run(cli).code())
}
