use std::io::Write;
use std::panic;
use std::process::ExitCode;

use agt_tool::{main_with_args, EXIT_INTERNAL};

fn main() -> ExitCode {
    let outcome = panic::catch_unwind(|| main_with_args(std::env::args_os()));
    let outcome = match outcome {
        Ok(o) => o,
        Err(_) => return ExitCode::from(EXIT_INTERNAL as u8),
    };
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
