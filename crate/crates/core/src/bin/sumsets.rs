use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = sumset_core::cli::main_with_args(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(outcome.output.as_bytes());
    let _ = stdout.flush();
    for notice in &outcome.notices {
        eprintln!("{notice}");
    }
    ExitCode::from(outcome.code)
}
