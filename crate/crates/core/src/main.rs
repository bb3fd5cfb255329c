use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = cm_torsion::cli::dispatch(std::env::args_os());
    let written = if outcome.code == 0 {
        std::io::stdout().write_all(outcome.output.as_bytes())
    } else {
        std::io::stderr().write_all(outcome.output.as_bytes())
    };
    if written.is_err() {
        return ExitCode::from(1);
    }
    ExitCode::from(outcome.code as u8)
}
