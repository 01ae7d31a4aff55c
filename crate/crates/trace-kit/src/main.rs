use std::process::ExitCode;

fn main() -> ExitCode {
    trace_kit::cli::run()
}
