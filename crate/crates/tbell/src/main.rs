use std::process::ExitCode;

fn main() -> ExitCode {
    tbell::cli::run()
}
