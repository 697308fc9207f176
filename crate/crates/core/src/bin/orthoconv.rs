use std::process::ExitCode;

fn main() -> ExitCode {
    orthoconv::cli::run(std::env::args_os())
}
