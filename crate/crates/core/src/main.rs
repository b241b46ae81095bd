use std::process::ExitCode;

fn main() -> ExitCode {
    panharmonic::cli::main_with_args(std::env::args_os())
}
