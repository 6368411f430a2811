use std::process::ExitCode;

fn main() -> ExitCode {
    smu_cli::main_with_args(std::env::args_os())
}
