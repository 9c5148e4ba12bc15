use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(dipole_transfer::cli::main_with_args(std::env::args_os()))
}
