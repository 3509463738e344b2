use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(lsv_metrology::cli::main_with_args(std::env::args_os()))
}
