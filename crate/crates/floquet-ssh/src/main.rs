use std::process::ExitCode;

fn main() -> ExitCode {
    let code = floquet_ssh::cli::cli_run(std::env::args_os());
    ExitCode::from(code as u8)
}
