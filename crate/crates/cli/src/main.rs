use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(zfrt_cli::app::run(std::env::args_os()))
}
