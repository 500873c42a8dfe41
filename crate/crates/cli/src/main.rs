use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(ouh::run(std::env::args_os()))
}
