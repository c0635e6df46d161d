use std::process::ExitCode;

fn main() -> ExitCode {
    otlab_cli::run(std::env::args_os())
}
