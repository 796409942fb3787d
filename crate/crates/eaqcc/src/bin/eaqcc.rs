use std::process::ExitCode;

fn main() -> ExitCode {
    eaqcc::cli::run()
}
