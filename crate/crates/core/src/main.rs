use std::process::ExitCode;

fn main() -> ExitCode {
    parametrix::cli::main_entry()
}
