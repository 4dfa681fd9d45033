use std::process::ExitCode;

fn main() -> ExitCode {
    moncomp::cli::main_entry()
}
