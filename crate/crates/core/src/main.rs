use std::process::ExitCode;

fn main() -> ExitCode {
    bivq::cli::main()
}
