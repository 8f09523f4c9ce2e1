use std::process::ExitCode;

fn main() -> ExitCode {
    webfuse::cli::main()
}
