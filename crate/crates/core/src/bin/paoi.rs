use clap::Parser;

fn main() -> std::process::ExitCode {
    std::process::ExitCode::from(paoi::cli::run(paoi::cli::Cli::parse()))
}
