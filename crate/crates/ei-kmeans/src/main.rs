use std::process::ExitCode;

fn main() -> ExitCode {
    ei_kmeans::cli::run()
}
