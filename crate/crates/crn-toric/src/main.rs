use std::process::exit;

fn main() {
    exit(crn_toric::cli::run(std::env::args_os()));
}
