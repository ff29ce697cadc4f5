use clap::Parser;
use toric_opengw::cli::{run, JobConfig};

fn main() {
    let outcome = run(&JobConfig::parse());
    if outcome.diagnostic {
        eprint!("{}", outcome.output);
    } else {
        print!("{}", outcome.output);
    }
    std::process::exit(outcome.exit_code);
}
