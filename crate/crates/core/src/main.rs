use clap::Parser;
use lorentz_gram::cli::{run, Cli};
use std::io::Write;

fn main() {
    let cli = Cli::parse();
    let outcome = run(&cli);
    let mut out = std::io::stdout().lock();
    // A closed pipe is not worth a panic.
    let _ = out.write_all(outcome.output.as_bytes());
    let _ = out.flush();
    std::process::exit(outcome.code);
}
