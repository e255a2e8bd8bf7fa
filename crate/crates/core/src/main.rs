use clap::Parser;

use khc_core::cli::{run, Cli};

fn main() {
    let out = run(&Cli::parse());
    if out.code == 0 || out.code == 1 && !out.output.starts_with("error:") {
        print!("{}", out.output);
    } else {
        eprint!("{}", out.output);
    }
    std::process::exit(out.code);
}
