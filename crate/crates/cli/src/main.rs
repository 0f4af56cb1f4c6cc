use std::io::{Read, Write};

use clap::Parser;
use pointgb_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let outcome = run(&cli, &mut || {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    });
    std::io::stdout().write_all(outcome.stdout.as_bytes()).expect("write stdout");
    std::io::stderr().write_all(outcome.stderr.as_bytes()).expect("write stderr");
    std::process::exit(outcome.code);
}
