use clap::Parser;
use std::io::Write;
use tfactor::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let out = run(&cli);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.text.as_bytes());
    let _ = stdout.flush();
    std::process::exit(out.code);
}
