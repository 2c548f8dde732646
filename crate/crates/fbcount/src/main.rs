use clap::Parser;
use fbcount::cli::{run, Cli, EXIT_MALFORMED};

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_MALFORMED
        }
    };
    std::process::exit(code);
}
