use clap::Parser;

fn main() {
    let cli = aflt::cli::Cli::parse();
    match aflt::cli::run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
