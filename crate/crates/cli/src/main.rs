use clap::Parser;

fn main() {
    let cli = bayes_ucb_cli::Cli::parse();
    match bayes_ucb_cli::run(&cli) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
