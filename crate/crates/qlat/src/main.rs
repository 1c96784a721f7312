use clap::Parser;

fn main() {
    let cli = qlat::Cli::parse();
    match qlat::run(&cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
        }
        Err(e) => {
            eprintln!("qlat: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
