use clap::Parser;
use ellspin::cli;

fn main() {
    let parsed = cli::Cli::try_parse();
    match parsed {
        Ok(args) => std::process::exit(cli::run(args)),
        Err(e) => {
            // help/version requests exit 0; everything unparsable is a
            // usage error
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                std::process::exit(cli::EXIT_OK);
            }
            let _ = e.print();
            std::process::exit(cli::EXIT_USAGE);
        }
    }
}
