use std::process::ExitCode;

use clap::Parser;
use overlap_sense::cli_io::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli.command.resolve().and_then(|inv| inv.run());
    match result {
        Ok(manifest) => {
            for w in &manifest.warnings {
                eprintln!("warning: {w}");
            }
            for path in &manifest.outputs {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
