use std::process::ExitCode;

use clap::Parser;
use ussd_lab::RunConfig;

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    match ussd_lab::run(&cfg) {
        Ok(code) => ExitCode::from(code as u8),
        Err(ussd_lab::LabError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
