use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = io::stdout();
    match satnr_cli::run_with(std::env::args_os(), &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("satnr: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
