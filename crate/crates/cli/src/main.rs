use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = std::io::stdout();
    match msyds_cli::run(std::env::args_os().collect(), &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("msyds: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
