use std::io::{ErrorKind, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let mut buffer = Vec::new();
    let stderr = std::io::stderr();
    let code = conemetric::cli::run(&args, &mut buffer, &mut stderr.lock());
    // a closed downstream pipe (e.g. `| head`) is not an error
    match std::io::stdout().lock().write_all(&buffer) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => {
            eprintln!("error: {e}");
            ExitCode::from(conemetric::cli::EXIT_USAGE)
        }
        _ => ExitCode::from(code),
    }
}
