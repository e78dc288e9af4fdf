use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out, err) = superiso_cli::execute(std::env::args_os().skip(1));
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    if !err.is_empty() {
        eprint!("{err}");
        if !err.ends_with('\n') {
            eprintln!();
        }
    }
    ExitCode::from(code)
}
