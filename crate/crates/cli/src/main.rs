use std::io::{Read, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let mut stdin = Vec::new();
    if argv.get(1).map(String::as_str) == Some("encrypt") {
        if let Err(e) = std::io::stdin().read_to_end(&mut stdin) {
            eprintln!("error: reading standard input: {e}");
            return ExitCode::from(1);
        }
    }
    let out = transcert_cli::run(argv, &stdin);
    let _ = std::io::stdout().write_all(&out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
