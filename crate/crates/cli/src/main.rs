use std::io::{Read, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut stdin = Vec::new();
    let args: Vec<String> = std::env::args().collect();
    // only read stdin for subcommands that consume it
    if matchertext_cli::wants_stdin(&args) {
        if let Err(e) = std::io::stdin().read_to_end(&mut stdin) {
            eprintln!("error: reading stdin: {e}");
            return ExitCode::from(2);
        }
    }
    let out = matchertext_cli::run(&args, &stdin);
    let _ = std::io::stdout().write_all(&out.stdout);
    let _ = std::io::stderr().write_all(&out.stderr);
    ExitCode::from(out.status.code())
}
