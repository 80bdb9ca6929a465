use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (outcome, manifest, path) = tomofix_cli::run(std::env::args_os());
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    let _ = std::io::stdout().flush();
    let mut code = outcome.code;
    if let (Some(m), Some(path)) = (manifest, path) {
        let body = serde_json::to_string_pretty(&m).expect("serializable") + "\n";
        if let Err(e) = std::fs::write(&path, body) {
            eprintln!("tomofix: cannot write manifest {}: {e}", path.display());
            code = tomofix_cli::EXIT_USAGE;
        }
    }
    ExitCode::from(code as u8)
}
