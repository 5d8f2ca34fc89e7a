use std::io::IsTerminal;

use startflow::cli::{run, Io, CONFIG_ENV};

fn main() {
    let stdin = std::io::stdin();
    let stdin_is_terminal = stdin.is_terminal();
    let mut stdin = stdin.lock();
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    let mut io = Io {
        stdin: &mut stdin,
        stdout: &mut stdout,
        stderr: &mut stderr,
        stdin_is_terminal,
        env_config: std::env::var_os(CONFIG_ENV).map(Into::into),
    };
    let status = run(std::env::args_os(), &mut io);
    std::process::exit(status.code());
}
