use std::io;
use std::process::ExitCode;

use wha_cli::{run, Io, TOL_ENV};

fn main() -> ExitCode {
    let (stdin, stdout, stderr) = (io::stdin(), io::stdout(), io::stderr());
    let mut io = Io {
        stdin: &mut stdin.lock(),
        stdout: &mut stdout.lock(),
        stderr: &mut stderr.lock(),
        env_tol: std::env::var(TOL_ENV).ok(),
    };
    let code = run(std::env::args_os(), &mut io);
    ExitCode::from(code as u8)
}
