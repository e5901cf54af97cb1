use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use hcyc::{emit_report, exit_code, run_command, RunConfig};

fn main() -> ExitCode {
    let cfg = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run_command(&cfg).and_then(|r| {
        Ok((
            emit_report(&r, cfg.format, cfg.out.as_deref())?,
            exit_code(&r),
        ))
    }) {
        Ok((text, code)) => {
            if let Some(t) = text {
                let _ = std::io::stdout().write_all(t.as_bytes());
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("hcyc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
