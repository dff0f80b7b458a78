use std::io::Write;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use toric_cli::{render_error, run, Cli, Format};

fn emit(text: &str, to_stdout: bool) -> anyhow::Result<()> {
    if to_stdout {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes()).context("writing to stdout")?;
        out.flush().context("flushing stdout")?;
    } else {
        std::io::stderr().lock().write_all(text.as_bytes()).context("writing to stderr")?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (text, to_stdout, code) = match run(&cli) {
        Ok(out) => (out.text, true, out.code),
        Err(e) => (
            render_error(cli.format, &e),
            cli.format == Format::Machine,
            e.exit_code(),
        ),
    };
    if let Err(e) = emit(&text, to_stdout) {
        eprintln!("error: {e:#}");
    }
    ExitCode::from(code as u8)
}
