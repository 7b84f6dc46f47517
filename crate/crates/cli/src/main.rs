//! `qpdeg`: command-line front end for the qpdeg-core library.

mod args;
mod commands;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use commands::Failure;

/// Whole-file write: temp file in the target directory, then rename.
fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = commands::run(&cli).and_then(|out| {
        match &cli.out {
            Some(path) => write_atomic(path, &out.text).map_err(|e| Failure {
                code: 1,
                message: format!("{}: {e}", path.display()),
            })?,
            None => {
                let mut stdout = std::io::stdout().lock();
                let _ = stdout.write_all(out.text.as_bytes());
                let _ = stdout.flush();
            }
        }
        Ok(out.code)
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code as u8)
        }
    }
}
