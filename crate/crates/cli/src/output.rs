use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::{CliError, CliResult, OutputArgs};

/// Writes through a sibling temporary file and a rename, so readers never see partial output.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let err = |source| CliError::Write {
        path: path.display().to_string(),
        source,
    };
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    std::fs::write(&tmp, contents).map_err(err)?;
    std::fs::rename(&tmp, path).map_err(err)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output types serialise");
    s.push('\n');
    s
}

pub fn emit_text(out: &OutputArgs, text: &str) -> CliResult<()> {
    match &out.output {
        Some(path) => write_atomic(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|source| CliError::Write {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

pub fn emit<T: Serialize>(out: &OutputArgs, value: &T) -> CliResult<()> {
    emit_text(out, &to_json(value))
}
