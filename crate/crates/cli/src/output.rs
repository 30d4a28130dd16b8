use std::io::Write;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;

use crate::RunConfig;

pub const SCHEMA: &str = "polylog-hodge/1";

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    config: &'a RunConfig,
    pass: bool,
    report: &'a T,
}

pub fn json<T: Serialize>(config: &RunConfig, pass: bool, report: &T) -> anyhow::Result<Vec<u8>> {
    let mut buf = serde_json::to_vec_pretty(&Envelope {
        schema: SCHEMA,
        config,
        pass,
        report,
    })?;
    buf.push(b'\n');
    Ok(buf)
}

pub fn csv<T: Serialize>(rows: impl IntoIterator<Item = T>) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    Ok(w.into_inner()?)
}

/// Writes to `out` via a temporary file in the same directory and a
/// rename, or to stdout.
pub fn emit(bytes: &[u8], out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)
                .with_context(|| format!("creating a temporary file in {}", dir.display()))?;
            tmp.write_all(bytes)?;
            tmp.as_file().sync_all()?;
            tmp.persist(path)
                .with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(())
}
