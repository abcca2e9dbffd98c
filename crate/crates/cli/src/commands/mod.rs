pub mod analyze;
pub mod explicit;
pub mod simulate;
pub mod theory;
pub mod ttest;

use std::path::Path;

use anyhow::Result;
use serde::Serialize;

/// Serialize rows to CSV with a header.
pub fn write_rows<T: Serialize>(w: &mut dyn std::io::Write, rows: &[T]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn report(paths: &[impl AsRef<Path>]) {
    for p in paths {
        println!("wrote {}", p.as_ref().display());
    }
}
