//! File formats, corpus IO and the experiment pipeline around
//! [`semspan_core`].

use std::fs;
use std::io;
use std::path::Path;

pub use semspan_core as core;

pub mod config;
pub mod error;
pub mod formats;
pub mod hash;
pub mod jsonl;
pub mod pipeline;
pub mod report;

pub use error::{Error, Result};

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic<F>(path: &Path, write: F) -> Result<()>
where
    F: FnOnce(&mut fs::File) -> io::Result<()>,
{
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    write(tmp.as_file_mut()).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub fn write_string(path: &Path, contents: &str) -> Result<()> {
    write_atomic(path, |f| io::Write::write_all(f, contents.as_bytes()))
}

pub fn read_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}
