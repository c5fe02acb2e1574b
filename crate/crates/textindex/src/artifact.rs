//! On-disk form of a [`TermIndex`].
//!
//! ```text
//! NPSWATCH-INDEX <format version> <engine version>\n
//! <JSON body>
//! ```
//!
//! The body is deterministic: building twice from the same corpus gives
//! byte-identical artifacts.

use std::io::{BufRead, Write};

use crate::{ArtifactError, TermIndex};

pub const MAGIC: &str = "NPSWATCH-INDEX";
pub const FORMAT_VERSION: u32 = 1;
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn write_artifact<W: Write>(index: &TermIndex, mut out: W) -> Result<(), ArtifactError> {
    writeln!(out, "{MAGIC} {FORMAT_VERSION} {ENGINE_VERSION}")?;
    serde_json::to_writer(&mut out, index)?;
    out.flush()?;
    Ok(())
}

pub fn read_artifact<R: BufRead>(mut input: R) -> Result<TermIndex, ArtifactError> {
    let mut header = String::new();
    input.read_line(&mut header)?;
    let mut parts = header.trim_end().split(' ');
    if parts.next() != Some(MAGIC) {
        return Err(ArtifactError::BadMagic);
    }
    let format = parts.next().unwrap_or_default();
    if format != FORMAT_VERSION.to_string() {
        return Err(ArtifactError::FormatVersion { found: format.to_string(), expected: FORMAT_VERSION });
    }
    let engine = parts.next().unwrap_or_default();
    if engine != ENGINE_VERSION {
        return Err(ArtifactError::EngineMismatch { found: engine.to_string(), expected: ENGINE_VERSION.to_string() });
    }
    Ok(serde_json::from_reader(input)?)
}
