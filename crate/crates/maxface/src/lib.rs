//! Catalog of named maxface data, file formats and the `maxface` command line.
//!
//! The numerics live in [`maxface_core`]; this crate adds the example catalog,
//! the root cache for the Klein-bottle entries, JSON/OBJ/CSV formats and the
//! subcommands behind the binary.

pub mod acceptance;
pub mod catalog;
pub mod commands;
pub mod formats;
pub mod json;
pub mod roots;

use std::fmt;

/// Bad flags, unknown names or malformed input files; exit code 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Exit code for an error: 2 for usage errors, 1 otherwise.
pub fn error_code(e: &anyhow::Error) -> i32 {
    if e.chain().any(|c| c.is::<UsageError>()) {
        2
    } else {
        1
    }
}
