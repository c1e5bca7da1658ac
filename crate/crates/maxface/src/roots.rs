//! The root cache: `klein-1` and `klein-2` need the two roots of `h`, which
//! take a few seconds to compute, so the first command that needs them solves
//! once and stores the result as plain JSON.

use std::cell::OnceCell;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use maxface_core::kleinsolver::{solve, SolveConfig};
use serde::{Deserialize, Serialize};

pub const DEFAULT_PATH: &str = "maxface_roots.json";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KleinRoots {
    pub r1: f64,
    pub r2: f64,
    /// `|h|` tolerance the roots were solved to.
    pub tol: f64,
}

#[derive(Debug)]
pub struct RootCache {
    path: PathBuf,
    roots: OnceCell<KleinRoots>,
}

impl RootCache {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        RootCache { path: path.into(), roots: OnceCell::new() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Cached roots, solving and writing the cache file on first use. A
    /// missing or unreadable file is not an error; a failed write is.
    pub fn get(&self) -> Result<KleinRoots> {
        if let Some(r) = self.roots.get() {
            return Ok(*r);
        }
        let roots = match read(&self.path) {
            Some(r) => r,
            None => {
                let r = solve_roots()?;
                let text = serde_json::to_string_pretty(&r)?;
                fs::write(&self.path, text + "\n").with_context(|| format!("writing root cache {}", self.path.display()))?;
                r
            }
        };
        Ok(*self.roots.get_or_init(|| roots))
    }
}

fn read(path: &Path) -> Option<KleinRoots> {
    let text = fs::read_to_string(path).ok()?;
    let r: KleinRoots = serde_json::from_str(&text).ok()?;
    let sane = r.r1.is_finite() && r.r2.is_finite() && 0.0 < r.r1 && r.r1 < r.r2 && r.r2 < 1.0;
    sane.then_some(r)
}

pub fn solve_roots() -> Result<KleinRoots> {
    let cfg = SolveConfig::default();
    let res = solve(&cfg)?;
    Ok(KleinRoots { r1: res.roots[0], r2: res.roots[1], tol: cfg.tol })
}
