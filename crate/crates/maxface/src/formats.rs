//! Wavefront OBJ, the singular-polyline sidecar and the `h` table CSV.

use std::io::{self, BufRead, Write};

use anyhow::{bail, Context, Result};
use maxface_core::immersion::{Position, SurfaceMesh};
use maxface_core::kleinsolver::PeriodFunctionSample;
use serde::{Deserialize, Serialize};

/// Writes `v x1 x2 x3` lines, then one `f i j k l` quad per face (1-based).
pub fn write_obj<W: Write>(mut out: W, mesh: &SurfaceMesh) -> io::Result<()> {
    writeln!(out, "# {}", mesh.label)?;
    writeln!(
        out,
        "# grid {}x{} log|z| in [{}, {}], {} sheet(s)",
        mesh.spec.n_radial, mesh.spec.n_angular, mesh.spec.log_rmin, mesh.spec.log_rmax, mesh.sheets
    )?;
    for v in &mesh.vertices {
        let [x, y, z] = v.position;
        writeln!(out, "v {x:.17e} {y:.17e} {z:.17e}")?;
    }
    for f in &mesh.faces {
        writeln!(out, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1)?;
    }
    Ok(())
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Obj {
    pub vertices: Vec<Position>,
    /// 0-based vertex indices.
    pub faces: Vec<Vec<usize>>,
}

/// Reads the `v` and `f` records written by [`write_obj`]; `f` entries may
/// carry `/vt/vn` suffixes, which are ignored.
pub fn read_obj<R: BufRead>(input: R) -> Result<Obj> {
    let mut obj = Obj::default();
    for (n, line) in input.lines().enumerate() {
        let line = line?;
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => {
                let xs: Vec<f64> = it.map(str::parse).collect::<Result<_, _>>().with_context(|| format!("line {}", n + 1))?;
                if xs.len() != 3 {
                    bail!("line {}: vertex needs three coordinates", n + 1);
                }
                obj.vertices.push([xs[0], xs[1], xs[2]]);
            }
            Some("f") => {
                let mut face = Vec::new();
                for tok in it {
                    let k: usize = tok.split('/').next().unwrap_or("").parse().with_context(|| format!("line {}", n + 1))?;
                    if k == 0 || k > obj.vertices.len() {
                        bail!("line {}: face index {k} out of range", n + 1);
                    }
                    face.push(k - 1);
                }
                if face.len() < 3 {
                    bail!("line {}: face needs at least three vertices", n + 1);
                }
                obj.faces.push(face);
            }
            _ => {}
        }
    }
    Ok(obj)
}

/// `{"polylines": [[[x1, x2, x3], ...], ...]}` plus the matching domain
/// points and the I-pairing of mesh vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub polylines: Vec<Vec<Position>>,
    /// `z` of each polyline vertex as `[re, im]`.
    #[serde(default)]
    pub domain: Vec<Vec<[f64; 2]>>,
    /// 0-based vertex pairs identified by the involution.
    #[serde(default)]
    pub involution_pairs: Vec<(usize, usize)>,
}

impl Sidecar {
    pub fn new(mesh: &SurfaceMesh) -> Self {
        Sidecar {
            polylines: mesh.singular_polylines.clone(),
            domain: mesh.singular_domain.iter().map(|l| l.iter().map(|p| [p.z.re, p.z.im]).collect()).collect(),
            involution_pairs: mesh.involution_pairs.clone(),
        }
    }
}

pub const CSV_HEADER: &str = "r,h,hprime";

pub fn write_h_csv<W: Write>(mut out: W, samples: &[PeriodFunctionSample]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for s in samples {
        writeln!(out, "{:.17e},{:.17e},{:.17e}", s.r, s.h, s.h_prime)?;
    }
    Ok(())
}

pub fn read_h_csv<R: BufRead>(input: R) -> Result<Vec<(f64, f64, f64)>> {
    let mut lines = input.lines();
    match lines.next() {
        Some(Ok(h)) if h.trim() == CSV_HEADER => {}
        _ => bail!("missing header {CSV_HEADER:?}"),
    }
    let mut rows = Vec::new();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let v: Vec<f64> = line.split(',').map(|s| s.trim().parse()).collect::<Result<_, _>>()?;
        if v.len() != 3 {
            bail!("expected three columns in {line:?}");
        }
        rows.push((v[0], v[1], v[2]));
    }
    Ok(rows)
}
