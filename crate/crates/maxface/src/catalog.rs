//! Named Weierstrass data with their expected invariants.
//!
//! Parameterized entries are addressed as `name:p1,p2,...`; complex
//! parameters use the `a+bi` notation, e.g. `moebius-family:1,0.5+0.2i,-0.3i`.
//! Missing parameters take the entry's defaults.

use std::fmt;

use anyhow::{anyhow, bail, Result};
use maxface_core::families;
use maxface_core::periods::{moebius_family_closed_forms, Verdict};
use maxface_core::weierstrass::WeierstrassData;
use num_complex::Complex64;

use crate::roots::RootCache;
use crate::UsageError;

#[derive(Clone, Debug, PartialEq)]
pub struct Expected {
    pub deg_g: usize,
    pub mus: Vec<i32>,
    pub verdict: Verdict,
    pub jm_residual: i64,
    /// Whether the topology report (Jorge-Meeks on the cover and, for
    /// quotients, parity) is expected to pass.
    pub topology_pass: bool,
    /// The lifted metric has zeros: not a maxface.
    pub branched: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshPolicy {
    Allowed,
    /// Only with the demo flag on the engine (branched data).
    Demo,
    /// The period problem fails; meshing is refused.
    Refused,
}

#[derive(Clone, Copy, Debug)]
pub struct Param {
    pub name: &'static str,
    pub default: &'static str,
}

type Builder = fn(&[Complex64], &RootCache) -> Result<(WeierstrassData, Expected)>;

#[derive(Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: &'static [Param],
    pub chi_bar: i32,
    pub quotient_chi: Option<i32>,
    build: Builder,
}

impl fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CatalogEntry").field("name", &self.name).finish_non_exhaustive()
    }
}

impl CatalogEntry {
    pub fn nonorientable(&self) -> bool {
        self.quotient_chi.is_some()
    }
}

/// A catalog entry with its parameters filled in.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub entry: CatalogEntry,
    pub params: Vec<Complex64>,
    pub data: WeierstrassData,
    pub expected: Expected,
}

impl Resolved {
    pub fn spec(&self) -> String {
        if self.params.is_empty() {
            self.entry.name.to_string()
        } else {
            let p: Vec<String> = self.params.iter().map(|c| format_complex(*c)).collect();
            format!("{}:{}", self.entry.name, p.join(","))
        }
    }

    pub fn mesh_policy(&self) -> MeshPolicy {
        if self.expected.verdict == Verdict::Obstructed {
            MeshPolicy::Refused
        } else if self.expected.branched {
            MeshPolicy::Demo
        } else {
            MeshPolicy::Allowed
        }
    }
}

pub fn format_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else {
        format!("{c}")
    }
}

fn real(c: Complex64, what: &str) -> Result<f64> {
    if c.im != 0.0 {
        bail!(UsageError(format!("{what} must be real")));
    }
    Ok(c.re)
}

fn positive_integer(c: Complex64, what: &str) -> Result<u32> {
    let x = real(c, what)?;
    if x.fract() != 0.0 || !(1.0..=64.0).contains(&x) {
        bail!(UsageError(format!("{what} must be an integer in 1..=64")));
    }
    Ok(x as u32)
}

fn mus(m: i32) -> Vec<i32> {
    vec![m, m]
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::WellDefined
    } else {
        Verdict::Obstructed
    }
}

fn catenoid(_: &[Complex64], _: &RootCache) -> Result<(WeierstrassData, Expected)> {
    // 2 = -2 + 2 + 2
    let e = Expected { deg_g: 1, mus: mus(1), verdict: Verdict::WellDefined, jm_residual: 0, topology_pass: true, branched: false };
    Ok((families::catenoid()?, e))
}

fn moebius_b2(p: &[Complex64], _: &RootCache) -> Result<(WeierstrassData, Expected)> {
    let r = real(p[0], "r")?;
    // the loop around 0 gives int phi3 = -2 pi (r^2 - 1)
    let e = Expected {
        deg_g: 4,
        mus: mus(4),
        verdict: verdict((r * r - 1.0).abs() <= 1e-12),
        jm_residual: 0,
        topology_pass: true,
        branched: false,
    };
    Ok((families::moebius_b2(r)?, e))
}

fn moebius_k(p: &[Complex64], _: &RootCache) -> Result<(WeierstrassData, Expected)> {
    let k = positive_integer(p[0], "k")?;
    // phi3/g = i (z - 1)^2 z^-(2k+3) dz has no residue for k >= 1
    let m = 2 * k as i32 + 2;
    let e = Expected { deg_g: 2 * k as usize + 2, mus: mus(m), verdict: Verdict::WellDefined, jm_residual: 0, topology_pass: true, branched: false };
    Ok((families::moebius_k(k)?, e))
}

fn moebius_family(p: &[Complex64], _: &RootCache) -> Result<(WeierstrassData, Expected)> {
    let r = real(p[0], "r")?;
    let (a, b) = moebius_family_closed_forms(r, p[1], p[2]);
    let e = Expected {
        deg_g: 4,
        mus: mus(4),
        verdict: verdict(a.norm() <= 1e-9 && b.norm() <= 1e-9),
        jm_residual: 0,
        topology_pass: true,
        branched: false,
    };
    Ok((families::moebius_family(r, p[1], p[2])?, e))
}

fn moebius_sym(_: &[Complex64], _: &RootCache) -> Result<(WeierstrassData, Expected)> {
    let e = Expected { deg_g: 4, mus: mus(4), verdict: Verdict::WellDefined, jm_residual: 0, topology_pass: true, branched: false };
    Ok((families::moebius_sym()?, e))
}

fn henneberg(_: &[Complex64], _: &RootCache) -> Result<(WeierstrassData, Expected)> {
    // branched at +-1, so Jorge-Meeks need not hold: 4 - (-2 + 4 + 4) = -2
    let e = Expected { deg_g: 2, mus: mus(3), verdict: Verdict::WellDefined, jm_residual: -2, topology_pass: false, branched: true };
    Ok((families::henneberg()?, e))
}

fn klein_at(r: f64, well_defined: bool) -> Result<(WeierstrassData, Expected)> {
    // 8 = 0 + 4 + 4 on the torus
    let e = Expected { deg_g: 4, mus: mus(3), verdict: verdict(well_defined), jm_residual: 0, topology_pass: true, branched: false };
    Ok((families::klein(r)?, e))
}

fn klein(p: &[Complex64], roots: &RootCache) -> Result<(WeierstrassData, Expected)> {
    let r = real(p[0], "r")?;
    // only the two roots of h close the period problem; other r in (0, 1)
    // are obstructed, and h has no roots outside (0, 1)
    let near_root = if r > 0.0 && r < 1.0 {
        let k = roots.get()?;
        (r - k.r1).abs() <= 1e-9 || (r - k.r2).abs() <= 1e-9
    } else {
        false
    };
    klein_at(r, near_root)
}

fn klein_1(_: &[Complex64], roots: &RootCache) -> Result<(WeierstrassData, Expected)> {
    let (mut d, e) = klein_at(roots.get()?.r1, true)?;
    d.set_label("klein-1");
    Ok((d, e))
}

fn klein_2(_: &[Complex64], roots: &RootCache) -> Result<(WeierstrassData, Expected)> {
    let (mut d, e) = klein_at(roots.get()?.r2, true)?;
    d.set_label("klein-2");
    Ok((d, e))
}

fn counter_genus1(p: &[Complex64], _: &RootCache) -> Result<(WeierstrassData, Expected)> {
    let (r, s) = (real(p[0], "r")?, real(p[1], "s")?);
    // the Jorge-Meeks count is fine (4 = -2 + 3 + 3); the degree is too low
    let e = Expected { deg_g: 2, mus: mus(2), verdict: Verdict::Obstructed, jm_residual: 0, topology_pass: false, branched: false };
    Ok((families::counter_genus1_deg2(r, s)?, e))
}

fn counter_b1(p: &[Complex64], _: &RootCache) -> Result<(WeierstrassData, Expected)> {
    let e = Expected { deg_g: 4, mus: mus(4), verdict: Verdict::Obstructed, jm_residual: 0, topology_pass: true, branched: false };
    Ok((families::counter_moebius_b1(p[0], p[1])?, e))
}

const NONE: &[Param] = &[];

static CATALOG: [CatalogEntry; 11] = [
    CatalogEntry {
        name: "catenoid",
        summary: "Lorentzian catenoid g = z, phi3 = dz/z (orientable reference)",
        params: NONE,
        chi_bar: 2,
        quotient_chi: None,
        build: catenoid,
    },
    CatalogEntry {
        name: "moebius-b2",
        summary: "Moebius strip g = z^3 (rz-1)/(z+r); well-defined only at r = 1",
        params: &[Param { name: "r", default: "1" }],
        chi_bar: 2,
        quotient_chi: Some(1),
        build: moebius_b2,
    },
    CatalogEntry {
        name: "moebius-k",
        summary: "Moebius strips g = z^(2k+1) (z+1)/(z-1), phi3 = i (z^2-1)/z^2 dz",
        params: &[Param { name: "k", default: "1" }],
        chi_bar: 2,
        quotient_chi: Some(1),
        build: moebius_k,
    },
    CatalogEntry {
        name: "moebius-family",
        summary: "three-parameter Moebius family without branching at the ends",
        params: &[
            Param { name: "r", default: "0.7" },
            Param { name: "s", default: "0.3333333333333333+0.5i" },
            Param { name: "t", default: "-0.4+0.75i" },
        ],
        chi_bar: 2,
        quotient_chi: Some(1),
        build: moebius_family,
    },
    CatalogEntry {
        name: "moebius-sym",
        summary: "symmetric member r = 1, s = exp(2 pi i/3), t = conj(s)",
        params: NONE,
        chi_bar: 2,
        quotient_chi: Some(1),
        build: moebius_sym,
    },
    CatalogEntry {
        name: "henneberg-max",
        summary: "Henneberg-type data g = z^2; branched at z = +-1 (demo only)",
        params: NONE,
        chi_bar: 2,
        quotient_chi: Some(1),
        build: henneberg,
    },
    CatalogEntry {
        name: "klein",
        summary: "one-ended Klein bottle data on w^2 = z (rz-1)/(z+r)",
        params: &[Param { name: "r", default: "0.5" }],
        chi_bar: 0,
        quotient_chi: Some(0),
        build: klein,
    },
    CatalogEntry {
        name: "klein-1",
        summary: "maximal Klein bottle at the first root of h",
        params: NONE,
        chi_bar: 0,
        quotient_chi: Some(0),
        build: klein_1,
    },
    CatalogEntry {
        name: "klein-2",
        summary: "maximal Klein bottle at the second root of h",
        params: NONE,
        chi_bar: 0,
        quotient_chi: Some(0),
        build: klein_2,
    },
    CatalogEntry {
        name: "counter-genus1-deg2",
        summary: "genus-one quotient with deg g = 2; period obstruction at z = 0",
        params: &[Param { name: "r", default: "0.7" }, Param { name: "s", default: "1" }],
        chi_bar: 2,
        quotient_chi: Some(1),
        build: counter_genus1,
    },
    CatalogEntry {
        name: "counter-moebius-b1",
        summary: "Moebius data with branch order one at the ends; obstructed",
        params: &[Param { name: "r", default: "1+1i" }, Param { name: "s", default: "2" }],
        chi_bar: 2,
        quotient_chi: Some(1),
        build: counter_b1,
    },
];

pub fn catalog() -> &'static [CatalogEntry] {
    &CATALOG
}

pub fn find(name: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.name == name)
}

fn parse_complex(s: &str) -> Result<Complex64> {
    s.trim().parse::<Complex64>().map_err(|_| anyhow!(UsageError(format!("not a number: {s:?}"))))
}

/// Looks up `name[:p1,p2,...]` and builds its data.
pub fn resolve(spec: &str, roots: &RootCache) -> Result<Resolved> {
    let (name, args) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    let entry = *find(name).ok_or_else(|| anyhow!(UsageError(format!("unknown catalog entry {name:?}"))))?;
    let given: Vec<&str> = match args {
        Some(a) if !a.trim().is_empty() => a.split(',').collect(),
        _ => Vec::new(),
    };
    if given.len() > entry.params.len() {
        bail!(UsageError(format!("{name} takes {} parameter(s), got {}", entry.params.len(), given.len())));
    }
    let mut params = Vec::with_capacity(entry.params.len());
    for (k, p) in entry.params.iter().enumerate() {
        params.push(parse_complex(given.get(k).copied().unwrap_or(p.default))?);
    }
    let (data, expected) = (entry.build)(&params, roots).map_err(|e| match e.downcast::<maxface_core::Error>() {
        Ok(core @ maxface_core::Error::InvalidInput(_)) => anyhow!(UsageError(format!("{name}: {core}"))),
        Ok(core) => anyhow!(core),
        Err(other) => other,
    })?;
    Ok(Resolved { entry, params, data, expected })
}
