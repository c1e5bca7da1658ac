//! The subcommands, each producing a [`RunReport`].

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use maxface_core::algebra::degree_of;
use maxface_core::immersion::{sample_mesh, EngineConfig, ImmersionEngine, MeshSpec};
use maxface_core::kleinsolver::{sample, solve, SolveConfig};
use maxface_core::periods::{
    data_loops, genus1_obstruction, integrate_form, moebius_b2_phi3_period, moebius_family_closed_forms, moebius_family_periods,
    period_report, QuadratureConfig, Verdict,
};
use maxface_core::weierstrass::{
    compatibility_residuals, conformality_residual, default_regularity_samples, end_analysis, gauss_degree_numeric,
    regularity_scan, topology_check, WeierstrassData,
};
use maxface_core::C64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{catalog, find, format_complex, Expected, MeshPolicy, Resolved};
use crate::formats::{write_h_csv, write_obj, Sidecar};
use crate::json::{verdict_str, DataJson, PeriodReportJson, RationalJson, TopologyJson};
use crate::roots::RootCache;
use crate::acceptance::{self, REFERENCE_R1, REFERENCE_R2};
use crate::UsageError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool) -> Self {
        Check { name: name.into(), pass, residual: None, detail: Value::Null }
    }

    pub fn residual(mut self, r: f64) -> Self {
        self.residual = Some(r);
        self
    }

    pub fn detail(mut self, d: Value) -> Self {
        self.detail = d;
        self
    }
}

/// Serializable result of a command; the exit code is 0 iff `pass`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub output: Value,
    /// Only filled in on request, so that reports stay reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl RunReport {
    pub fn new(command: &str, inputs: Value, checks: Vec<Check>, output: Value) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        RunReport { command: command.into(), inputs, checks, pass, output, wall_time_s: None }
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

/// Data to run a command on: a catalog entry or custom JSON input.
#[derive(Clone, Debug)]
pub struct Subject {
    pub spec: String,
    pub data: WeierstrassData,
    pub chi_bar: i32,
    pub quotient_chi: Option<i32>,
    /// `None` for custom data without an `expected` block.
    pub expected: Option<Expected>,
    pub catalog: Option<Resolved>,
}

impl From<Resolved> for Subject {
    fn from(r: Resolved) -> Self {
        Subject {
            spec: r.spec(),
            data: r.data.clone(),
            chi_bar: r.entry.chi_bar,
            quotient_chi: r.entry.quotient_chi,
            expected: Some(r.expected.clone()),
            catalog: Some(r),
        }
    }
}

impl Subject {
    pub fn from_catalog(spec: &str, roots: &RootCache) -> Result<Self> {
        Ok(crate::catalog::resolve(spec, roots)?.into())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let j: DataJson = serde_json::from_str(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
        let data = j.to_data().map_err(|e| match e.downcast::<maxface_core::Error>() {
            Ok(core) => UsageError(format!("{}: {core}", path.display())).into(),
            Err(other) => other,
        })?;
        Ok(Subject {
            spec: path.display().to_string(),
            data,
            chi_bar: j.chi_bar,
            quotient_chi: j.quotient_chi,
            expected: j.expected.as_ref().map(|e| e.to_expected()).transpose()?,
            catalog: None,
        })
    }

    fn mesh_policy(&self) -> MeshPolicy {
        match (&self.catalog, &self.expected) {
            (Some(r), _) => r.mesh_policy(),
            (None, Some(e)) if e.branched => MeshPolicy::Demo,
            _ => MeshPolicy::Allowed,
        }
    }
}

pub fn list() -> RunReport {
    let entries: Vec<Value> = catalog()
        .iter()
        .map(|e| {
            json!({
                "name": e.name,
                "summary": e.summary,
                "params": e.params.iter().map(|p| json!({"name": p.name, "default": p.default})).collect::<Vec<_>>(),
            })
        })
        .collect();
    RunReport::new("list", Value::Null, Vec::new(), Value::Array(entries))
}

pub fn describe(spec: &str, roots: &RootCache) -> Result<RunReport> {
    let s = Subject::from_catalog(spec, roots)?;
    let r = s.catalog.as_ref().expect("catalog subject");
    let d = &s.data;
    let function = |f: &maxface_core::algebra::CurveFunction| {
        let mut v = json!({ "a": RationalJson::from(f.a()) });
        if !f.b().is_zero() {
            v["b"] = json!(RationalJson::from(f.b()));
        }
        v
    };
    let output = json!({
        "name": r.entry.name,
        "summary": r.entry.summary,
        "label": d.label(),
        "params": r.params.iter().zip(r.entry.params).map(|(c, p)| json!({"name": p.name, "value": format_complex(*c)})).collect::<Vec<_>>(),
        "domain": match d.domain().curve_rhs() {
            Some(f) => json!({"kind": "root_curve", "f": RationalJson::from(f)}),
            None => json!({"kind": "punctured_plane", "punctures": d.domain().obstacles().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()}),
        },
        "g": function(d.g()),
        "phi3": function(&d.phi3().coeff),
        "involution": d.involution().map(|i| format!("{i:?}")),
        "ends": d.ends().iter().map(crate::json::PointJson::from).collect::<Vec<_>>(),
        "chi_bar": s.chi_bar,
        "quotient_chi": s.quotient_chi,
        "expected": {
            "deg_g": r.expected.deg_g,
            "mus": r.expected.mus,
            "verdict": verdict_str(r.expected.verdict),
            "jm_residual": r.expected.jm_residual,
            "topology_pass": r.expected.topology_pass,
            "branched": r.expected.branched,
        },
    });
    Ok(RunReport::new("describe", json!({ "name": spec }), Vec::new(), output))
}

/// Involution compatibility, regularity, periods, ends and topology, each
/// compared against the subject's expectations.
pub fn check(subject: &Subject, tol: f64) -> Result<RunReport> {
    if !(tol > 0.0) {
        bail!(UsageError("--tol must be positive".into()));
    }
    let d = &subject.data;
    let mut checks = Vec::new();
    let samples = d.sample_points(500);

    if d.involution().is_some() {
        let (rg, rp) = compatibility_residuals(d, &samples)?;
        checks.push(Check::new("involution_compatibility", rg.max(rp) <= tol).residual(rg.max(rp)).detail(json!({"g": rg, "phi3": rp})));
    }
    let conf = samples.iter().fold(0.0f64, |m, p| m.max(conformality_residual(d, p)));
    checks.push(Check::new("conformality_identity", conf <= 1e-12).residual(conf));

    let scan = regularity_scan(d, &default_regularity_samples(d)?);
    let branched = !scan.is_regular();
    let regular_ok = match &subject.expected {
        Some(e) => e.branched == branched,
        None => !branched,
    };
    let zeros: Vec<[f64; 2]> = scan.offending.iter().map(|p| [p.z.re, p.z.im]).collect();
    checks.push(Check::new("regularity", regular_ok).residual(scan.min_value).detail(json!({"branched": branched, "zeros": zeros})));

    let cfg = QuadratureConfig::default();
    let report = period_report(d, &data_loops(d)?, &cfg)?;
    let verdict_ok = match &subject.expected {
        Some(e) => e.verdict == report.verdict,
        None => report.verdict == Verdict::WellDefined,
    };
    checks.push(
        Check::new("periods", verdict_ok)
            .residual(report.max_residual())
            .detail(json!({"verdict": verdict_str(report.verdict), "first_obstructed": report.first_obstructed()})),
    );

    let ends = end_analysis(d)?;
    let topo = topology_check(d, &ends, subject.chi_bar, subject.quotient_chi)?;
    let (ends_ok, topo_ok) = match &subject.expected {
        Some(e) => (e.deg_g == topo.deg_g && e.mus == topo.mus, e.jm_residual == topo.jm_residual && e.topology_pass == topo.passes()),
        None => (true, topo.passes()),
    };
    checks.push(Check::new("ends", ends_ok).detail(json!({"deg_g": topo.deg_g, "mus": topo.mus})));
    checks.push(
        Check::new("topology", topo_ok)
            .detail(json!({"jm_residual": topo.jm_residual, "quotient_residual": topo.quotient_residual, "passes": topo.passes()})),
    );

    // count preimages of a fixed generic value
    let c = C64::new(0.37, 0.21);
    let numeric = gauss_degree_numeric(d.g(), c)?;
    let deg = degree_of(d.g())?;
    checks.push(Check::new("gauss_degree", numeric == deg).detail(json!({"numeric": numeric, "divisor": deg})));

    let output = json!({
        "topology": TopologyJson::new(d.label(), &topo, &ends, report.verdict),
        "periods": PeriodReportJson::new(d.label(), &report),
    });
    Ok(RunReport::new("check", json!({"name": subject.spec, "tol": tol}), checks, output))
}

/// The period report, plus closed-form cross-checks where the family has one.
pub fn periods(subject: &Subject) -> Result<RunReport> {
    let d = &subject.data;
    let cfg = QuadratureConfig::default();
    let loops = data_loops(d)?;
    let report = period_report(d, &loops, &cfg)?;
    let mut checks = Vec::new();
    let verdict_ok = match &subject.expected {
        Some(e) => e.verdict == report.verdict,
        None => report.verdict == Verdict::WellDefined,
    };
    checks.push(Check::new("verdict", verdict_ok).residual(report.max_residual()).detail(json!(verdict_str(report.verdict))));
    if let Some(r) = &subject.catalog {
        let p = &r.params;
        match r.entry.name {
            "moebius-family" | "moebius-sym" => {
                let (rr, s, t) = if p.is_empty() {
                    let s = C64::from_polar(1.0, std::f64::consts::TAU / 3.0);
                    (1.0, s, s.conj())
                } else {
                    (p[0].re, p[1], p[2])
                };
                let (q1, q2) = moebius_family_periods(rr, s, t, &cfg)?;
                let (c1, c2) = moebius_family_closed_forms(rr, s, t);
                let e1 = (q1 - c1).norm() / (1.0 + c1.norm());
                let e2 = (q2 - c2).norm() / (1.0 + c2.norm());
                checks.push(
                    Check::new("closed_forms", e1.max(e2) <= 1e-8)
                        .residual(e1.max(e2))
                        .detail(json!({"quadrature": [[q1.re, q1.im], [q2.re, q2.im]], "closed_form": [[c1.re, c1.im], [c2.re, c2.im]]})),
                );
            }
            "moebius-b2" => {
                let v = integrate_form(d.phi3(), &loops[0].1, &cfg)?.value;
                let c = moebius_b2_phi3_period(p[0].re);
                let e = (v - c).norm();
                checks.push(Check::new("phi3_period", e <= 1e-10).residual(e).detail(json!({"quadrature": [v.re, v.im], "closed_form": c})));
            }
            "counter-genus1-deg2" => {
                let v = report.loops[0].horizontal_value;
                let c = genus1_obstruction(p[0].re, p[1].re);
                let e = (v - c).norm();
                checks.push(Check::new("obstruction", e <= 1e-8).residual(e).detail(json!({"quadrature": [v.re, v.im], "closed_form": c})));
            }
            _ => {}
        }
    }
    let output = json!(PeriodReportJson::new(d.label(), &report));
    Ok(RunReport::new("periods", json!({"name": subject.spec}), checks, output))
}


pub fn solve_klein(tol: f64, scan: bool) -> Result<RunReport> {
    if !(tol > 0.0) {
        bail!(UsageError("--tol must be positive".into()));
    }
    let cfg = SolveConfig::with_tol(tol);
    let res = solve(&cfg)?;
    let mut checks = vec![Check::new("two_roots", res.roots.len() == 2)];
    let worst = res.residuals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    checks.push(Check::new("residuals", worst <= tol).residual(worst));
    let off = res.roots.iter().zip([REFERENCE_R1, REFERENCE_R2]).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    checks.push(Check::new("reference_values", off <= 5e-4).residual(off));
    let mut output = json!({
        "roots": res.roots,
        "residuals": res.residuals,
        "brackets": res.brackets,
        "iterations": res.iterations,
        "tol": res.tol,
    });
    if scan {
        output["scan"] = json!(res.scan.iter().map(|(r, h)| json!({"r": r, "h": h})).collect::<Vec<_>>());
    }
    Ok(RunReport::new("solve-klein", json!({"tol": tol, "scan": scan}), checks, output))
}

pub fn plot_h(min: f64, max: f64, samples: usize, out: Option<&Path>) -> Result<RunReport> {
    if samples == 0 || !(min <= max) || !min.is_finite() || !max.is_finite() {
        bail!(UsageError(format!("empty range [{min}, {max}] with {samples} samples")));
    }
    if min == max && samples != 1 {
        bail!(UsageError("a degenerate range takes exactly one sample".into()));
    }
    if min <= 0.0 && 0.0 <= max {
        bail!(UsageError("the range must exclude r = 0".into()));
    }
    let cfg = QuadratureConfig::default();
    let rs: Vec<f64> = if samples == 1 {
        vec![min]
    } else {
        (0..samples).map(|k| min + (max - min) * k as f64 / (samples - 1) as f64).collect()
    };
    let table = rs.iter().map(|r| sample(*r, &cfg)).collect::<std::result::Result<Vec<_>, _>>()?;
    match out {
        Some(p) => {
            let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            let mut w = BufWriter::new(f);
            write_h_csv(&mut w, &table)?;
            w.flush()?;
        }
        None => write_h_csv(std::io::stdout().lock(), &table)?,
    }
    let sign_changes: Vec<[f64; 2]> = table.windows(2).filter(|w| w[0].h * w[1].h < 0.0).map(|w| [w[0].r, w[1].r]).collect();
    let finite = table.iter().all(|s| s.h.is_finite() && s.h_prime.is_finite());
    let checks = vec![Check::new("finite", finite)];
    let output = json!({"samples": table.len(), "sign_changes": sign_changes, "out": out.map(|p| p.display().to_string())});
    Ok(RunReport::new("plot-h", json!({"min": min, "max": max, "samples": samples}), checks, output))
}

#[derive(Clone, Debug)]
pub struct MeshRequest {
    pub grid: usize,
    pub rmin: f64,
    pub rmax: f64,
    pub out: PathBuf,
    pub singular: bool,
    pub demo: bool,
}

/// Sidecar path next to the OBJ: `surface.obj` gets `surface.singular.json`.
pub fn sidecar_path(obj: &Path) -> PathBuf {
    obj.with_extension("singular.json")
}

pub fn mesh(subject: &Subject, req: &MeshRequest) -> Result<RunReport> {
    if req.grid < 3 {
        bail!(UsageError("--grid must be at least 3".into()));
    }
    if !(req.rmin > 0.0 && req.rmin < req.rmax && req.rmax.is_finite()) {
        bail!(UsageError("need 0 < rmin < rmax".into()));
    }
    let inputs = json!({
        "name": subject.spec, "grid": req.grid, "rmin": req.rmin, "rmax": req.rmax,
        "out": req.out.display().to_string(), "singular": req.singular, "demo": req.demo,
    });
    let policy = subject.mesh_policy();
    let demo = req.demo || policy == MeshPolicy::Demo;
    let engine = match ImmersionEngine::build(subject.data.clone(), None, EngineConfig { demo, ..EngineConfig::default() }) {
        Ok(e) => e,
        Err(e @ (maxface_core::Error::Obstructed { .. } | maxface_core::Error::Branched { .. })) => {
            let check = Check::new("engine", false).detail(json!(format!("refusing to mesh {}: {e}", subject.spec)));
            return Ok(RunReport::new("mesh", inputs, vec![check], Value::Null));
        }
        Err(e) => return Err(e.into()),
    };
    let spec = MeshSpec { n_radial: req.grid, n_angular: req.grid, log_rmin: req.rmin.ln(), log_rmax: req.rmax.ln(), singular: req.singular };
    let m = match sample_mesh(&engine, &spec) {
        Ok(m) => m,
        Err(e @ maxface_core::Error::InvalidInput(_)) => bail!(UsageError(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let f = File::create(&req.out).with_context(|| format!("creating {}", req.out.display()))?;
    let mut w = BufWriter::new(f);
    write_obj(&mut w, &m)?;
    w.flush()?;
    let mut checks = vec![Check::new("finite", m.all_finite())];
    checks.push(Check::new("conformal_factor_nonnegative", m.vertices.iter().all(|v| v.conformal_factor >= 0.0)));
    if !m.involution_pairs.is_empty() {
        let d = m.involution_defect();
        checks.push(Check::new("involution_pairs", d <= 1e-5).residual(d));
    }
    let mut sidecar = None;
    if req.singular {
        let g = subject.data.g();
        let worst = m
            .singular_domain
            .iter()
            .flatten()
            .fold(0.0f64, |a, p| a.max((g.eval_unchecked(p.z, p.w).norm() - 1.0).abs()));
        checks.push(Check::new("singular_polylines", worst <= 1e-3).residual(worst));
        let path = sidecar_path(&req.out);
        let text = serde_json::to_string(&Sidecar::new(&m))?;
        std::fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
        sidecar = Some(path.display().to_string());
    }
    let output = json!({
        "vertices": m.vertices.len(),
        "faces": m.faces.len(),
        "sheets": m.sheets,
        "polylines": m.singular_polylines.len(),
        "branched_demo": engine.is_branched(),
        "sidecar": sidecar,
    });
    Ok(RunReport::new("mesh", inputs, checks, output))
}

pub fn verify_all(roots: &RootCache) -> Result<RunReport> {
    let results = acceptance::run_all(roots);
    let checks = results
        .iter()
        .map(|c| Check::new(format!("criterion {}: {}", c.id, c.name), c.pass).detail(json!(c.detail)))
        .collect();
    Ok(RunReport::new("verify-all", Value::Null, checks, Value::Null))
}

/// Runs `f`, recording its wall time when asked to.
pub fn timed(timing: bool, f: impl FnOnce() -> Result<RunReport>) -> Result<RunReport> {
    let t = Instant::now();
    let mut r = f()?;
    if timing {
        r.wall_time_s = Some(t.elapsed().as_secs_f64());
    }
    Ok(r)
}

/// Whether a catalog name exists (without parameters).
pub fn known(name: &str) -> bool {
    find(name.split(':').next().unwrap_or(name)).is_some()
}
