use alloc::vec;

use super::*;
use crate::algebra::{ComplexRational, CurveFunction, MeromorphicForm, PointLocus};
use crate::families;
use crate::re;

const R1: f64 = 0.171369891850665318;
const R2: f64 = 0.691723675735665782;

fn engine(d: WeierstrassData) -> ImmersionEngine {
    ImmersionEngine::build(d, None, EngineConfig::default()).unwrap()
}

fn small() -> MeshSpec {
    MeshSpec { n_radial: 16, n_angular: 16, ..MeshSpec::default() }
}

#[test]
fn basepoint_maps_to_origin() {
    let e = engine(families::moebius_b2(1.0).unwrap());
    assert_eq!(e.basepoint().z, re(2.0));
    assert_eq!(e.evaluate(&e.basepoint()).unwrap(), [0.0; 3]);
    assert_eq!(e.report().verdict, Verdict::WellDefined);
    let k = engine(families::klein(R1).unwrap());
    assert_eq!(k.evaluate(&k.basepoint()).unwrap(), [0.0; 3]);
}

#[test]
fn obstructed_data_is_refused() {
    let d = families::counter_moebius_b1(crate::c(1.0, 1.0), re(2.0)).unwrap();
    let err = ImmersionEngine::build(d.clone(), None, EngineConfig::default()).unwrap_err();
    assert_eq!(err, Error::Obstructed { loop_index: 0 });
    let demo = EngineConfig { demo: true, ..EngineConfig::default() };
    assert!(ImmersionEngine::build(d, None, demo).is_ok());
    let d = families::counter_genus1_deg2(0.7, 1.0).unwrap();
    assert!(matches!(ImmersionEngine::build(d, None, EngineConfig::default()), Err(Error::Obstructed { .. })));
}

#[test]
fn henneberg_needs_the_demo_flag() {
    let d = families::henneberg().unwrap();
    assert_eq!(ImmersionEngine::build(d.clone(), None, EngineConfig::default()).unwrap_err(), Error::Branched { zeros: 2 });
    let e = ImmersionEngine::build(d, None, EngineConfig { demo: true, ..EngineConfig::default() }).unwrap();
    assert!(e.is_branched());
    let m = sample_mesh(&e, &MeshSpec::default()).unwrap();
    assert!(m.all_finite());
    // the lifted metric vanishes at z = +-1, so the factor does too
    for b in [1.0, -1.0] {
        let near = m.vertices.iter().filter(|v| (v.point.z - b).norm() < 0.1).fold(f64::INFINITY, |a, v| a.min(v.conformal_factor));
        let far = m.vertices.iter().filter(|v| (v.point.z - 2.0 * b).norm() < 0.2).fold(0.0f64, |a, v| a.max(v.conformal_factor));
        assert!(near < 1e-2 * far, "{near} vs {far}");
    }
}

#[test]
fn moebius_mesh() {
    let e = engine(families::moebius_b2(1.0).unwrap());
    let m = sample_mesh(&e, &MeshSpec::default()).unwrap();
    assert_eq!(m.vertices.len(), 64 * 64);
    assert_eq!(m.faces.len(), 63 * 64);
    assert!(m.all_finite());
    assert!(m.vertices.iter().all(|v| v.conformal_factor >= 0.0));
    assert!(m.faces.iter().flatten().all(|k| *k < m.vertices.len()));
    assert_eq!(m.involution_pairs.len(), 64 * 32);
    assert!(m.involution_defect() <= 1e-5);
}

#[test]
fn meshes_are_deterministic() {
    let e = engine(families::klein(R2).unwrap());
    let a = sample_mesh(&e, &small()).unwrap();
    let b = sample_mesh(&e, &small()).unwrap();
    for (x, y) in a.vertices.iter().zip(&b.vertices) {
        for k in 0..3 {
            assert_eq!(x.position[k].to_bits(), y.position[k].to_bits());
        }
    }
}

#[test]
fn mesh_matches_direct_evaluation() {
    let e = engine(families::klein(R1).unwrap());
    let m = sample_mesh(&e, &small()).unwrap();
    for v in m.vertices.iter().step_by(7) {
        assert!(distance(e.evaluate(&v.point).unwrap(), v.position) <= 1e-7);
    }
}

#[test]
fn bad_mesh_specs() {
    let e = engine(families::catenoid().unwrap());
    assert!(sample_mesh(&e, &MeshSpec { n_radial: 1, ..small() }).is_err());
    assert!(sample_mesh(&e, &MeshSpec { log_rmin: 1.0, log_rmax: -1.0, ..small() }).is_err());
    // a puncture sitting on a node
    let spec = small();
    let node = spec.node(4, 5);
    let g = CurveFunction::rational(ComplexRational::z());
    let phi3 = MeromorphicForm::new(CurveFunction::rational(ComplexRational::from_roots(re(1.0), &[], &[re(0.0)])));
    let ends = vec![PointLocus::finite(re(0.0)), PointLocus::infinity()];
    let d = WeierstrassData::new(Domain::punctured_plane(vec![re(0.0), node]), g, phi3, None, ends, "extra").unwrap();
    let e = engine(d);
    assert!(sample_mesh(&e, &spec).is_err());
}

#[test]
fn klein_quotient_closes_up() {
    for r in [R1, R2] {
        let e = engine(families::klein(r).unwrap());
        let pts = check_points(e.data(), 100, 2.5);
        assert_eq!(pts.len(), 100);
        assert!(e.involution_defect(&pts).unwrap() <= 1e-6);
        let m = sample_mesh(&e, &MeshSpec::default()).unwrap();
        assert_eq!(m.sheets, 2);
        assert_eq!(m.involution_pairs.len(), 64 * 64);
        assert!(m.involution_defect() <= 1e-5);
    }
}

#[test]
fn path_independence_on_the_klein_bottle() {
    let e = engine(families::klein(R1).unwrap());
    let p = e.data().domain().principal_point(crate::c(1.3, 2.1));
    let direct = e.evaluate(&p).unwrap();
    // go once around [0, 1/r] first; the loop starts at its rightmost point
    let loops = crate::periods::data_loops(e.data()).unwrap();
    for (_, l) in &loops {
        let b = e.basepoint().z;
        let start = l.spec.start();
        let there = route(b, start, DETOUR, false);
        let mut spec = PathSpec::new(e.basepoint().w);
        spec.segments.extend(there.iter().cloned());
        spec.segments.extend(l.spec.segments.iter().cloned());
        spec.segments.extend(there.iter().rev().map(|s| s.reversed()));
        let (q, x) = e.evaluate_along(&spec).unwrap();
        assert!((q.z - b).norm() <= 1e-12);
        let base = if q.w == e.basepoint().w { [0.0; 3] } else { e.evaluate(&q).unwrap() };
        assert!(distance(x, base) <= 1e-6);
        let mut onward = spec.clone();
        onward.segments.extend(route(b, p.z, 0.0, false));
        let (q, x) = e.evaluate_along(&onward).unwrap();
        assert!((q.z - p.z).norm() <= 1e-12);
        let target = e.evaluate(&q).unwrap();
        assert!(distance(x, target) <= 1e-6);
        if q.w == p.w {
            assert!(distance(x, direct) <= 1e-6);
        }
    }
}

#[test]
fn klein_symmetries() {
    for r in [R1, R2] {
        let e = engine(families::klein(r).unwrap());
        let pts = check_points(e.data(), 100, 2.5);
        for t in [Transform::T0, Transform::T1, Transform::T2] {
            let s = symmetry_check(&e, t, &pts).unwrap();
            assert!(s.passes(1e-6), "{t:?}: {}", s.max_deviation);
            assert_eq!(s.angle, core::f64::consts::PI);
        }
        // the deck map is an involution
        for p in &pts {
            let q = Transform::T0.apply(e.data().domain(), &Transform::T0.apply(e.data().domain(), p).unwrap()).unwrap();
            assert_eq!(&q, p);
        }
    }
    let m = engine(families::moebius_b2(1.0).unwrap());
    assert!(Transform::T0.apply(m.data().domain(), &m.basepoint()).is_err());
}

#[test]
fn wrong_symmetry_is_detected() {
    let e = engine(families::klein(R1).unwrap());
    let pts = check_points(e.data(), 20, 2.5);
    let p = pts[0];
    // T1 with a half-turn about the wrong axis
    let q = Transform::T1.apply(e.data().domain(), &p).unwrap();
    let a = Transform::T0.rotate(e.evaluate(&p).unwrap());
    let b = e.evaluate(&q).unwrap();
    let s = symmetry_check(&e, Transform::T1, &pts).unwrap();
    assert!(distance(a, b) > 1e-3 || s.passes(1e-6));
}

#[test]
fn local_checks_on_the_klein_bottles() {
    for r in [R1, R2] {
        let e = engine(families::klein(r).unwrap());
        let m = sample_mesh(&e, &MeshSpec::default()).unwrap();
        let c = local_checks(&e, &m, &LocalCheckSpec::for_mesh(&m.spec)).unwrap();
        assert!(c.harmonicity.max_ratio <= 1e-4, "{:?}", c.harmonicity);
        assert!(c.harmonicity.nodes > 7000);
        assert!(c.conformality.max_relative <= 0.05, "{:?}", c.conformality);
    }
}

#[test]
fn local_stencil_is_second_order() {
    let e = engine(families::moebius_b2(1.0).unwrap());
    let m = sample_mesh(&e, &small()).unwrap();
    let du = m.spec.du();
    let run = |delta: f64| local_checks(&e, &m, &LocalCheckSpec { delta, ..LocalCheckSpec::for_mesh(&m.spec) }).unwrap();
    let (coarse, fine) = (run(du / 20.0), run(du / 40.0));
    assert_eq!(fine.harmonicity.nodes, 14 * 16);
    // halving the step cuts the truncation error by about four
    let q = coarse.harmonicity.max_ratio / fine.harmonicity.max_ratio;
    assert!(q > 3.0 && q < 5.0, "{q}");
    assert!(local_checks(&e, &m, &LocalCheckSpec { delta: 0.0, ..LocalCheckSpec::for_mesh(&m.spec) }).is_err());
}

#[test]
fn singular_polylines_lie_on_the_locus() {
    let e = engine(families::klein(R1).unwrap());
    let spec = MeshSpec { singular: true, ..MeshSpec::default() };
    let m = sample_mesh(&e, &spec).unwrap();
    assert!(!m.singular_polylines.is_empty());
    assert!(m.all_finite());
    let g = e.data().g();
    for p in m.singular_domain.iter().flatten() {
        assert!((g.eval(p.z, p.w).unwrap().norm() - 1.0).abs() <= 1e-3);
    }
    for (zs, xs) in m.singular_domain.iter().zip(&m.singular_polylines) {
        assert_eq!(zs.len(), xs.len());
        // spot-check the incremental walk against direct evaluation
        let k = zs.len() / 2;
        assert!(distance(e.evaluate(&zs[k]).unwrap(), xs[k]) <= 1e-6);
    }
    // vertices with a tiny conformal factor sit on the locus
    let step = spec.du().max(spec.dtheta());
    for v in &m.vertices {
        if v.conformal_factor <= 1e-4 * (1.0 + crate::weierstrass::regularity_value(e.data(), &v.point)) {
            let d = m.singular_domain.iter().map(|l| polyline_distance(l, v.point.z)).fold(f64::INFINITY, f64::min);
            assert!(d <= step * v.point.z.norm(), "{} at {d}", v.point.z);
        }
    }
}

fn polyline_distance(line: &[SurfacePoint], z: C64) -> f64 {
    line.windows(2).fold(f64::INFINITY, |m, w| {
        let (a, b) = (w[0].z, w[1].z);
        let t = (((z - a) * (b - a).conj()).re / (b - a).norm_sqr()).clamp(0.0, 1.0);
        m.min((a + (b - a) * t - z).norm())
    })
}
