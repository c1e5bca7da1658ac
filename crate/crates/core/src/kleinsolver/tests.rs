use super::*;
use crate::periods::regularized_interval_integral;

// independent high-precision quadrature of the defining integrals
const H1: f64 = -0.6482420999431045412;
const H_HALF: f64 = 0.506556838456539788;
const R1: f64 = 0.171369891850665318;
const R2: f64 = 0.691723675735665782;
const S: f64 = 0.317672196171980673;
// (r, A1, A2, h')
const DECOMP: [(f64, f64, f64, f64); 3] = [
    (0.2, 3.025502075554273, 2.149767686152647, 11.24210122775603),
    (0.5, 0.952762064946944, 0.786350296744009, -2.691874426637898),
    (0.9, 0.386731215903853, 0.281715519313400, -1.968072528178675),
];

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

#[test]
fn h_at_one_matches_gamma_closed_form() {
    let v = h(1.0, &cfg()).unwrap();
    assert!((v - H1).abs() <= 1e-6 * H1.abs());
    assert!((v - H1).abs() <= 1e-11);
}

#[test]
fn h_sign_pattern_and_limits() {
    let half = h(0.5, &cfg()).unwrap();
    assert!(half > 0.0);
    assert!((half - H_HALF).abs() <= 1e-11);
    assert!(h(1.0, &cfg()).unwrap() < 0.0);
    assert!((h(1000.0, &cfg()).unwrap() + core::f64::consts::PI).abs() <= 0.01);
    assert!((h(-1000.0, &cfg()).unwrap() - core::f64::consts::PI).abs() <= 0.01);
    assert!(h(0.0, &cfg()).is_err());
}

#[test]
fn a_functions_and_decomposition() {
    for (r, v1, v2, dh) in DECOMP {
        let (x1, x2) = (a1(r, &cfg()).unwrap(), a2(r, &cfg()).unwrap());
        assert!((x1 - v1).abs() <= 1e-11 && (x2 - v2).abs() <= 1e-11);
        let hv = h(r, &cfg()).unwrap();
        let dec = -2.0 * ((3.0 * r * r - 3.0 * r + 1.0) * x1 + (r - 1.0) * (r * r + 1.0) * x2);
        assert!((hv - dec).abs() <= 1e-8);
        let hp = h_prime(r, &cfg()).unwrap();
        assert!((hp - dh).abs() <= 1e-10);
        assert!((hp + 2.0 * ((3.0 * r - 1.0) / r * x1 + r * x2)).abs() <= 1e-8);
    }
    assert!(a1(1.0, &cfg()).unwrap() > 0.0 && a2(1.0, &cfg()).unwrap() > 0.0);
    assert!(a1(-1.0, &cfg()).is_err() && a2(0.0, &cfg()).is_err());
}

#[test]
fn a1_is_converged() {
    let fine = QuadratureConfig { abs_tol: 1e-14, rel_tol: 1e-13, max_depth: 80 };
    for r in [0.3, 0.7] {
        assert!((a1(r, &cfg()).unwrap() - a1(r, &fine).unwrap()).abs() <= 1e-10);
    }
}

// five-point central stencil; the three-point one has truncation error
// above 1e-4 near r = 0.1 where the third derivative of h blows up
fn central_difference(r: f64, e: f64) -> f64 {
    let f = |x: f64| h(x, &cfg()).unwrap();
    (f(r - 2.0 * e) - 8.0 * f(r - e) + 8.0 * f(r + e) - f(r + 2.0 * e)) / (12.0 * e)
}

#[test]
fn derivative_matches_finite_differences() {
    for r in [0.1, 0.3, 0.5, 0.8] {
        let fd = central_difference(r, 1e-4);
        let hp = h_prime(r, &cfg()).unwrap();
        assert!((hp - fd).abs() <= 1e-4, "r = {r}: {hp} vs {fd}");
    }
}

#[test]
fn contour_derivative_agrees() {
    for r in [0.2, 0.5, 0.9] {
        let a = h_prime(r, &cfg()).unwrap();
        let b = h_prime_contour(r, &cfg()).unwrap();
        assert!((a - b).abs() <= 1e-7, "r = {r}: {a} vs {b}");
    }
}

#[test]
fn loop_integral_is_minus_two_i_h() {
    let r = 0.5;
    let l = interval_loop(r).unwrap();
    let direct = integrate_form(&period_form(r), &l, &cfg()).unwrap().value;
    let expect = -2.0 * I * h(r, &cfg()).unwrap();
    assert!((direct - expect).norm() <= 1e-9);
}

#[test]
fn collapsed_loop_matches_contour() {
    let r = 0.5;
    let l = interval_loop(r).unwrap();
    let direct = integrate_form(&period_form(r), &l, &cfg()).unwrap().value;
    let collapsed = regularized_interval_integral(&period_form(r), &correction_f(r), &l, (0.0, 1.0 / r), &cfg()).unwrap();
    assert!((direct - collapsed).norm() <= 1e-8, "{direct} vs {collapsed}");
    // the raw form is not integrable at z = 0 without the correction
    let none = CurveFunction::on_curve(ComplexRational::zero(), ComplexRational::zero(), curve_rhs(r));
    assert!(regularized_interval_integral(&period_form(r), &none, &l, (0.0, 1.0 / r), &cfg()).is_err());
    // the by-parts correction of the derivative form
    let dr = regularized_interval_integral(&period_form_dr(r), &correction_h(r), &l, (0.0, 1.0 / r), &cfg()).unwrap();
    assert!(((I * 0.5 * dr).re - h_prime(r, &cfg()).unwrap()).abs() <= 1e-8);
}

#[test]
fn corrections_are_exact() {
    for r in [0.3, 0.5] {
        let l = interval_loop(r).unwrap();
        for corr in [correction_f(r), correction_h(r)] {
            let v = integrate_form(&MeromorphicForm::exact(&corr), &l, &cfg()).unwrap().value;
            assert!(v.norm() <= 1e-9);
        }
    }
}

#[test]
fn q_and_its_root() {
    let s = q_root();
    assert!((s - 0.317672).abs() <= 1e-5);
    assert!((s - S).abs() <= 1e-14);
    assert!(q(s).abs() <= 1e-10);
    assert!(q(-1.0) < 0.0 && q(0.2) > 0.0 && q(0.5) < 0.0);
}

#[test]
fn brent_on_a_cubic() {
    let (x, _) = brent(|x| Ok(x * x * x - 2.0), 0.0, 2.0, 1e-14).unwrap();
    assert!((x - 2.0f64.cbrt()).abs() <= 1e-13);
    assert!(brent(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-12).is_err());
}

#[test]
fn two_roots() {
    let res = solve(&SolveConfig::default()).unwrap();
    assert_eq!(res.roots.len(), 2);
    let (r1, r2) = (res.roots[0], res.roots[1]);
    assert!((r1 - R1).abs() <= 1e-9 && (r2 - R2).abs() <= 1e-9);
    assert!((r1 - 0.17137).abs() <= 5e-4 && (r2 - 0.691724).abs() <= 5e-4);
    assert!(res.residuals.iter().all(|v| v.abs() <= 1e-10));
    let s = q_root();
    assert!(r1 < s && s < r2);
    // the derivative has the sign of q at each root
    assert!(h_prime(r1, &cfg()).unwrap() > 0.0);
    assert!(h_prime(r2, &cfg()).unwrap() < 0.0);
    let again = solve(&SolveConfig::default()).unwrap();
    assert_eq!(res.roots[0].to_bits(), again.roots[0].to_bits());
    assert_eq!(res.roots[1].to_bits(), again.roots[1].to_bits());
}
