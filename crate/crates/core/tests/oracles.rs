//! Values checked against frozen high-precision references.

mod common;

use common::*;
use fwx_core::eval::eval_singular_expansion;
use fwx_core::*;

#[test]
fn gauss_values_every_region() {
    let opts = EvalOptions::default().with_tol(1e-13);
    for &(name, a, b, cc, z, want) in GAUSS_VALUES {
        let ps = ParameterSet::gauss(a, b, cc).unwrap();
        let got = eval_auto(&ps, c(z.0, z.1), &opts).unwrap();
        let e = rel(got.value, c(want.0, want.1));
        assert!(e < 1e-11, "{name}: {} vs {want:?} ({e:e}, {})", got.value, got.representation.as_str());
    }
}

#[test]
fn gauss_matches_closed_form_inside_disk() {
    let opts = EvalOptions::default().with_tol(1e-14);
    for (a, b, cc) in [(0.5, 0.7, 1.3), (1.2, 0.3, 2.9), (0.25, 1.5, 3.0)] {
        let ps = ParameterSet::gauss(a, b, cc).unwrap();
        let pref = gamma(a) * gamma(b) / gamma(cc);
        for x in [-3.0, -0.8, 0.0, 0.2, 0.45] {
            let got = eval_auto(&ps, c(x, 0.0), &opts).unwrap().value;
            let want = pref * hyp2f1(a, b, cc, x);
            assert!(rel(got, c(want, 0.0)) < 1e-11, "({a},{b},{cc}) at {x}: {got} vs {want}");
        }
    }
}

#[test]
fn half_scale_set_all_representations() {
    let ps = half_scale();
    assert!((ps.rho() - 2.0).abs() < 1e-15);
    assert!((ps.mu().re + 1.5).abs() < 1e-15);
    let opts = EvalOptions::default();
    for &(z, want) in HALF_SCALE_VALUES {
        let got = eval_auto(&ps, c(z.0, z.1), &opts).unwrap();
        assert!(rel(got.value, c(want.0, want.1)) < 1e-9, "{z:?}: {}", got.value);
    }
    // inside the disk the Maclaurin series agrees with the expansion about ρ
    let m = eval_maclaurin(&ps, c(1.4, 0.0), &opts.with_tol(1e-14)).unwrap().value;
    assert!(rel(m, c(HALF_SCALE_VALUES[0].1 .0, 0.0)) < 1e-12);
}

#[test]
fn half_scale_residue_series_rejected() {
    // the two upper parameters share every pole: exponents coincide
    let ps = half_scale();
    let r = eval_residue_series(&ps, c(-5.0, 1.0), &EvalOptions::default());
    assert!(matches!(r, Err(FwxError::PoleCollision { .. })));
}

#[test]
fn gauss_cut_values() {
    let ps = ParameterSet::gauss(0.5, 0.7, 1.3).unwrap();
    let opts = EvalOptions::default().with_tol(1e-13);
    for &(x, jump, avg) in GAUSS_CUT {
        let cv = cut_values(&ps, x, &opts).unwrap();
        assert!(rel(cv.jump, c(0.0, jump)) < 1e-11, "jump at {x}: {}", cv.jump);
        assert!(rel(cv.average, c(avg, 0.0)) < 1e-11, "average at {x}: {}", cv.average);
        assert!(rel(cv.jump, gauss_jump(0.5, 0.7, 1.3, x)) < 1e-11);
        assert_eq!(jump_on_cut(&ps, x, &opts).unwrap(), cv.jump);
        assert_eq!(average_on_cut(&ps, x, &opts).unwrap(), cv.average);
    }
}

#[test]
fn banks_of_the_cut_straddle_average() {
    let ps = ParameterSet::gauss(0.5, 0.7, 1.3).unwrap();
    let opts = EvalOptions::default().with_tol(1e-13);
    let x = 3.0;
    let cv = cut_values(&ps, x, &opts).unwrap();
    let eps = 1e-7;
    let up = eval_residue_series(&ps, c(x, eps), &opts).unwrap().value;
    let down = eval_residue_series(&ps, c(x, -eps), &opts).unwrap().value;
    assert!((up - down - cv.jump).norm() < 1e-5);
    assert!(((up + down) * 0.5 - cv.average).norm() < 1e-5);
}

#[test]
fn generalized_3f2_at_rho() {
    let ps = ParameterSet::real(&[0.8, 1.2, 0.5], &[1.0, 1.0, 1.0], &[1.7, 1.4], &[1.0, 1.0]).unwrap();
    assert!((ps.mu().re - 0.6).abs() < 1e-15);
    let got = eval_at_rho(&ps, &EvalOptions::default().with_tol(1e-12)).unwrap();
    assert!(rel(got.value, c(SAALSCHUTZ_FREE_3F2, 0.0)) < 1e-10, "{}", got.value);
    assert!(got.warnings.is_empty());
}

#[test]
fn zero_balanced_constant() {
    let ps = ParameterSet::gauss(0.5, 0.5, 1.0).unwrap();
    let c0 = fwx_core::engine::log_case_coeffs(&ps, 1.0, 0, 1e-12).unwrap();
    assert!((c0.regular_part.re - ZERO_BALANCED_SUM).abs() < 1e-11);
    // the log form at w = 1e-3 against the Maclaurin series
    let z = c(1.0 - 1e-3, 0.0);
    let s = eval_singular_expansion(&ps, z, &EvalOptions::default().with_tol(1e-13)).unwrap();
    let m = eval_maclaurin(&ps, z, &EvalOptions::default().with_tol(1e-13).with_max_terms(1_000_000)).unwrap();
    assert!(rel(s.value, m.value) < 1e-10, "{} {}", s.value, m.value);
}

#[test]
fn at_rho_continuation_warns_for_negative_mu() {
    // μ = -0.5: the sum is the parameter continuation, not a limit
    let ps = ParameterSet::gauss(0.9, 0.8, 1.2).unwrap();
    let r = eval_at_rho(&ps, &EvalOptions::default()).unwrap();
    assert_eq!(r.warnings.len(), 1);
    let want = gauss_sum(0.9, 0.8, 1.2);
    assert!(rel(r.value, c(want, 0.0)) < 1e-9, "{} vs {want}", r.value);
}
