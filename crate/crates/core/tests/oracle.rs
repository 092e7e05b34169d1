use anticyclo::analytic_oracle::*;
use anticyclo::arith::quad::QuadField;
use anticyclo::arith::{rat, Scalar};
use anticyclo::cm_tower::*;
use anticyclo::forms_hecke::*;
use anticyclo::ideal_classes::*;
use anticyclo::quaternion::QuatAlgebra;

fn b11() -> IdealClassSet {
    let b = QuatAlgebra::new(QuadField::new(4).unwrap(), 3, 1, 11).unwrap();
    IdealClassSet::compute(&eichler_order(&b, 1).unwrap()).unwrap()
}

#[test]
fn eta_matches_brandt_coefficients() {
    let cs = b11();
    let f = eigenform(&cs, 2, &[(2, rat(-2))]).unwrap();
    let eta = eta_level11(1000);
    let mats = brandt_theta(&cs, 1000, 2).unwrap();
    let fv = f.flat();
    for (i, m) in mats.iter().enumerate() {
        let n = i + 1;
        let a = cs.alg().field.int(eta.a(n), 0);
        for (row, x) in m.iter().zip(&fv) {
            let lhs = row.iter().zip(&fv).fold(cs.alg().field.int(0, 0), |s, (u, v)| s.plus(&u.times(v)));
            assert_eq!(lhs, a.times(x), "n={n}");
        }
    }
}

#[test]
fn hecke_recursion_reproduces_eta() {
    let eta = eta_level11(3000);
    let h = hecke_extend(11, 2, &|q| eta.a(q as usize), 3000);
    assert_eq!(eta.coeffs, h.coeffs);
}

#[test]
fn central_value_of_level_11() {
    let f = eta_level11(2000);
    let l = newform_lseries(&f, 1.0);
    let v = l.value(0.5).unwrap();
    assert!((v.value - 0.253_841_860_855_910_7).abs() < 1e-10, "{v:?}");
    let d = l.sign_discrepancy(0.5).unwrap();
    assert!(d[0].1 < 1e-10 && d[1].1 > 1e-4, "{d:?}");
}

#[test]
fn rankin_value_factors_for_trivial_character() {
    let field = QuadField::new(4).unwrap();
    let f = eta_level11(20000);
    let g = ring_class_group(&field, 3, 0).unwrap();
    let chi = IdealCharacter { field, group: &g, chi: TowerCharacter { branch: 0, wild: 0, m: 0 }, embedding: 1 };
    let lk = rankin_lseries(&f, &chi, 20000).unwrap().value(0.5).unwrap();
    let l1 = newform_lseries(&f, 1.0).value(0.5).unwrap();
    let tw = twisted_lseries(&f, &field, 1.0);
    let d = tw.sign_discrepancy(0.5).unwrap();
    let sign = if d[0].1 < d[1].1 { 1.0 } else { -1.0 };
    let l2 = LSeries { sign, ..tw }.value(0.5).unwrap();
    let rel = (lk.value - l1.value * l2.value).abs() / lk.value.abs();
    assert!(rel < 1e-8, "{} vs {}·{}", lk.value, l1.value, l2.value);
}

#[test]
fn cutoff_doubling_is_stable() {
    let field = QuadField::new(4).unwrap();
    let f = eta_level11(120_000);
    let g = ring_class_group(&field, 3, 2).unwrap();
    let chi = IdealCharacter { field, group: &g, chi: TowerCharacter { branch: 0, wild: 1, m: 0 }, embedding: 1 };
    let l = rankin_lseries(&f, &chi, 120_000).unwrap();
    let n = l.cutoff(0.5);
    let a = l.value_with_cutoff(0.5, n).unwrap();
    let b = l.value_with_cutoff(0.5, 2 * n).unwrap();
    assert!((a - b).abs() <= 1e-10 * a.abs().max(1e-3), "{a} {b}");
    let d = l.sign_discrepancy(0.5).unwrap();
    assert!(d[0].1 < 1e-8 && d[1].1 > 1e-4, "{d:?}");
}

#[test]
fn adjoint_value_is_self_consistent() {
    let f = eta_level11(5000);
    let l = sym2_lseries(&f);
    let v = l.value(1.0).unwrap();
    assert!(v.error_estimate < 1e-9, "{v:?}");
    assert!(v.value > 0.0);
    let d = l.sign_discrepancy(0.5).unwrap();
    assert!(d[0].1 < 1e-9, "{d:?}");
}

/// Gross's classical formula for `N` prime, with `(f, f) = 8π²∬|f|² dx dy`,
/// gives `|χ̂(Θ_n)|² = |e_p|²·√D_K·L(f/K, χ, 1)·⟨f, f⟩ / (8π²‖f‖²)` once the
/// unit index `u_K` of the Gross points is accounted for. Checked on every
/// nonvanishing character of `G_2`, including the unramified one.
#[test]
fn theta_matches_classical_normalization() {
    let b = QuatAlgebra::new(QuadField::new(4).unwrap(), 3, 1, 11).unwrap();
    let cs = IdealClassSet::compute(&eichler_order(&b, 1).unwrap()).unwrap();
    let f = eigenform(&cs, 2, &[(2, rat(-2))]).unwrap();
    let setup = anticyclo::theta_padicL::ThetaSetup::new(cs, f, rat(-1)).unwrap();
    let eta = eta_level11(60_000);
    let pairing = petersson(&setup.cs, &setup.form, &setup.form).unwrap().embed_complex().re;
    let norm = petersson_norm_numeric(&eta).unwrap().value;
    // ‖f‖² of 11a equals the covolume of its period lattice over 4π².
    assert!((norm - 0.046_900_147_873_495).abs() < 1e-12);
    let omega = setup_period(&setup, &eta).unwrap();
    let mut seen = 0;
    for (branch, wild) in [(0u64, 0u64), (1, 0), (0, 1), (1, 1)] {
        let chi = TowerCharacter { branch, wild, m: 0 };
        for s in interpolation_samples(&setup, &eta, omega, 2, chi).unwrap() {
            let pred = s.e_p.norm_sqr() * 2.0 * s.l_value.value * pairing / (8.0 * std::f64::consts::PI.powi(2) * norm);
            assert!((s.theta_sq - pred).abs() < 1e-9 * (1.0 + pred), "{s:?} {pred}");
            seen += (s.theta_sq > 1e-6) as usize;
        }
    }
    assert_eq!(seen, 6);
}
