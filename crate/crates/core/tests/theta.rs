use anticyclo::arith::ext::{theta_root, KpElem};
use anticyclo::arith::padic::PadicNum;
use anticyclo::arith::quad::{QuadElem, QuadField, Splitting};
use anticyclo::arith::{rat, FieldScalar, Scalar};
use anticyclo::cm_tower::*;
use anticyclo::forms_hecke::*;
use anticyclo::ideal_classes::*;
use anticyclo::quaternion::QuatAlgebra;
use anticyclo::theta_padicL::*;

fn desk() -> ThetaSetup {
    let b = QuatAlgebra::new(QuadField::new(4).unwrap(), 3, 1, 11).unwrap();
    let cs = IdealClassSet::compute(&eichler_order(&b, 1).unwrap()).unwrap();
    let f = eigenform(&cs, 2, &[(2, rat(-2))]).unwrap();
    ThetaSetup::new(cs, f, rat(-1)).unwrap()
}

fn weight_four() -> ThetaSetup {
    let b = QuatAlgebra::new(QuadField::new(4).unwrap(), 5, 1, 7).unwrap();
    let cs = IdealClassSet::compute(&eichler_order(&b, 1).unwrap()).unwrap();
    let f = eigenform(&cs, 4, &[(2, rat(-1)), (3, rat(-2))]).unwrap();
    ThetaSetup::new(cs, f, rat(16)).unwrap()
}

/// Image of `x ∈ K` in the coefficient ring used by `gross_values`.
fn local(setup: &ThetaSetup, x: &QuadElem, prec: i64) -> KpElem {
    let f = setup.field();
    let p = setup.p();
    let y = KpElem::from_quad(x, p, prec);
    if f.splitting(p) == Splitting::Split {
        KpElem::from_padic(&f, y.project(&theta_root(&f, p, prec as u32).unwrap()))
    } else {
        y
    }
}

/// `pⁿʳ D_K^r √β^{−m} ⟨v_m, ρ_k(i_K(α)) f(I_c)⟩ (ā₀/a₀)^m`, computed in `K`.
fn archimedean_value(setup: &ThetaSetup, pt: &GrossPoint, m: i64, prec: i64) -> KpElem {
    let k = setup.k;
    let r = half(k);
    let f = setup.field();
    let p = setup.p();
    let rho = rho_matrix(&pt.alpha.i_k(), k).unwrap();
    let w: Vec<QuadElem> = rho
        .iter()
        .map(|row| row.iter().zip(&setup.form.values[pt.class]).fold(f.int(0, 0), |a, (x, y)| a.plus(&x.times(y))))
        .collect();
    let mut e = vec![f.int(0, 0); (k - 1) as usize];
    e[(m + r) as usize] = f.int(1, 0);
    let scal = rat(p as i64).pow((pt.n as i64 * r) as i32) * rat(f.dk).pow(r as i32);
    let mut v = pair_k(&e, &w, k).scale_rat(&scal);
    for _ in 0..m.abs() {
        v = if m > 0 { v.times(&pt.twist) } else { v.times(&pt.twist.inverse().unwrap()) };
    }
    let s = setup.cs.alg().sqrt_beta(p, setup.tower.digits).unwrap();
    let sl = KpElem::from_padic(&f, PadicNum::from_int(p, prec, &s));
    let mut out = local(setup, &v, prec);
    for _ in 0..m.abs() {
        out = if m > 0 { out.times(&sl.inverse().unwrap()) } else { out.times(&sl) };
    }
    out
}

#[test]
fn gross_values_match_archimedean_model() {
    for setup in [desk(), weight_four()] {
        let r = half(setup.k);
        let ms: Vec<i64> = (-r..=r).collect();
        for n in 1..=2 {
            let g = setup.group(n).unwrap();
            let pts = setup.points(&g).unwrap();
            let vals = gross_values(&setup, &g, &pts, &ms).unwrap();
            let prec = setup.precision(n);
            for (j, &m) in ms.iter().enumerate() {
                for (i, pt) in pts.iter().enumerate() {
                    let want = archimedean_value(&setup, pt, m, prec);
                    assert!(vals[j][i].congruent(&want, prec - 4), "k={} n={n} m={m} i={i}", setup.k);
                }
            }
        }
    }
}

#[test]
fn gamma_conjugates_splitting_to_field_embedding() {
    // γ i_p(x) γ⁻¹ = ι_p(i_K(x)) for γ = [[√β, −√βϑ̄], [−1, ϑ]].
    for setup in [desk(), weight_four()] {
        let b = setup.cs.alg().clone();
        let f = b.field;
        let p = b.p;
        let d = setup.tower.digits;
        let prec = d as i64 - 4;
        let s = KpElem::from_padic(&f, PadicNum::from_int(p, prec, &b.sqrt_beta(p, d).unwrap()));
        let th = local(&setup, &f.theta(), prec);
        let thb = local(&setup, &f.theta().conj(), prec);
        let one = s.one_like();
        let gamma = [[s.clone(), s.times(&thb).negate()], [one.negate(), th.clone()]];
        let mul = |a: &[[KpElem; 2]; 2], c: &[[KpElem; 2]; 2]| -> [[KpElem; 2]; 2] {
            let e = |i: usize, j: usize| a[i][0].times(&c[0][j]).plus(&a[i][1].times(&c[1][j]));
            [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
        };
        for c in [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [3, -1, 2, 5]] {
            let x = b.from_int_coords(c);
            let ip = b.split_rat(p, d, &x).unwrap();
            let ipl: [[KpElem; 2]; 2] = [
                [local(&setup, &QuadElem::from_rat(f, ip[0][0].clone()), prec), local(&setup, &QuadElem::from_rat(f, ip[0][1].clone()), prec)],
                [local(&setup, &QuadElem::from_rat(f, ip[1][0].clone()), prec), local(&setup, &QuadElem::from_rat(f, ip[1][1].clone()), prec)],
            ];
            let ik = x.i_k();
            let ikl: [[KpElem; 2]; 2] = [
                [local(&setup, &ik[0][0], prec), local(&setup, &ik[0][1], prec)],
                [local(&setup, &ik[1][0], prec), local(&setup, &ik[1][1], prec)],
            ];
            let lhs = mul(&gamma, &ipl);
            let rhs = mul(&ikl, &gamma);
            for i in 0..2 {
                for j in 0..2 {
                    assert!(lhs[i][j].congruent(&rhs[i][j], prec - 4), "coords {c:?}");
                }
            }
        }
    }
}

#[test]
fn exact_and_padic_elements_agree() {
    let setup = desk();
    for n in 1..=3 {
        let ex = theta_exact(&setup, n).unwrap();
        let pa = theta_element(&setup, n, 0).unwrap();
        let prec = setup.precision(n);
        for (a, b) in ex.coeffs.iter().zip(&pa.coeffs) {
            assert!(exact_to_padic(&setup, a, prec).congruent(b, prec - 2));
        }
    }
}

#[test]
fn tower_compatibility() {
    for setup in [desk(), weight_four()] {
        let nmax = if setup.k == 2 { 4 } else { 3 };
        for n in 2..=nmax {
            let g = setup.group(n).unwrap();
            let gl = setup.group(n - 1).unwrap();
            let r = half(setup.k);
            let ms: Vec<i64> = (-r..=r).collect();
            let hi = theta_elements(&setup, n, &ms).unwrap();
            let lo = theta_elements(&setup, n - 1, &ms).unwrap();
            let prec = setup.precision(n);
            for (a, b) in hi.iter().zip(&lo) {
                // Exact compatibility holds for m = 0; the weight twist (ā/a)^m is
                // only constant on fibres modulo p^{n−1}.
                let e = if a.m == 0 { prec - 4 } else { n as i64 - 1 };
                let pr = a.project(&g, &gl);
                for (x, y) in pr.coeffs.iter().zip(&b.coeffs) {
                    assert!(x.congruent(y, e), "k={} n={n} m={}", setup.k, a.m);
                }
            }
        }
    }
}

#[test]
fn exact_tower_compatibility() {
    let setup = desk();
    for n in 2..=4 {
        let g = setup.group(n).unwrap();
        let gl = setup.group(n - 1).unwrap();
        let hi = theta_exact(&setup, n).unwrap();
        let lo = theta_exact(&setup, n - 1).unwrap();
        assert_eq!(hi.project(&g, &gl), lo);
    }
}

#[test]
fn weight_congruences() {
    let setup = weight_four();
    for n in 1..=2 {
        let rep = congruence_check(&setup, n).unwrap();
        assert!(rep.holds, "{rep:?}");
        assert!(rep.min_difference_valuation >= n as i64);
    }
}

#[test]
fn functional_equation_desk() {
    let setup = desk();
    // N = 11 with a_11 = 1 at the Steinberg prime: ε(π_11) = −a_11 = −1;
    // r₀ = 0, k/2 = 1.
    let eps = epsilon_prime(&setup.field(), 3, 2, 11, &[LocalSign { q: 11, eps: -1 }]);
    assert_eq!(eps, 1);
    for n in 1..=3 {
        let g = setup.group(n).unwrap();
        let th = theta_exact(&setup, n).unwrap();
        let s = fe_translation(&setup, &g).unwrap();
        assert_eq!(s, 0);
        let rep = functional_equation_check(&th, &g, eps, s);
        assert!(rep.holds, "{rep:?}");
    }
}

#[test]
fn functional_equation_with_n_plus() {
    // 55a: new at 11 and 5, ordinary at 13 (a_13 = 2), and 5 splits in Q(i).
    let b = QuatAlgebra::new(QuadField::new(4).unwrap(), 13, 5, 11).unwrap();
    let cs = IdealClassSet::compute(&eichler_order(&b, 5).unwrap()).unwrap();
    let f = eigenform(&cs, 2, &[(2, rat(1)), (3, rat(0))]).unwrap();
    assert_eq!(eigenvalue(&brandt_matrix(&cs, 13, 2).unwrap(), &f).unwrap(), QuadField::new(4).unwrap().int(2, 0));
    let setup = ThetaSetup::new(cs, f, rat(2)).unwrap();
    let n_plus = setup.tower.n_plus_generator().unwrap();
    assert_eq!(n_plus.norm(), rat(5));
    // 55a has root number +1, so ε(π_5)ε(π_11) = −w = −1; ε′ = (−1)^{0+1}·(−1).
    let eps = epsilon_prime(&setup.field(), 13, 2, 11, &[LocalSign { q: 5, eps: -1 }, LocalSign { q: 11, eps: 1 }]);
    assert_eq!(eps, 1);
    for n in 1..=2 {
        let g = setup.group(n).unwrap();
        let th = theta_exact(&setup, n).unwrap();
        let h = fe_translation(&setup, &g).unwrap();
        let rep = functional_equation_check(&th, &g, eps, h);
        assert!(rep.holds, "{rep:?}");
        if n == 2 {
            // [t]_n is nontrivial here (β = −451 = −11·41) and is needed.
            assert_ne!(h, sigma_n_plus(&setup.tower, &g).unwrap());
            assert!(!functional_equation_check(&th, &g, eps, sigma_n_plus(&setup.tower, &g).unwrap()).holds);
        }
    }
}

#[test]
fn mu_on_desk_branches() {
    let setup = desk();
    // Γ_1⁻ is trivial, so the trivial branch at n = 1 is the scalar
    // −φ(x_0)(A + 4)/(2A²), and A ≡ −1 (mod 3) makes it divisible by 3.
    let g1 = setup.group(1).unwrap();
    let b1 = branch_project(&theta_element(&setup, 1, 0).unwrap(), &g1, 0);
    assert_eq!(mu_lambda(&b1).unwrap(), (1, 0));
    for n in 2..=4 {
        let g = setup.group(n).unwrap();
        let th = theta_element(&setup, n, 0).unwrap();
        for t in 0..g.delta_order() as u64 {
            let br = branch_project(&th, &g, t);
            if let Ok((mu, _)) = mu_lambda(&br) {
                assert_eq!(mu, 0, "n={n} t={t}");
            }
        }
    }
}

#[test]
fn character_values_are_galois_equivariant() {
    let setup = desk();
    let g = setup.group(3).unwrap();
    let th = theta_exact(&setup, 3).unwrap();
    for wild in 0..9u64 {
        let chi = TowerCharacter { branch: 1, wild, m: 0 };
        let v = th.evaluate(&g, &chi).unwrap();
        // Galois action ζ ↦ ζ^a on values corresponds to χ ↦ χ^a.
        for a in [1u64, 5, 7, 11, 13, 17] {
            let chia = TowerCharacter { branch: a % g.delta_order() as u64, wild: wild * a % 9, m: 0 };
            assert_eq!(v.galois(a as i64), th.evaluate(&g, &chia).unwrap(), "wild={wild} a={a}");
        }
    }
}
