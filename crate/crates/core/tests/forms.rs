use anticyclo::arith::linalg::{mat_mul, mat_vec, Mat};
use anticyclo::arith::quad::{QuadElem, QuadField};
use anticyclo::arith::{rat, Rational, Scalar};
use anticyclo::forms_hecke::*;
use anticyclo::ideal_classes::*;
use anticyclo::quaternion::QuatAlgebra;
use proptest::prelude::*;
use std::sync::OnceLock;

fn class_set(dk: i64, p: u64, n_minus: u64) -> IdealClassSet {
    let b = QuatAlgebra::new(QuadField::new(dk).unwrap(), p, 1, n_minus).unwrap();
    IdealClassSet::compute(&eichler_order(&b, 1).unwrap()).unwrap()
}

#[test]
fn hecke_spectrum_level_11() {
    let cs = class_set(4, 3, 11);
    let f = eigenform(&cs, 2, &[(2, rat(-2))]).unwrap();
    let field = cs.alg().field;
    for (q, a) in [(2, -2), (3, -1), (5, 1), (7, -2), (11, 1), (13, 4)] {
        let op = brandt_matrix(&cs, q, 2).unwrap();
        assert_eq!(eigenvalue(&op, &f).unwrap(), field.int(a, 0), "q={q}");
    }
}

/// Hurwitz class number `h(D)/(w(D)/2)` for a discriminant `D < 0`.
fn hurwitz_weighted(d: i64) -> Rational {
    let mut h = 0i64;
    let a_max = ((-d) as f64 / 3.0).sqrt() as i64 + 1;
    for a in 1..=a_max {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if num_integer::gcd(num_integer::gcd(a, b.abs()), c) != 1 {
                continue;
            }
            h += 1;
        }
    }
    match d {
        -3 => rat(h) / rat(3),
        -4 => rat(h) / rat(2),
        _ => rat(h),
    }
}

/// Eichler–Selberg trace of `T_n` on `S_k(Γ₀(N))` for `N` prime, `(n, N) = 1`,
/// `k ≥ 4`, `n` not a square.
fn trace_formula(n: i64, k: u32, level: i64) -> Rational {
    assert!(k >= 4 && n % level != 0);
    let r = (n as f64).sqrt() as i64;
    assert!(r * r != n);
    let mut a2 = rat(0);
    let mut t = -2 * r - 1;
    while t * t >= 4 * n {
        t += 1;
    }
    while t * t < 4 * n {
        // (ρ^{k−1} − ρ̄^{k−1})/(ρ − ρ̄) by the recursion P_j = tP_{j−1} − nP_{j−2}
        let (mut p0, mut p1) = (0i64, 1i64);
        for _ in 1..k - 1 {
            let p2 = t * p1 - n * p0;
            p0 = p1;
            p1 = p2;
        }
        let disc = t * t - 4 * n;
        let roots = (0..level).filter(|x| (x * x - t * x + n).rem_euclid(level) == 0).count() as i64;
        let mut f = 1;
        while f * f <= -disc {
            if disc % (f * f) == 0 && (disc / (f * f)).rem_euclid(4) <= 1 {
                assert!(f % level != 0);
                a2 = a2 + rat(p1 * roots) * hurwitz_weighted(disc / (f * f));
            }
            f += 1;
        }
        t += 1;
    }
    let mut a3 = 0i64;
    for d in 1..=n {
        if n % d == 0 {
            a3 += d.min(n / d).pow(k - 1) * 2;
        }
    }
    -a2 / rat(2) - rat(a3) / rat(2)
}

/// `Tr(T·P)` with `P` the blockwise invariant projector; `T` maps into the
/// forms, so this is the trace on the forms.
fn trace_on_forms(cs: &IdealClassSet, op: &HeckeOperator) -> QuadElem {
    let d = (op.k - 1) as usize;
    let mut acc = cs.alg().field.int(0, 0);
    for c in 0..cs.len() {
        let pr = invariant_projector(cs, c, op.k);
        for a in 0..d {
            for e in 0..d {
                acc = acc.plus(&op.matrix[c * d + a][c * d + e].times(&pr[e][a]));
            }
        }
    }
    acc
}

#[test]
fn weight_four_matches_trace_formula() {
    let cs = class_set(3, 7, 5);
    assert_eq!(trace_formula(2, 4, 5), rat(-4));
    for q in [2u64, 3, 7, 11] {
        let op = brandt_matrix(&cs, q, 4).unwrap();
        let expect = trace_formula(q as i64, 4, 5);
        assert_eq!(trace_on_forms(&cs, &op), cs.alg().field.elem(expect, rat(0)), "q={q}");
    }
    let f = eigenform(&cs, 4, &[(2, rat(-4))]).unwrap();
    assert_eq!(eigenvalue(&brandt_matrix(&cs, 3, 4).unwrap(), &f).unwrap(), cs.alg().field.int(2, 0));
}

struct Instance {
    cs: IdealClassSet,
    k: u32,
    ops: Vec<HeckeOperator>,
    projector: Mat<QuadElem>,
}

fn instance(i: usize) -> &'static Instance {
    static CELL: [OnceLock<Instance>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    CELL[i].get_or_init(|| {
        let (dk, p, nm, k, qs): (i64, u64, u64, u32, &[u64]) = match i {
            0 => (4, 3, 11, 2, &[2, 3, 5, 7, 11, 13]),
            1 => (4, 5, 7, 4, &[2, 3, 5, 7, 11]),
            _ => (3, 7, 5, 4, &[2, 3, 5, 7, 11]),
        };
        let cs = class_set(dk, p, nm);
        let ops = qs.iter().map(|&q| brandt_matrix(&cs, q, k).unwrap()).collect();
        let d = (k - 1) as usize;
        let h = cs.len();
        let field = cs.alg().field;
        let mut projector = vec![vec![field.int(0, 0); h * d]; h * d];
        for c in 0..h {
            let pr = invariant_projector(&cs, c, k);
            for a in 0..d {
                for e in 0..d {
                    projector[c * d + a][c * d + e] = pr[a][e].clone();
                }
            }
        }
        Instance { cs, k, ops, projector }
    })
}

fn random_form(inst: &Instance, seed: &[(i64, i64)]) -> AutoForm<QuadElem> {
    let field = inst.cs.alg().field;
    let n = inst.projector.len();
    let v: Vec<QuadElem> = (0..n).map(|i| field.int(seed[i % seed.len()].0, seed[i % seed.len()].1)).collect();
    AutoForm::from_flat(inst.k, &mat_vec(&inst.projector, &v), false)
}

fn check_algebra(i: usize, a: usize, b: usize, s1: &[(i64, i64)], s2: &[(i64, i64)]) {
    let inst = instance(i);
    let (ta, tb) = (&inst.ops[a % inst.ops.len()], &inst.ops[b % inst.ops.len()]);
    assert_eq!(mat_mul(&ta.matrix, &tb.matrix), mat_mul(&tb.matrix, &ta.matrix), "{} {}", ta.label, tb.label);
    let f = random_form(inst, s1);
    let g = random_form(inst, s2);
    let lhs = petersson(&inst.cs, &apply(ta, &f), &g).unwrap();
    let rhs = petersson(&inst.cs, &f, &apply(ta, &g)).unwrap();
    assert_eq!(lhs, rhs, "{}", ta.label);
}

fn seeds() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-9i64..10, -9i64..10), 1..7)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn operators_commute_and_are_self_adjoint_level_11(a in 0usize..8, b in 0usize..8, s1 in seeds(), s2 in seeds()) {
        check_algebra(0, a, b, &s1, &s2);
    }

    #[test]
    fn operators_commute_and_are_self_adjoint_weight_four(a in 0usize..8, b in 0usize..8, s1 in seeds(), s2 in seeds()) {
        check_algebra(1, a, b, &s1, &s2);
    }

    #[test]
    fn operators_commute_and_are_self_adjoint_disc_five(a in 0usize..8, b in 0usize..8, s1 in seeds(), s2 in seeds()) {
        check_algebra(2, a, b, &s1, &s2);
    }

    #[test]
    fn rho_is_a_homomorphism(g in prop::array::uniform4(-6i64..7), h in prop::array::uniform4(-6i64..7), k in prop::sample::select(vec![2u32, 4, 6])) {
        let m1 = [[rat(g[0]), rat(g[1])], [rat(g[2]), rat(g[3])]];
        let m2 = [[rat(h[0]), rat(h[1])], [rat(h[2]), rat(h[3])]];
        prop_assume!(g[0] * g[3] != g[1] * g[2] && h[0] * h[3] != h[1] * h[2]);
        let prod: [[Rational; 2]; 2] = [
            [&m1[0][0] * &m2[0][0] + &m1[0][1] * &m2[1][0], &m1[0][0] * &m2[0][1] + &m1[0][1] * &m2[1][1]],
            [&m1[1][0] * &m2[0][0] + &m1[1][1] * &m2[1][0], &m1[1][0] * &m2[0][1] + &m1[1][1] * &m2[1][1]],
        ];
        let r = mat_mul(&rho_matrix(&m1, k).unwrap(), &rho_matrix(&m2, k).unwrap());
        prop_assert_eq!(rho_matrix(&prod, k).unwrap(), r);
    }

    #[test]
    fn normalization_is_idempotent_and_scale_free(s in seeds(), num in 1i64..20, den in 1i64..20, neg in any::<bool>()) {
        let inst = instance(1);
        let f = random_form(inst, &s);
        prop_assume!(f.flat().iter().any(|x| !x.is_zero_elem()));
        let n1 = normalize(&f, 5);
        prop_assert_eq!(&normalize(&n1, 5), &n1);
        let c = if neg { -rat(num) / rat(den) } else { rat(num) / rat(den) };
        let scaled = f.map(|x| x.scale_rat(&c));
        prop_assert_eq!(&normalize(&scaled, 5), &n1);
    }
}
