use anticyclo::arith::quad::QuadField;
use anticyclo::arith::rat;
use anticyclo::ideal_classes::*;
use anticyclo::quaternion::QuatAlgebra;

/// (D_K, N⁻, p) with every prime of N⁻ inert in K.
pub const MASS_CASES: [(i64, u64, u64); 6] = [(3, 2, 7), (4, 3, 7), (3, 5, 7), (4, 7, 5), (4, 11, 5), (8, 13, 5)];

fn algebra(dk: i64, n_minus: u64, p: u64, level: u64) -> QuatAlgebra {
    let extra: Vec<u64> = anticyclo::arith::int::prime_divisors(level);
    QuatAlgebra::with_extra_pinned(QuadField::new(dk).unwrap(), p, 1, n_minus, &extra).unwrap()
}

#[test]
fn small_class_sets() {
    for (dk, nm, p, h, gam) in [(3, 2, 7, 1, vec![12]), (4, 3, 5, 1, vec![6]), (4, 11, 3, 2, vec![2, 3])] {
        let b = algebra(dk, nm, p, 1);
        let cs = IdealClassSet::compute(&eichler_order(&b, 1).unwrap()).unwrap();
        assert_eq!(cs.len(), h);
        let mut g: Vec<usize> = cs.classes.iter().map(|c| c.gamma_order()).collect();
        g.sort();
        assert_eq!(g, gam);
        for i in 0..cs.len() {
            assert_eq!(cs.unit_group(i).len(), cs.classes[i].gamma_order());
            assert_eq!(cs.classes[i].unit_count_classical(), 2 * cs.classes[i].gamma_order());
        }
    }
}

#[test]
fn mass_sweep() {
    for (dk, nm, p) in MASS_CASES {
        for level in [1u64, 3] {
            // Level 3 is not coprime to N⁻ = 3; use 5 there.
            let level = if nm % level == 0 && level > 1 { 5 } else { level };
            let t = std::time::Instant::now();
            let b = algebra(dk, nm, p, level);
            let r = eichler_order(&b, level).unwrap();
            assert_eq!(r.discriminant(), rat((nm * level) as i64));
            let cs = IdealClassSet::compute(&r).unwrap();
            assert_eq!(cs.mass(), mass_formula(nm, level));
            println!("N-={nm} M={level}: h={} mass={} in {:?}", cs.len(), cs.mass(), t.elapsed());
        }
    }
}

#[test]
fn identification_recovers_neighbors() {
    let b = algebra(4, 11, 3, 1);
    let r = eichler_order(&b, 1).unwrap();
    let cs = IdealClassSet::compute(&r).unwrap();
    for c in &cs.classes {
        for j in neighbors(&b, &r.lat, &c.lat, 2) {
            let (idx, a) = cs.identify(&j).unwrap();
            assert_eq!(left_mul(&b, &a, &cs.classes[idx].lat), j);
        }
    }
}
