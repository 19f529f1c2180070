use g2forge::cech::{FiniteComplex, FormalSum, GerbeClass};

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn t7_cohomology_is_exterior() {
    let x = FiniteComplex::cubical_torus(7, 2).unwrap();
    assert_eq!(x.count(3).unwrap(), 4480);
    for k in 0..=7 {
        let h = x.cohomology(k).unwrap();
        assert_eq!(h.rank, binomial(7, k), "k = {k}");
        assert!(h.torsion.is_empty(), "k = {k}");
    }
}

#[test]
fn t7_poincare_dual_of_4567() {
    let x = FiniteComplex::cubical_torus(7, 2).unwrap();
    let g = GerbeClass::pd_cocycle(&x, &[4, 5, 6, 7], &[0.5, 0.5, 0.5]).unwrap();
    let dirs = x.torus.as_ref().unwrap().directions(3);
    assert_eq!(dirs.len(), 35);
    for (d, v) in dirs.iter().zip(g.c1()) {
        assert_eq!(*v, i64::from(d == &vec![0, 1, 2]), "{d:?}");
    }
    assert!(g.tensor(&g.inverse()).unwrap().is_trivial(&x).unwrap());
    let moved = GerbeClass::pd_cocycle(&x, &[4, 5, 6, 7], &[1.5, 0.25, 1.75]).unwrap();
    assert!(g.same_class(&moved, &x).unwrap());
    assert!(!g.is_trivial(&x).unwrap());
}

#[test]
fn t7_formal_sums_are_additive() {
    let x = FiniteComplex::cubical_torus(7, 2).unwrap();
    let terms = vec![
        (2, vec![4, 5, 6, 7], vec![0.5, 0.5, 0.5]),
        (-3, vec![2, 3, 6, 7], vec![0.5, 1.5, 0.5]),
        (1, vec![1, 3, 5, 7], vec![1.5, 1.5, 0.5]),
    ];
    let direct = GerbeClass::pd_formal_sum(&x, &FormalSum { terms: terms.clone() }).unwrap();
    let mut acc = GerbeClass::trivial(&x, 3).unwrap();
    for (q, axes, off) in &terms {
        acc = acc.tensor(&GerbeClass::pd_cocycle(&x, axes, off).unwrap().power(*q)).unwrap();
    }
    assert_eq!(direct.c1(), acc.c1());
    assert!(direct.same_class(&acc, &x).unwrap());
}
