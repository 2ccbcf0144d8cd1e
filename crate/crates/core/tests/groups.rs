use equichar_core::burnside::BurnsideRing;
use equichar_core::group::{conjugacy_classes, FiniteGroup};

/// Coefficient of x^n in P(x)^r, P the partition generating function.
fn multipartitions(n: usize, r: usize) -> usize {
    let mut p = vec![0usize; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for i in part..=n {
            p[i] += p[i - part];
        }
    }
    let mut acc = vec![0usize; n + 1];
    acc[0] = 1;
    for _ in 0..r {
        let mut next = vec![0usize; n + 1];
        for i in 0..=n {
            for j in 0..=n - i {
                next[i + j] += acc[i] * p[j];
            }
        }
        acc = next;
    }
    acc[n]
}

#[test]
fn wreath_class_counts_are_multipartition_counts() {
    for (inner, r) in [
        (FiniteGroup::cyclic(2).unwrap(), 2),
        (FiniteGroup::cyclic(3).unwrap(), 3),
        (FiniteGroup::symmetric(3).unwrap(), 3),
    ] {
        for n in 1..=3 {
            let w = FiniteGroup::wreath(&inner, n).unwrap();
            assert_eq!(conjugacy_classes(&w).len(), multipartitions(n, r), "{} wr S{n}", inner.label());
        }
    }
}

#[test]
fn class_counts_of_small_groups() {
    let cases = [
        (FiniteGroup::symmetric(4).unwrap(), 5),
        (FiniteGroup::dihedral(5).unwrap(), 4),
        (FiniteGroup::dihedral(4).unwrap(), 5),
        (FiniteGroup::cyclic(7).unwrap(), 7),
    ];
    for (g, want) in cases {
        let classes = conjugacy_classes(&g);
        assert_eq!(classes.len(), want, "{}", g.label());
        assert_eq!(classes.iter().map(|c| c.len()).sum::<usize>(), g.order());
    }
}

#[test]
fn subgroup_class_counts() {
    // S4 has 11 conjugacy classes of subgroups, D4 has 8, Z2 x Z2 has 5
    let z2 = FiniteGroup::cyclic(2).unwrap();
    for (g, want) in [
        (FiniteGroup::symmetric(4).unwrap(), 11),
        (FiniteGroup::dihedral(4).unwrap(), 8),
        (FiniteGroup::product(&[z2.clone(), z2]).unwrap(), 5),
    ] {
        let ring = BurnsideRing::new(&g).unwrap();
        assert_eq!(ring.rank(), want, "{}", g.label());
        // the marks table is triangular with |N(H)/H| on the diagonal
        let m = ring.table_of_marks();
        for i in 0..want {
            let index = g.order() / ring.class_rep(i).order();
            assert!(m[i][i] > 0);
            assert_eq!(index % m[i][i] as usize, 0);
        }
        assert_eq!(m[0][0] as usize, g.order());
    }
}
