use std::sync::Arc;

use proptest::prelude::*;

use equichar_core::burnside::BurnsideRing;
use equichar_core::euler::{chi, chi_k, chi_k_equivariant};
use equichar_core::group::FiniteGroup;
use equichar_core::gset::BiSet;
use equichar_core::powerstruct::{
    integer_power_oracle, lambda_factorize, power, reconstruct, Integers, TruncatedSeries,
};
use equichar_core::Int;

fn groups() -> Vec<Arc<FiniteGroup>> {
    let z2 = FiniteGroup::cyclic(2).unwrap();
    vec![
        FiniteGroup::trivial(),
        z2.clone(),
        FiniteGroup::cyclic(3).unwrap(),
        FiniteGroup::cyclic(4).unwrap(),
        FiniteGroup::product(&[z2.clone(), z2]).unwrap(),
        FiniteGroup::symmetric(3).unwrap(),
        FiniteGroup::dihedral(4).unwrap(),
    ]
}

/// A G-set (G acting on the B side) with `counts[i]` copies of the i-th
/// orbit type.
fn g_set(ring: &BurnsideRing, counts: &[usize]) -> BiSet {
    let g = ring.group();
    let mut x = BiSet::empty(&FiniteGroup::trivial(), g);
    for (i, &c) in counts.iter().enumerate().take(ring.rank()) {
        let orbit = BiSet::coset_space(g, ring.class_rep(i)).unwrap();
        for _ in 0..c {
            x = x.disjoint_union(&orbit).unwrap();
        }
    }
    x
}

fn counts() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..=2, 8)
}

fn int_series(n: usize) -> impl Strategy<Value = Vec<Int>> {
    prop::collection::vec(-3i128..=3, n).prop_map(|mut c| {
        c.insert(0, 1);
        c
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn class_of_is_a_semiring_map(gi in 0usize..7, a in counts(), b in counts()) {
        let g = &groups()[gi];
        let ring = BurnsideRing::new(g).unwrap();
        let x = g_set(&ring, &a);
        let y = g_set(&ring, &b);
        let cx = ring.class_of(&x).unwrap();
        let cy = ring.class_of(&y).unwrap();
        prop_assert_eq!(ring.class_of(&x.disjoint_union(&y).unwrap()).unwrap(), &cx + &cy);
        prop_assert_eq!(ring.class_of(&x.product(&y).unwrap()).unwrap(), &cx * &cy);
        prop_assert_eq!(cx.cardinality(), x.size() as Int);
        prop_assert_eq!(cx.marks(), ring.marks_of_set(&x).unwrap());
        prop_assert_eq!(ring.from_marks(&cx.marks()).unwrap(), cx);
    }

    #[test]
    fn marks_turn_products_into_pointwise_products(gi in 0usize..7, a in counts(), b in counts()) {
        let ring = BurnsideRing::new(&groups()[gi]).unwrap();
        let ca = ring.from_coeffs(a[..ring.rank()].iter().map(|&c| c as Int).collect()).unwrap();
        let cb = ring.from_coeffs(b[..ring.rank()].iter().map(|&c| c as Int - 1).collect()).unwrap();
        let prod: Vec<Int> = ca.marks().iter().zip(cb.marks()).map(|(x, y)| x * y).collect();
        prop_assert_eq!((&ca * &cb).marks(), prod);
    }

    #[test]
    fn euler_characteristics_are_additive(gi in 0usize..7, a in counts(), b in counts(), k in 0usize..3) {
        let g = &groups()[gi];
        let ring = BurnsideRing::new(g).unwrap();
        // move the action to the O side
        let x = g_set(&ring, &a).transpose().unwrap();
        let y = g_set(&ring, &b).transpose().unwrap();
        let xy = x.disjoint_union(&y).unwrap();
        prop_assert_eq!(chi(&equichar_core::cellspace::CellSpace::from_biset(&xy)), (x.size() + y.size()) as Int);
        prop_assert_eq!(chi_k(&xy, k).unwrap(), chi_k(&x, k).unwrap() + chi_k(&y, k).unwrap());
        // a free orbit contributes exactly one for every order
        let free = g_set(&ring, &[1]).transpose().unwrap();
        prop_assert_eq!(chi_k(&free, k).unwrap(), 1);
    }

    #[test]
    fn equivariant_chi_forgets_to_plain_chi(gi in 0usize..4, a in counts(), k in 0usize..3) {
        // G_O trivial: the order-k class is the class of X itself
        let g = &groups()[gi];
        let ring = BurnsideRing::new(g).unwrap();
        let x = g_set(&ring, &a);
        prop_assert_eq!(chi_k_equivariant(&ring, &x, k).unwrap(), ring.class_of(&x).unwrap());
    }

    #[test]
    fn integer_powers_match_the_oracle(a in int_series(6), m in -4i128..=4) {
        let z = Integers::new();
        let s = TruncatedSeries::new(&z, a, 6);
        prop_assert_eq!(power(&s, &m).unwrap(), integer_power_oracle(&s, m).unwrap());
    }

    #[test]
    fn integer_power_laws(a in int_series(5), b in int_series(5), m in -3i128..=3, n in -3i128..=3) {
        let z = Integers::new();
        let a = TruncatedSeries::new(&z, a, 5);
        let b = TruncatedSeries::new(&z, b, 5);
        let p = |s: &TruncatedSeries<Integers>, e: Int| power(s, &e).unwrap();
        prop_assert_eq!(p(&a, 0), TruncatedSeries::one(&z, 5));
        prop_assert_eq!(p(&a, 1), a.clone());
        prop_assert_eq!(p(&a.mul(&b), m), p(&a, m).mul(&p(&b, m)));
        prop_assert_eq!(p(&a, m + n), p(&a, m).mul(&p(&a, n)));
        prop_assert_eq!(p(&p(&a, m), n), p(&a, m * n));
        prop_assert_eq!(reconstruct(&z, &lambda_factorize(&a).unwrap(), 5).unwrap(), a);
    }

    #[test]
    fn burnside_exponents_add(gi in 1usize..7, a in counts(), b in counts(), s in prop::collection::vec(-1i128..=1, 4)) {
        let ring = BurnsideRing::new(&groups()[gi]).unwrap();
        let x = ring.class_of(&g_set(&ring, &a[..3])).unwrap();
        let y = ring.class_of(&g_set(&ring, &b[..3])).unwrap();
        let mut c = vec![ring.one()];
        c.extend(s.iter().enumerate().map(|(i, &v)| ring.basis(i % ring.rank()).scale(v)));
        let series = TruncatedSeries::new(&ring, c, 4);
        let lhs = power(&series, &(&x + &y)).unwrap();
        let rhs = power(&series, &x).unwrap().mul(&power(&series, &y).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn lambda_of_a_set_counts_symmetric_powers() {
    // (1 - t)^(-[X]) has the classes of Sym^n X as coefficients
    let z3 = FiniteGroup::cyclic(3).unwrap();
    let ring = BurnsideRing::new(&z3).unwrap();
    let x = ring.basis(0);
    let s = power(&TruncatedSeries::new(&ring, vec![ring.one(), ring.from_int(-1)], 3), &x.scale(-1)).unwrap();
    // Sym^2 of a free 3-orbit: 6 points, all free; Sym^3: 10 points, one fixed
    assert_eq!(s.coeff(1), &x);
    assert_eq!(s.coeff(2).cardinality(), 6);
    assert_eq!(s.coeff(3).cardinality(), 10);
    assert_eq!(s.coeff(3).marks()[ring.rank() - 1], 1);
}
