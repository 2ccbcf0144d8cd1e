//! The Burnside ring `A(G)`: the basis `[G/H]`, the table of marks, ring
//! arithmetic through marks, and classes of finite G-sets.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, Weak};

use serde_json::{json, Value};

use crate::cellspace::{sign, AsCells};
use crate::error::{Error, Result};
use crate::group::{subgroups_up_to_conjugacy, Elem, FiniteGroup, Subgroup, SubgroupLattice};
use crate::gset::BiSet;
use crate::Int;

/// `A(G)` for one group, holding its subgroup classes and table of marks.
pub struct BurnsideRing {
    me: Weak<BurnsideRing>,
    group: Arc<FiniteGroup>,
    lattice: SubgroupLattice,
    /// `marks[k][h] = |(G/K)^H|`
    marks: Vec<Vec<Int>>,
    zeta_cache: Mutex<HashMap<usize, Vec<Vec<Int>>>>,
}

impl fmt::Debug for BurnsideRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BurnsideRing")
            .field("group", &self.group.label())
            .field("rank", &self.rank())
            .finish()
    }
}

impl BurnsideRing {
    pub fn new(group: &Arc<FiniteGroup>) -> Result<Arc<Self>> {
        let lattice = subgroups_up_to_conjugacy(group)?;
        Ok(Self::from_lattice(lattice))
    }

    pub fn from_lattice(lattice: SubgroupLattice) -> Arc<Self> {
        let marks = compute_marks(&lattice);
        Self::assemble(lattice, marks)
    }

    /// Rebuilds a ring from stored class representatives and marks, checking
    /// the marks against a fresh computation.
    pub fn from_parts(group: &Arc<FiniteGroup>, reps: Vec<Vec<Elem>>, marks: Vec<Vec<Int>>) -> Result<Arc<Self>> {
        let lattice = SubgroupLattice::from_reps(group, reps)?;
        let fresh = compute_marks(&lattice);
        if fresh != marks {
            return Err(Error::invariant("stored table of marks does not match"));
        }
        Ok(Self::assemble(lattice, marks))
    }

    fn assemble(lattice: SubgroupLattice, marks: Vec<Vec<Int>>) -> Arc<Self> {
        let group = lattice.group().clone();
        Arc::new_cyclic(|me| BurnsideRing {
            me: me.clone(),
            group,
            lattice,
            marks,
            zeta_cache: Mutex::new(HashMap::new()),
        })
    }

    fn arc(&self) -> Arc<Self> {
        self.me.upgrade().expect("ring is alive")
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        &self.lattice
    }

    /// Number of basis elements (conjugacy classes of subgroups).
    pub fn rank(&self) -> usize {
        self.lattice.len()
    }

    pub fn table_of_marks(&self) -> &[Vec<Int>] {
        &self.marks
    }

    pub fn class_rep(&self, i: usize) -> &Subgroup {
        &self.lattice.classes()[i].rep
    }

    /// `e` for the trivial subgroup, `G` for the whole group, `H<i>` otherwise.
    pub fn basis_label(&self, i: usize) -> String {
        if i == 0 {
            "e".into()
        } else if i + 1 == self.rank() {
            "G".into()
        } else {
            format!("H{i}")
        }
    }

    /// The basis as JSON: label, order and generators of each representative.
    pub fn basis_json(&self) -> Value {
        Value::Array(
            (0..self.rank())
                .map(|i| {
                    let h = self.class_rep(i);
                    json!({
                        "label": self.basis_label(i),
                        "order": h.order(),
                        "conjugates": self.lattice.classes()[i].size,
                        "generators": h.generators().iter().map(|&g| self.group.element_label(g)).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        )
    }

    pub fn zero(&self) -> BurnsideElement {
        BurnsideElement {
            ring: self.arc(),
            coeffs: vec![0; self.rank()],
        }
    }

    /// `[G/G]`, the class of a point.
    pub fn one(&self) -> BurnsideElement {
        self.basis(self.rank() - 1)
    }

    /// `[G/H_i]`
    pub fn basis(&self, i: usize) -> BurnsideElement {
        let mut coeffs = vec![0; self.rank()];
        coeffs[i] = 1;
        BurnsideElement {
            ring: self.arc(),
            coeffs,
        }
    }

    pub fn from_int(&self, n: Int) -> BurnsideElement {
        let mut x = self.zero();
        *x.coeffs.last_mut().expect("rank >= 1") = n;
        x
    }

    pub fn from_coeffs(&self, coeffs: Vec<Int>) -> Result<BurnsideElement> {
        if coeffs.len() != self.rank() {
            return Err(Error::usage(format!(
                "expected {} coefficients, got {}",
                self.rank(),
                coeffs.len()
            )));
        }
        Ok(BurnsideElement {
            ring: self.arc(),
            coeffs,
        })
    }

    /// Marks of `Σ c_K [G/K]`.
    pub fn marks_of(&self, coeffs: &[Int]) -> Vec<Int> {
        let r = self.rank();
        (0..r)
            .map(|h| (h..r).map(|k| coeffs[k] * self.marks[k][h]).sum())
            .collect()
    }

    /// Inverts the mark map by back-substitution from the largest class.
    pub fn coeffs_from_marks(&self, marks: &[Int]) -> Result<Vec<Int>> {
        let r = self.rank();
        let mut c = vec![0; r];
        for h in (0..r).rev() {
            let rest: Int = (h + 1..r).map(|k| c[k] * self.marks[k][h]).sum();
            let num = marks[h] - rest;
            let d = self.marks[h][h];
            if num % d != 0 {
                return Err(Error::invariant(format!(
                    "mark vector {marks:?} is not in the image of A({})",
                    self.group.label()
                )));
            }
            c[h] = num / d;
        }
        Ok(c)
    }

    pub fn from_marks(&self, marks: &[Int]) -> Result<BurnsideElement> {
        let coeffs = self.coeffs_from_marks(marks)?;
        Ok(BurnsideElement {
            ring: self.arc(),
            coeffs,
        })
    }

    fn check_group(&self, x: &BiSet) -> Result<()> {
        if Arc::ptr_eq(x.g_b(), &self.group) || x.g_b().same_as(&self.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch(format!(
                "set is acted on by {}, ring is A({})",
                x.g_b().label(),
                self.group.label()
            )))
        }
    }

    /// Mark vector `(|X^H|)_H` of `x` as a `G_B`-set.
    pub fn marks_of_set(&self, x: &BiSet) -> Result<Vec<Int>> {
        self.check_group(x)?;
        Ok(self
            .lattice
            .classes()
            .iter()
            .map(|c| x.count_b_fixed(c.rep.generators()) as Int)
            .collect())
    }

    /// The class of `x` as a `G_B`-set (the O-side is ignored).
    pub fn class_of(&self, x: &BiSet) -> Result<BurnsideElement> {
        let m = self.marks_of_set(x)?;
        self.from_marks(&m)
    }

    /// Equivariant Euler characteristic through isotropy strata: every
    /// `G_B`-orbit contributes `±[G/G_x]` for the stabilizer of any of its
    /// points, with the sign of its cell.
    pub fn chi_equivariant(&self, x: &impl AsCells) -> Result<BurnsideElement> {
        let cells = x.as_cells();
        let mut coeffs = vec![0; self.rank()];
        for (d, f) in cells.cells() {
            self.check_group(f)?;
            let (labels, count) = f.b_orbit_labels();
            let mut rep = vec![usize::MAX; count];
            for (p, &l) in labels.iter().enumerate().rev() {
                rep[l] = p;
            }
            for p in rep {
                let stab = f.b_stabilizer(p);
                let i = self
                    .lattice
                    .class_index(&stab)
                    .ok_or_else(|| Error::invariant("stabilizer missing from subgroup lattice"))?;
                coeffs[i] += sign(*d);
            }
        }
        self.from_coeffs(coeffs)
    }

    /// Coefficients of `ζ_{[G/H_i]}(t) = Σ [S^k(G/H_i)] t^k` up to degree `n`.
    pub fn zeta_basis(&self, i: usize, n: usize) -> Result<Vec<BurnsideElement>> {
        {
            let cache = self.zeta_cache.lock().expect("cache lock");
            if let Some(v) = cache.get(&i) {
                if v.len() > n {
                    return v[..=n]
                        .iter()
                        .map(|c| self.from_coeffs(c.clone()))
                        .collect();
                }
            }
        }
        let x = BiSet::coset_space(&self.group, self.class_rep(i))?;
        let mut out = Vec::with_capacity(n + 1);
        for k in 0..=n {
            out.push(self.class_of(&x.symmetric_power(k)?)?.coeffs);
        }
        let result = out
            .iter()
            .map(|c| self.from_coeffs(c.clone()))
            .collect::<Result<Vec<_>>>()?;
        let mut cache = self.zeta_cache.lock().expect("cache lock");
        let entry = cache.entry(i).or_default();
        if entry.len() < out.len() {
            *entry = out;
        }
        Ok(result)
    }

    pub(crate) fn same_ring(&self, other: &BurnsideRing) -> bool {
        std::ptr::eq(self, other) || self.group.same_as(&other.group)
    }
}

/// `marks[k][h] = |{x : x⁻¹Hx ⊂ K}| / |K|`, counted through generators of `H`.
fn compute_marks(lattice: &SubgroupLattice) -> Vec<Vec<Int>> {
    let g = lattice.group();
    let classes = lattice.classes();
    let r = classes.len();
    let mut marks = vec![vec![0; r]; r];
    for (k, kc) in classes.iter().enumerate() {
        let kk = &kc.rep;
        for (h, hc) in classes.iter().enumerate().take(k + 1) {
            let hg = hc.rep.generators();
            if kk.order() % hc.rep.order() != 0 {
                continue;
            }
            let count = (0..g.order())
                .filter(|&x| {
                    let xi = g.inverse(x);
                    hg.iter().all(|&s| kk.contains(g.conjugate(xi, s)))
                })
                .count();
            marks[k][h] = (count / kk.order()) as Int;
        }
    }
    marks
}

/// An element `Σ c_H [G/H]` of a Burnside ring.
#[derive(Clone)]
pub struct BurnsideElement {
    ring: Arc<BurnsideRing>,
    coeffs: Vec<Int>,
}

impl PartialEq for BurnsideElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.ring.same_ring(&other.ring)
    }
}

impl Eq for BurnsideElement {}

impl fmt::Debug for BurnsideElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BurnsideElement {
    /// `2·[G/e] + [G/G]`, or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sep = match (first, c < 0) {
                (true, false) => "",
                (true, true) => "-",
                (false, false) => " + ",
                (false, true) => " - ",
            };
            let a = c.unsigned_abs();
            let label = self.ring.basis_label(i);
            if a == 1 {
                write!(f, "{sep}[G/{label}]")?;
            } else {
                write!(f, "{sep}{a}·[G/{label}]")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl BurnsideElement {
    pub fn ring(&self) -> &Arc<BurnsideRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn marks(&self) -> Vec<Int> {
        self.ring.marks_of(&self.coeffs)
    }

    /// `Σ c_H |G/H|`, the mark at the trivial subgroup.
    pub fn cardinality(&self) -> Int {
        self.marks()[0]
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring.same_ring(&other.ring) {
            Ok(())
        } else {
            Err(Error::GroupMismatch(format!(
                "A({}) vs A({})",
                self.ring.group.label(),
                other.ring.group.label()
            )))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    /// Product through marks followed by back-substitution.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let (a, b) = (self.marks(), other.marks());
        let m: Vec<Int> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        self.ring.from_marks(&m)
    }

    pub fn scale(&self, n: Int) -> Self {
        BurnsideElement {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| c * n).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(Int, Int) -> Int) -> Self {
        BurnsideElement {
            ring: self.ring.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!(self.coeffs)
    }
}

// Operator forms panic on a group mismatch; use the `try_` methods when the
// operands may come from different rings.
impl Add for &BurnsideElement {
    type Output = BurnsideElement;
    fn add(self, rhs: Self) -> BurnsideElement {
        self.try_add(rhs).expect("same Burnside ring")
    }
}

impl Sub for &BurnsideElement {
    type Output = BurnsideElement;
    fn sub(self, rhs: Self) -> BurnsideElement {
        self.try_sub(rhs).expect("same Burnside ring")
    }
}

impl Mul for &BurnsideElement {
    type Output = BurnsideElement;
    fn mul(self, rhs: Self) -> BurnsideElement {
        self.try_mul(rhs).expect("same Burnside ring")
    }
}

impl Neg for &BurnsideElement {
    type Output = BurnsideElement;
    fn neg(self) -> BurnsideElement {
        self.scale(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3_ring() -> Arc<BurnsideRing> {
        BurnsideRing::new(&FiniteGroup::symmetric(3).unwrap()).unwrap()
    }

    #[test]
    fn marks_of_small_groups() {
        let z2 = BurnsideRing::new(&FiniteGroup::cyclic(2).unwrap()).unwrap();
        assert_eq!(z2.table_of_marks(), &[vec![2, 0], vec![1, 1]]);
        let s3 = s3_ring();
        assert_eq!(
            s3.table_of_marks(),
            &[
                vec![6, 0, 0, 0],
                vec![3, 1, 0, 0],
                vec![2, 0, 2, 0],
                vec![1, 1, 1, 1]
            ]
        );
        let t = BurnsideRing::new(&FiniteGroup::trivial()).unwrap();
        assert_eq!(t.table_of_marks(), &[vec![1]]);
    }

    #[test]
    fn products() {
        let z2 = BurnsideRing::new(&FiniteGroup::cyclic(2).unwrap()).unwrap();
        let e = z2.basis(0);
        assert_eq!(&e * &e, e.scale(2));
        assert_eq!(&e * &z2.one(), e);
        let s3 = s3_ring();
        assert_eq!(&s3.basis(1) * &s3.basis(2), s3.basis(0));
    }

    #[test]
    fn classes_of_sets() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let ring = BurnsideRing::new(&g).unwrap();
        let t = FiniteGroup::trivial();
        let swap = BiSet::three_point(&g, &t).unwrap().transpose().unwrap();
        let c = ring.class_of(&swap).unwrap();
        assert_eq!(c, &ring.basis(0) + &ring.one());
        assert_eq!(ring.chi_equivariant(&swap).unwrap(), c);
        let reg = BiSet::regular_o(&g).transpose().unwrap();
        assert_eq!(ring.class_of(&reg).unwrap(), ring.basis(0));
        assert!(ring.class_of(&BiSet::empty(&t, &g)).unwrap().is_zero());
    }

    #[test]
    fn equivariant_chi_signs() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let ring = BurnsideRing::new(&g).unwrap();
        let t = FiniteGroup::trivial();
        let reg = BiSet::regular_o(&g).transpose().unwrap();
        let cell = crate::cellspace::CellSpace::cell(1, &reg);
        assert_eq!(ring.chi_equivariant(&cell).unwrap(), ring.basis(0).scale(-1));
        assert_eq!(ring.chi_equivariant(&BiSet::point(&t, &g)).unwrap(), ring.one());
    }

    #[test]
    fn cardinality() {
        let s3 = s3_ring();
        assert_eq!((&s3.basis(0) + &s3.one()).cardinality(), 7);
        let z2 = BurnsideRing::new(&FiniteGroup::cyclic(2).unwrap()).unwrap();
        assert_eq!(z2.basis(0).cardinality(), 2);
        assert_eq!(z2.one().cardinality(), 1);
    }

    #[test]
    fn rendering() {
        let z2 = BurnsideRing::new(&FiniteGroup::cyclic(2).unwrap()).unwrap();
        let x = &z2.basis(0).scale(2) + &z2.one();
        assert_eq!(x.to_string(), "2·[G/e] + [G/G]");
        assert_eq!(z2.zero().to_string(), "0");
        assert_eq!(z2.basis(0).scale(-1).to_string(), "-[G/e]");
    }

    #[test]
    fn zeta_of_regular_z2() {
        let z2 = BurnsideRing::new(&FiniteGroup::cyclic(2).unwrap()).unwrap();
        let z = z2.zeta_basis(0, 3).unwrap();
        let e = z2.basis(0);
        assert_eq!(z[0], z2.one());
        assert_eq!(z[1], e);
        assert_eq!(z[2], &e + &z2.one());
        assert_eq!(z[3], e.scale(2));
    }

    #[test]
    fn mismatched_rings() {
        let a = BurnsideRing::new(&FiniteGroup::cyclic(2).unwrap()).unwrap();
        let b = s3_ring();
        assert!(matches!(a.one().try_add(&b.one()), Err(Error::GroupMismatch(_))));
    }

    #[test]
    fn from_parts_validates() {
        let s3 = s3_ring();
        let reps: Vec<Vec<Elem>> = (0..s3.rank()).map(|i| s3.class_rep(i).elements().to_vec()).collect();
        let ok = BurnsideRing::from_parts(s3.group(), reps.clone(), s3.table_of_marks().to_vec());
        assert!(ok.is_ok());
        let mut bad = s3.table_of_marks().to_vec();
        bad[1][0] = 4;
        assert!(BurnsideRing::from_parts(s3.group(), reps, bad).is_err());
    }
}
