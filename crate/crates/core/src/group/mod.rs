//! Finite groups given by explicit multiplication, with conjugacy, centralizer,
//! subgroup and commuting-tuple machinery.
//!
//! Every group numbers its elements `0..order`, with the identity at index 0.
//! Permutation groups order their elements lexicographically by image list;
//! wreath products `G ≀ S_n` use the mixed-radix index
//! `top * |G|^n + Σ a_i |G|^i`, where `top` is the lexicographic rank of the
//! permutation. Products are written `a·b` meaning "apply `b` first", so every
//! action in this crate is a left action.

mod classes;
mod descriptor;
mod subgroup;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{check_budget, Error, Result};

pub use classes::{
    commuting_tuple_classes, commuting_tuple_classes_in, commuting_tuple_classes_naive, conjugacy_classes, orbits,
    subgroups_up_to_conjugacy, CommutingTuple, SubgroupClass, SubgroupLattice,
};
pub use descriptor::{make_group, GroupDescriptor};
pub use subgroup::Subgroup;

/// Index of a group element.
pub type Elem = usize;

/// Groups up to this order get a flat Cayley table.
pub const TABLE_LIMIT: usize = 4096;

/// Hard cap on the order of any group we materialize.
pub const ORDER_LIMIT: usize = 1_000_000;

/// A finite group with elements `0..order`.
pub struct FiniteGroup {
    label: String,
    order: usize,
    generators: Vec<Elem>,
    inverse: Vec<u32>,
    table: Option<Vec<u16>>,
    repr: Repr,
}

enum Repr {
    Perm {
        degree: usize,
        /// `order * degree` images, row per element.
        perms: Vec<u16>,
        lookup: HashMap<Vec<u16>, u32>,
    },
    Wreath(WreathData),
}

struct WreathData {
    inner: Arc<FiniteGroup>,
    n: usize,
    top: Arc<FiniteGroup>,
    /// `pw[i] = |inner|^i`
    pw: Vec<usize>,
    base_order: usize,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("label", &self.label)
            .field("order", &self.order)
            .field("generators", &self.generators)
            .finish()
    }
}

impl FiniteGroup {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn inverse(&self, g: Elem) -> Elem {
        self.inverse[g] as Elem
    }

    pub fn has_table(&self) -> bool {
        self.table.is_some()
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if let Some(t) = &self.table {
            return t[a * self.order + b] as Elem;
        }
        match &self.repr {
            Repr::Perm {
                degree,
                perms,
                lookup,
            } => {
                let pa = &perms[a * degree..(a + 1) * degree];
                let pb = &perms[b * degree..(b + 1) * degree];
                let prod: Vec<u16> = pb.iter().map(|&i| pa[i as usize]).collect();
                lookup[&prod] as Elem
            }
            Repr::Wreath(w) => w.mul(a, b),
        }
    }

    /// `g·h·g⁻¹`
    #[inline]
    pub fn conjugate(&self, g: Elem, h: Elem) -> Elem {
        self.mul(self.mul(g, h), self.inverse(g))
    }

    #[inline]
    pub fn commute(&self, a: Elem, b: Elem) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// Degree of the faithful permutation representation used by
    /// [`permutation_of`](Self::permutation_of).
    pub fn degree(&self) -> usize {
        match &self.repr {
            Repr::Perm { degree, .. } => *degree,
            Repr::Wreath(w) => w.n * w.inner.degree(),
        }
    }

    /// A faithful permutation image of `g`. Wreath products act imprimitively
    /// on `n` blocks of the inner group's points.
    pub fn permutation_of(&self, g: Elem) -> Vec<usize> {
        match &self.repr {
            Repr::Perm { degree, perms, .. } => perms[g * degree..(g + 1) * degree]
                .iter()
                .map(|&x| x as usize)
                .collect(),
            Repr::Wreath(w) => {
                let d = w.inner.degree();
                let (parts, top) = w.split(g);
                let sigma = w.top.permutation_of(top);
                let inner_perms: Vec<Vec<usize>> =
                    parts.iter().map(|&a| w.inner.permutation_of(a)).collect();
                let mut out = vec![0; w.n * d];
                for i in 0..w.n {
                    let j = sigma[i];
                    for p in 0..d {
                        out[i * d + p] = j * d + inner_perms[j][p];
                    }
                }
                out
            }
        }
    }

    /// For a wreath product `G ≀ S_n`: `(inner group, n)`.
    pub fn wreath_factors(&self) -> Option<(&Arc<FiniteGroup>, usize)> {
        match &self.repr {
            Repr::Wreath(w) => Some((&w.inner, w.n)),
            Repr::Perm { .. } => None,
        }
    }

    /// For a wreath product, splits `g` into its base coordinates `a_1..a_n`
    /// and the top permutation, given as images `σ(0..n)`.
    pub fn wreath_split(&self, g: Elem) -> Option<(Vec<Elem>, Vec<usize>)> {
        match &self.repr {
            Repr::Wreath(w) => {
                let (parts, top) = w.split(g);
                Some((parts, w.top.permutation_of(top)))
            }
            Repr::Perm { .. } => None,
        }
    }

    /// For a wreath element `g = (a, σ)`, calls `f(i, a_i, σ⁻¹(i))` for every
    /// coordinate `i`, so that `g·x` has `a_i·x_{σ⁻¹(i)}` in coordinate `i`.
    /// Returns false when the group is not a wreath product.
    pub(crate) fn wreath_coords(&self, g: Elem, mut f: impl FnMut(usize, Elem, usize)) -> bool {
        match &self.repr {
            Repr::Wreath(w) => {
                let (t, base) = (g / w.base_order, g % w.base_order);
                let sinv = w.top.perm_row(w.top.inverse(t));
                for (i, &src) in sinv.iter().enumerate() {
                    f(i, w.digit(base, i), src as usize);
                }
                true
            }
            Repr::Perm { .. } => false,
        }
    }

    /// Human-readable form of an element.
    pub fn element_label(&self, g: Elem) -> String {
        match &self.repr {
            Repr::Perm { .. } => cycle_notation(&self.permutation_of(g)),
            Repr::Wreath(w) => {
                let (parts, top) = w.split(g);
                let inner: Vec<String> = parts.iter().map(|&a| w.inner.element_label(a)).collect();
                format!("[{}; {}]", inner.join(", "), w.top.element_label(top))
            }
        }
    }

    /// True when both handles denote the same group with the same element
    /// numbering.
    pub fn same_as(&self, other: &FiniteGroup) -> bool {
        if std::ptr::eq(self, other) {
            return true;
        }
        if self.order != other.order || self.degree() != other.degree() {
            return false;
        }
        (0..self.order).all(|g| self.permutation_of(g) == other.permutation_of(g))
    }

    /// Exhaustive associativity check (used for small groups and tests).
    pub fn check_associative_exhaustive(&self) -> bool {
        let n = self.order;
        (0..n).all(|a| {
            (0..n).all(|b| {
                let ab = self.mul(a, b);
                (0..n).all(|c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
            })
        })
    }

    /// Checks the group axioms: associativity (exhaustive up to order 256,
    /// `samples` random triples above), two-sided identity, inverses, and that
    /// the generators generate everything.
    pub fn validate(&self, samples: usize, seed: u64) -> Result<()> {
        use rand::{Rng, SeedableRng};
        let n = self.order;
        if n <= 256 {
            if !self.check_associative_exhaustive() {
                return Err(Error::invariant(format!("{}: not associative", self.label)));
            }
        } else {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                    return Err(Error::invariant(format!(
                        "{}: associativity fails on ({a}, {b}, {c})",
                        self.label
                    )));
                }
            }
        }
        for g in 0..n {
            if self.mul(0, g) != g || self.mul(g, 0) != g {
                return Err(Error::invariant(format!("{}: 0 is not an identity", self.label)));
            }
            if self.mul(self.inverse(g), g) != 0 {
                return Err(Error::invariant(format!("{}: bad inverse of {g}", self.label)));
            }
        }
        let reached = Subgroup::closure_elements(self, &self.generators);
        if reached.len() != n {
            return Err(Error::invariant(format!(
                "{}: generators reach {} of {} elements",
                self.label,
                reached.len(),
                n
            )));
        }
        Ok(())
    }

    // ---- constructors ----------------------------------------------------

    /// Builds the group generated by the given permutations of `0..degree`.
    pub fn from_permutations(
        label: impl Into<String>,
        degree: usize,
        generators: &[Vec<usize>],
    ) -> Result<Arc<Self>> {
        check_budget("permutation degree", degree as u128, u16::MAX as u128)?;
        if degree == 0 {
            return Err(Error::usage("permutation degree must be positive"));
        }
        let mut gens16 = Vec::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            if g.len() != degree {
                return Err(Error::usage(format!(
                    "generator {i} has length {}, expected degree {degree}",
                    g.len()
                )));
            }
            let mut seen = vec![false; degree];
            for &x in g {
                if x >= degree || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::usage(format!("generator {i} is not a permutation")));
                }
            }
            gens16.push(g.iter().map(|&x| x as u16).collect::<Vec<u16>>());
        }
        let id: Vec<u16> = (0..degree as u16).collect();
        let mut seen: HashSet<Vec<u16>> = HashSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for s in &gens16 {
                let q: Vec<u16> = s.iter().map(|&i| p[i as usize]).collect();
                if !seen.contains(&q) {
                    check_budget("group order", seen.len() as u128 + 1, ORDER_LIMIT as u128)?;
                    seen.insert(q.clone());
                    queue.push_back(q);
                }
            }
        }
        let mut all: Vec<Vec<u16>> = seen.into_iter().collect();
        all.sort_unstable();
        Ok(Arc::new(Self::from_sorted_perms(label.into(), degree, all, &gens16)))
    }

    fn from_sorted_perms(
        label: String,
        degree: usize,
        all: Vec<Vec<u16>>,
        gens: &[Vec<u16>],
    ) -> Self {
        let order = all.len();
        let lookup: HashMap<Vec<u16>, u32> = all
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let mut inverse = vec![0u32; order];
        for (i, p) in all.iter().enumerate() {
            let mut inv = vec![0u16; degree];
            for (x, &y) in p.iter().enumerate() {
                inv[y as usize] = x as u16;
            }
            inverse[i] = lookup[&inv];
        }
        let generators = gens.iter().map(|g| lookup[g] as Elem).collect();
        let perms: Vec<u16> = all.into_iter().flatten().collect();
        let table = (order <= TABLE_LIMIT).then(|| {
            let mut t = vec![0u16; order * order];
            let mut buf = vec![0u16; degree];
            for a in 0..order {
                let pa = &perms[a * degree..(a + 1) * degree];
                for b in 0..order {
                    let pb = &perms[b * degree..(b + 1) * degree];
                    for (slot, &i) in buf.iter_mut().zip(pb) {
                        *slot = pa[i as usize];
                    }
                    t[a * order + b] = lookup[&buf] as u16;
                }
            }
            t
        });
        FiniteGroup {
            label,
            order,
            generators,
            inverse,
            table,
            repr: Repr::Perm {
                degree,
                perms,
                lookup,
            },
        }
    }

    pub fn trivial() -> Arc<Self> {
        Arc::new(Self::from_sorted_perms(
            "1".into(),
            1,
            vec![vec![0]],
            &[],
        ))
    }

    /// Cyclic group generated by the rotation `i ↦ i+1 mod n`; element `i` is
    /// rotation by `i`.
    pub fn cyclic(n: usize) -> Result<Arc<Self>> {
        if n == 0 {
            return Err(Error::usage("cyclic(n) needs n >= 1"));
        }
        check_budget("group order", n as u128, ORDER_LIMIT as u128)?;
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let mut g = Self::from_permutations(format!("C{n}"), n, &[rot])?;
        Arc::get_mut(&mut g).expect("fresh").label = format!("C{n}");
        Ok(g)
    }

    /// Symmetric group on `0..n`, generated by `(0 1)` and `(0 1 … n-1)`.
    pub fn symmetric(n: usize) -> Result<Arc<Self>> {
        if n == 0 {
            return Err(Error::usage("symmetric(n) needs n >= 1"));
        }
        let order = (1..=n as u128).product::<u128>();
        check_budget("group order", order, ORDER_LIMIT as u128)?;
        let mut all = Vec::with_capacity(order as usize);
        let mut p: Vec<u16> = (0..n as u16).collect();
        loop {
            all.push(p.clone());
            if !next_permutation(&mut p) {
                break;
            }
        }
        let gens: Vec<Vec<u16>> = if n >= 2 {
            let mut t: Vec<u16> = (0..n as u16).collect();
            t.swap(0, 1);
            let c: Vec<u16> = (0..n as u16).map(|i| (i + 1) % n as u16).collect();
            vec![t, c]
        } else {
            vec![]
        };
        Ok(Arc::new(Self::from_sorted_perms(format!("S{n}"), n, all, &gens)))
    }

    /// Dihedral group of order `2n`, generated by a rotation and a reflection.
    pub fn dihedral(n: usize) -> Result<Arc<Self>> {
        let (degree, r, s): (usize, Vec<usize>, Vec<usize>) = match n {
            0 => return Err(Error::usage("dihedral(n) needs n >= 1")),
            1 => (2, vec![0, 1], vec![1, 0]),
            2 => (4, vec![1, 0, 3, 2], vec![2, 3, 0, 1]),
            _ => (
                n,
                (0..n).map(|i| (i + 1) % n).collect(),
                (0..n).map(|i| (n - i) % n).collect(),
            ),
        };
        let mut g = Self::from_permutations(format!("D{n}"), degree, &[r, s])?;
        Arc::get_mut(&mut g).expect("fresh").label = format!("D{n}");
        Ok(g)
    }

    /// Direct product, realized on the disjoint union of the factors'
    /// permutation domains.
    pub fn product(factors: &[Arc<FiniteGroup>]) -> Result<Arc<Self>> {
        if factors.is_empty() {
            return Ok(Self::trivial());
        }
        let order = factors.iter().map(|f| f.order as u128).product::<u128>();
        check_budget("group order", order, ORDER_LIMIT as u128)?;
        let degree: usize = factors.iter().map(|f| f.degree()).sum();
        let mut gens = Vec::new();
        let mut offset = 0;
        for f in factors {
            for &g in f.generators() {
                let mut p: Vec<usize> = (0..degree).collect();
                for (x, y) in f.permutation_of(g).into_iter().enumerate() {
                    p[offset + x] = offset + y;
                }
                gens.push(p);
            }
            offset += f.degree();
        }
        let label = factors
            .iter()
            .map(|f| f.label.clone())
            .collect::<Vec<_>>()
            .join("x");
        let mut g = Self::from_permutations(label.clone(), degree, &gens)?;
        Arc::get_mut(&mut g).expect("fresh").label = label;
        Ok(g)
    }

    /// The wreath product `inner ≀ S_n = inner^n ⋊ S_n` with multiplication
    /// `(a,σ)(b,τ) = (a·(b∘σ⁻¹), στ)`.
    pub fn wreath(inner: &Arc<FiniteGroup>, n: usize) -> Result<Arc<Self>> {
        if n == 0 {
            return Err(Error::usage("wreath(G, n) needs n >= 1"));
        }
        let m = inner.order;
        let top_order = (1..=n as u128).product::<u128>();
        let order = (m as u128)
            .checked_pow(n as u32)
            .and_then(|b| b.checked_mul(top_order))
            .unwrap_or(u128::MAX);
        check_budget("wreath product order", order, ORDER_LIMIT as u128)?;
        let top = Self::symmetric(n)?;
        let pw: Vec<usize> = (0..=n).map(|i| m.pow(i as u32)).collect();
        let base_order = pw[n];
        let data = WreathData {
            inner: inner.clone(),
            n,
            top,
            pw,
            base_order,
        };
        let order = order as usize;
        let inverse: Vec<u32> = (0..order).map(|g| data.inverse(g) as u32).collect();
        let mut generators: Vec<Elem> = inner.generators().to_vec();
        generators.extend(data.top.generators().iter().map(|&t| t * base_order));
        let table = (order <= TABLE_LIMIT).then(|| {
            let mut t = vec![0u16; order * order];
            for a in 0..order {
                for b in 0..order {
                    t[a * order + b] = data.mul(a, b) as u16;
                }
            }
            t
        });
        Ok(Arc::new(FiniteGroup {
            label: format!("{}wrS{n}", inner.label),
            order,
            generators,
            inverse,
            table,
            repr: Repr::Wreath(data),
        }))
    }
}

impl WreathData {
    #[inline]
    fn digit(&self, base: usize, i: usize) -> usize {
        (base / self.pw[i]) % self.pw[1]
    }

    fn split(&self, g: Elem) -> (Vec<Elem>, Elem) {
        let base = g % self.base_order;
        ((0..self.n).map(|i| self.digit(base, i)).collect(), g / self.base_order)
    }

    #[inline]
    fn mul(&self, x: Elem, y: Elem) -> Elem {
        let (xt, xb) = (x / self.base_order, x % self.base_order);
        let (yt, yb) = (y / self.base_order, y % self.base_order);
        let sigma = self.top.perm_row(xt);
        // σ⁻¹(i) is the j with σ(j) = i
        let mut base = 0;
        for j in 0..self.n {
            let i = sigma[j] as usize;
            let c = self.inner.mul(self.digit(xb, i), self.digit(yb, j));
            base += c * self.pw[i];
        }
        self.top.mul(xt, yt) * self.base_order + base
    }

    fn inverse(&self, x: Elem) -> Elem {
        let (xt, xb) = (x / self.base_order, x % self.base_order);
        let sigma = self.top.perm_row(xt);
        let mut base = 0;
        for i in 0..self.n {
            let a = self.digit(xb, sigma[i] as usize);
            base += self.inner.inverse(a) * self.pw[i];
        }
        self.top.inverse(xt) * self.base_order + base
    }
}

impl FiniteGroup {
    /// Raw permutation row; only valid for permutation-represented groups.
    fn perm_row(&self, g: Elem) -> &[u16] {
        match &self.repr {
            Repr::Perm { degree, perms, .. } => &perms[g * degree..(g + 1) * degree],
            Repr::Wreath(_) => unreachable!("perm_row on a wreath product"),
        }
    }
}

fn next_permutation(p: &mut [u16]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut x = p[start];
        while x != start {
            seen[x] = true;
            cycle.push(x);
            x = p[x];
        }
        let parts: Vec<String> = cycle.iter().map(|c| c.to_string()).collect();
        out.push('(');
        out.push_str(&parts.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_orders() {
        assert_eq!(FiniteGroup::cyclic(2).unwrap().order(), 2);
        assert_eq!(FiniteGroup::symmetric(3).unwrap().order(), 6);
        assert_eq!(FiniteGroup::dihedral(4).unwrap().order(), 8);
        assert_eq!(FiniteGroup::dihedral(2).unwrap().order(), 4);
        assert_eq!(FiniteGroup::dihedral(1).unwrap().order(), 2);
        assert_eq!(FiniteGroup::trivial().order(), 1);
    }

    #[test]
    fn wreath_orders() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let w = FiniteGroup::wreath(&c2, 2).unwrap();
        assert_eq!(w.order(), 8);
        w.validate(0, 0).unwrap();
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let big = FiniteGroup::wreath(&s3, 4).unwrap();
        assert_eq!(big.order(), 31104);
        assert!(!big.has_table());
        big.validate(100_000, 7).unwrap();
    }

    #[test]
    fn wreath_is_faithful_on_blocks() {
        let c3 = FiniteGroup::cyclic(3).unwrap();
        let w = FiniteGroup::wreath(&c3, 3).unwrap();
        // permutation_of is a homomorphism
        for a in (0..w.order()).step_by(7) {
            for b in (0..w.order()).step_by(11) {
                let pa = w.permutation_of(a);
                let pb = w.permutation_of(b);
                let pab: Vec<usize> = pb.iter().map(|&i| pa[i]).collect();
                assert_eq!(pab, w.permutation_of(w.mul(a, b)));
            }
        }
    }

    #[test]
    fn cyclic_elements_are_rotations() {
        let c5 = FiniteGroup::cyclic(5).unwrap();
        for i in 0..5 {
            assert_eq!(c5.permutation_of(i)[0], i);
        }
        assert_eq!(c5.generators(), &[1]);
    }

    #[test]
    fn bad_permutations_rejected() {
        assert!(FiniteGroup::from_permutations("x", 3, &[vec![0, 1]]).is_err());
        assert!(FiniteGroup::from_permutations("x", 3, &[vec![0, 0, 1]]).is_err());
        assert!(FiniteGroup::cyclic(0).is_err());
    }

    #[test]
    fn labels() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.element_label(0), "()");
        let t = s3.generators()[0];
        assert_eq!(s3.element_label(t), "(0 1)");
    }
}
