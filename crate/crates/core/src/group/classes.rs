use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use super::{Elem, FiniteGroup, Subgroup};
use crate::error::{check_budget, Error, Result};

/// Default cap on the group order for subgroup enumeration.
pub const SUBGROUP_ORDER_LIMIT: usize = 1024;

/// Cap on the number of commuting-tuple classes produced in one call.
pub const TUPLE_CLASS_LIMIT: usize = 2_000_000;

/// Cap on `|G|^k` for the brute-force tuple enumeration.
pub const NAIVE_TUPLE_LIMIT: u128 = 2_000_000;

/// Orbits of a group acting on `0..n` through `gens` generators, where
/// `act(i, x)` is the image of `x` under generator `i`. Labels are assigned
/// in order of first appearance, so orbit 0 contains point 0 and orbits are
/// sorted by their smallest point. Returns `(label per point, orbit count)`.
pub fn orbits(n: usize, gens: usize, mut act: impl FnMut(usize, usize) -> usize) -> (Vec<usize>, usize) {
    const NONE: usize = usize::MAX;
    let mut label = vec![NONE; n];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if label[start] != NONE {
            continue;
        }
        label[start] = count;
        queue.push_back(start);
        while let Some(x) = queue.pop_front() {
            for i in 0..gens {
                let y = act(i, x);
                if label[y] == NONE {
                    label[y] = count;
                    queue.push_back(y);
                }
            }
        }
        count += 1;
    }
    (label, count)
}

/// Conjugacy classes of `g`, each sorted, listed by smallest element.
pub fn conjugacy_classes(g: &Arc<FiniteGroup>) -> Vec<Vec<Elem>> {
    Subgroup::whole(g).conjugacy_classes()
}

/// A tuple of pairwise commuting elements.
#[derive(Clone, Debug)]
pub struct CommutingTuple {
    parent: Arc<FiniteGroup>,
    entries: Vec<Elem>,
}

impl CommutingTuple {
    pub fn new(parent: &Arc<FiniteGroup>, entries: Vec<Elem>) -> Result<Self> {
        for (i, &a) in entries.iter().enumerate() {
            if a >= parent.order() {
                return Err(Error::usage(format!("element {a} not in {}", parent.label())));
            }
            for &b in &entries[..i] {
                if !parent.commute(a, b) {
                    return Err(Error::usage(format!("elements {b} and {a} do not commute")));
                }
            }
        }
        Ok(CommutingTuple {
            parent: parent.clone(),
            entries,
        })
    }

    pub fn empty(parent: &Arc<FiniteGroup>) -> Self {
        CommutingTuple {
            parent: parent.clone(),
            entries: vec![],
        }
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn centralizer(&self) -> Subgroup {
        Subgroup::whole(&self.parent).centralizer(&self.entries)
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|&g| self.parent.element_label(g))
            .collect();
        format!("({})", parts.join(", "))
    }
}

/// Representatives of the conjugation orbits on commuting `k`-tuples, each
/// with its orbit size. Built by choosing a class representative `g` and
/// recursing into `C(g)`, so the cost follows the centralizer tree rather
/// than `|G|^k`.
pub fn commuting_tuple_classes(g: &Arc<FiniteGroup>, k: usize) -> Result<Vec<(CommutingTuple, usize)>> {
    Ok(commuting_tuple_classes_in(&Subgroup::whole(g), k)?
        .into_iter()
        .map(|(entries, cent)| {
            (
                CommutingTuple {
                    parent: g.clone(),
                    entries,
                },
                g.order() / cent,
            )
        })
        .collect())
}

/// Classes of commuting `k`-tuples of `h` under conjugation by `h`, each as
/// `(representative, order of its centralizer in h)`.
pub fn commuting_tuple_classes_in(h: &Subgroup, k: usize) -> Result<Vec<(Vec<Elem>, usize)>> {
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(k);
    tuple_rec(h, k, &mut prefix, &mut out)?;
    Ok(out)
}

fn tuple_rec(
    c: &Subgroup,
    k: usize,
    prefix: &mut Vec<Elem>,
    out: &mut Vec<(Vec<Elem>, usize)>,
) -> Result<()> {
    if k == 0 {
        check_budget("commuting tuple classes", out.len() as u128 + 1, TUPLE_CLASS_LIMIT as u128)?;
        out.push((prefix.clone(), c.order()));
        return Ok(());
    }
    for class in c.conjugacy_classes() {
        let rep = class[0];
        prefix.push(rep);
        tuple_rec(&c.centralizer(&[rep]), k - 1, prefix, out)?;
        prefix.pop();
    }
    Ok(())
}

/// Brute-force oracle: enumerates all of `G^k`, keeps the commuting tuples,
/// and splits them into conjugation orbits. Representatives are the
/// lexicographically smallest tuples of their orbits.
pub fn commuting_tuple_classes_naive(
    g: &Arc<FiniteGroup>,
    k: usize,
) -> Result<Vec<(CommutingTuple, usize)>> {
    let n = g.order();
    let total = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    check_budget("naive tuple enumeration", total, NAIVE_TUPLE_LIMIT)?;
    let mut tuples: Vec<Vec<Elem>> = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for t in &tuples {
            for x in 0..n {
                if t.iter().all(|&y| g.commute(x, y)) {
                    let mut t2 = t.clone();
                    t2.push(x);
                    next.push(t2);
                }
            }
        }
        tuples = next;
    }
    // generated in lexicographic order already
    let index: HashMap<&[Elem], usize> = tuples
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_slice(), i))
        .collect();
    let gens: Vec<Elem> = g.generators().to_vec();
    let (labels, count) = orbits(tuples.len(), gens.len(), |i, x| {
        let s = gens[i];
        let img: Vec<Elem> = tuples[x].iter().map(|&y| g.conjugate(s, y)).collect();
        index[img.as_slice()]
    });
    let mut reps: Vec<Option<usize>> = vec![None; count];
    let mut sizes = vec![0usize; count];
    for (x, &l) in labels.iter().enumerate() {
        reps[l].get_or_insert(x);
        sizes[l] += 1;
    }
    Ok(reps
        .into_iter()
        .zip(sizes)
        .map(|(r, s)| {
            (
                CommutingTuple {
                    parent: g.clone(),
                    entries: tuples[r.expect("nonempty orbit")].clone(),
                },
                s,
            )
        })
        .collect())
}

/// One conjugacy class of subgroups.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    /// The lexicographically smallest member of the class.
    pub rep: Subgroup,
    /// Number of conjugates.
    pub size: usize,
}

/// Subgroups of a group up to conjugacy, in canonical order
/// `(order, minimal conjugate)`, with a lookup from any subgroup to its class.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    group: Arc<FiniteGroup>,
    classes: Vec<SubgroupClass>,
    lookup: HashMap<Vec<Elem>, usize>,
}

impl SubgroupLattice {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn classes(&self) -> &[SubgroupClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Index of the class containing the subgroup with these sorted elements.
    pub fn class_index(&self, elements: &[Elem]) -> Option<usize> {
        self.lookup.get(elements).copied()
    }

    /// Rebuilds a lattice from trusted class representatives (for example
    /// from a cache), recomputing the conjugates.
    pub fn from_reps(group: &Arc<FiniteGroup>, reps: Vec<Vec<Elem>>) -> Result<Self> {
        let mut classes = Vec::with_capacity(reps.len());
        let mut lookup = HashMap::new();
        for (i, r) in reps.into_iter().enumerate() {
            let sub = Subgroup::from_elements(group, r)?;
            let conj = conjugates(group, sub.elements());
            for c in &conj {
                if lookup.insert(c.clone(), i).is_some() {
                    return Err(Error::invariant("subgroup classes overlap"));
                }
            }
            classes.push(SubgroupClass {
                rep: sub,
                size: conj.len(),
            });
        }
        Ok(SubgroupLattice {
            group: group.clone(),
            classes,
            lookup,
        })
    }
}

/// All conjugates of the subgroup with sorted elements `h`, each sorted.
fn conjugates(g: &FiniteGroup, h: &[Elem]) -> Vec<Vec<Elem>> {
    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    seen.insert(h.to_vec());
    let mut queue = VecDeque::from([h.to_vec()]);
    let mut out = vec![h.to_vec()];
    while let Some(x) = queue.pop_front() {
        for &s in g.generators() {
            let mut y: Vec<Elem> = x.iter().map(|&e| g.conjugate(s, e)).collect();
            y.sort_unstable();
            if seen.insert(y.clone()) {
                out.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    out
}

/// Conjugacy classes of subgroups of `g`, found by joining class
/// representatives with cyclic subgroups until nothing new appears. Every
/// subgroup is a join of cyclic ones, and conjugating a join conjugates both
/// parts, so joining only representatives reaches every class.
pub fn subgroups_up_to_conjugacy(g: &Arc<FiniteGroup>) -> Result<SubgroupLattice> {
    subgroups_up_to_conjugacy_with_limit(g, SUBGROUP_ORDER_LIMIT)
}

pub fn subgroups_up_to_conjugacy_with_limit(
    g: &Arc<FiniteGroup>,
    limit: usize,
) -> Result<SubgroupLattice> {
    check_budget("subgroup enumeration group order", g.order() as u128, limit as u128)?;
    let n = g.order();
    let mut cyclic: Vec<Vec<Elem>> = Vec::new();
    let mut seen_cyclic: HashSet<Vec<Elem>> = HashSet::new();
    for x in 0..n {
        let c = Subgroup::closure_elements(g, &[x]);
        if seen_cyclic.insert(c.clone()) {
            cyclic.push(c);
        }
    }
    // canonical (minimal) conjugate -> all conjugates
    let mut found: HashMap<Vec<Elem>, Vec<Vec<Elem>>> = HashMap::new();
    let mut member: HashSet<Vec<Elem>> = HashSet::new();
    let mut queue: VecDeque<Vec<Elem>> = VecDeque::new();
    let mut add = |h: Vec<Elem>,
                   found: &mut HashMap<Vec<Elem>, Vec<Vec<Elem>>>,
                   queue: &mut VecDeque<Vec<Elem>>| {
        if member.contains(&h) {
            return;
        }
        let conj = conjugates(g, &h);
        let canon = conj.iter().min().expect("nonempty").clone();
        for c in &conj {
            member.insert(c.clone());
        }
        queue.push_back(canon.clone());
        found.insert(canon, conj);
    };
    add(vec![0], &mut found, &mut queue);
    while let Some(h) = queue.pop_front() {
        let hset: HashSet<Elem> = h.iter().copied().collect();
        for c in &cyclic {
            if c.iter().all(|x| hset.contains(x)) {
                continue;
            }
            if n % (h.len() * c.len() / gcd(h.len(), c.len())) != 0 {
                // join order is a multiple of lcm(|H|, |Z|)
                continue;
            }
            let j = join(g, &h, c);
            add(j, &mut found, &mut queue);
        }
    }
    let mut canon: Vec<Vec<Elem>> = found.keys().cloned().collect();
    canon.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut classes = Vec::with_capacity(canon.len());
    let mut lookup = HashMap::new();
    for (i, c) in canon.into_iter().enumerate() {
        let conj = found.remove(&c).expect("present");
        let size = conj.len();
        for x in conj {
            lookup.insert(x, i);
        }
        classes.push(SubgroupClass {
            rep: Subgroup::from_sorted_unchecked(g, c),
            size,
        });
    }
    Ok(SubgroupLattice {
        group: g.clone(),
        classes,
        lookup,
    })
}

/// Sorted elements of `<H, Z>` for sorted subgroups `h` and `z`.
fn join(g: &FiniteGroup, h: &[Elem], z: &[Elem]) -> Vec<Elem> {
    let mut seen = vec![false; g.order()];
    let mut out = Vec::new();
    for &x in h {
        seen[x] = true;
        out.push(x);
    }
    let gens: Vec<Elem> = h.iter().chain(z).copied().filter(|&x| x != 0).collect();
    let mut queue: VecDeque<Elem> = out.iter().copied().collect();
    while let Some(x) = queue.pop_front() {
        for &s in &gens {
            let y = g.mul(x, s);
            if !seen[y] {
                seen[y] = true;
                out.push(y);
                queue.push_back(y);
            }
        }
    }
    out.sort_unstable();
    out
}

fn gcd(a: usize, b: usize) -> usize {
    num_integer::gcd(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_classes() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let cl = conjugacy_classes(&s3);
        let mut sizes: Vec<usize> = cl.iter().map(|c| c.len()).collect();
        assert_eq!(cl[0], vec![0]);
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
    }

    #[test]
    fn abelian_classes_are_singletons() {
        let c4 = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(conjugacy_classes(&c4).len(), 4);
    }

    #[test]
    fn orbit_labels_follow_first_appearance() {
        let (labels, count) = orbits(5, 1, |_, x| match x {
            0 => 3,
            3 => 0,
            1 => 4,
            4 => 1,
            y => y,
        });
        assert_eq!(count, 3);
        assert_eq!(labels, vec![0, 1, 2, 0, 1]);
    }

    #[test]
    fn tuple_classes_s3() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let one = commuting_tuple_classes(&s3, 1).unwrap();
        assert_eq!(one.len(), 3);
        let two = commuting_tuple_classes(&s3, 2).unwrap();
        assert_eq!(two.len(), 8);
        assert_eq!(two.iter().map(|(_, s)| s).sum::<usize>(), 18);
        let naive = commuting_tuple_classes_naive(&s3, 2).unwrap();
        assert_eq!(naive.len(), 8);
        assert_eq!(naive.iter().map(|(_, s)| s).sum::<usize>(), 18);
        let zero = commuting_tuple_classes(&s3, 0).unwrap();
        assert_eq!(zero.len(), 1);
        assert!(zero[0].0.is_empty());
        assert_eq!(zero[0].1, 1);
    }

    #[test]
    fn tuple_classes_abelian() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        assert_eq!(commuting_tuple_classes(&c2, 2).unwrap().len(), 4);
    }

    #[test]
    fn commuting_tuple_rejects() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let g = s3.generators().to_vec();
        assert!(CommutingTuple::new(&s3, g).is_err());
        assert!(CommutingTuple::new(&s3, vec![7]).is_err());
    }

    #[test]
    fn subgroup_classes() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let l = subgroups_up_to_conjugacy(&s3).unwrap();
        let orders: Vec<usize> = l.classes().iter().map(|c| c.rep.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
        assert_eq!(l.classes()[1].size, 3);
        let c6 = FiniteGroup::cyclic(6).unwrap();
        let orders: Vec<usize> = subgroups_up_to_conjugacy(&c6)
            .unwrap()
            .classes()
            .iter()
            .map(|c| c.rep.order())
            .collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
        assert_eq!(subgroups_up_to_conjugacy(&FiniteGroup::cyclic(2).unwrap()).unwrap().len(), 2);
    }

    #[test]
    fn subgroup_counts_known_groups() {
        // S4 has 11 classes of subgroups, D4 has 8, C2^3 has 16
        let s4 = FiniteGroup::symmetric(4).unwrap();
        assert_eq!(subgroups_up_to_conjugacy(&s4).unwrap().len(), 11);
        let d4 = FiniteGroup::dihedral(4).unwrap();
        assert_eq!(subgroups_up_to_conjugacy(&d4).unwrap().len(), 8);
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let e8 = FiniteGroup::product(&[c2.clone(), c2.clone(), c2]).unwrap();
        assert_eq!(subgroups_up_to_conjugacy(&e8).unwrap().len(), 16);
    }

    #[test]
    fn subgroup_budget() {
        let s7 = FiniteGroup::symmetric(7).unwrap();
        assert!(matches!(
            subgroups_up_to_conjugacy(&s7),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn lattice_round_trip() {
        let s4 = FiniteGroup::symmetric(4).unwrap();
        let l = subgroups_up_to_conjugacy(&s4).unwrap();
        let reps: Vec<Vec<Elem>> = l.classes().iter().map(|c| c.rep.elements().to_vec()).collect();
        let l2 = SubgroupLattice::from_reps(&s4, reps).unwrap();
        for (a, b) in l.classes().iter().zip(l2.classes()) {
            assert_eq!(a.size, b.size);
        }
    }
}
