use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};

use super::{classes::orbits, Elem, FiniteGroup};
use crate::error::{Error, Result};

/// A subgroup of a parent group: sorted element list plus a generating set.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    elements: Arc<Vec<Elem>>,
    generators: Vec<Elem>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup")
            .field("parent", &self.parent.label())
            .field("order", &self.elements.len())
            .field("generators", &self.generators)
            .finish()
    }
}

impl Subgroup {
    pub fn whole(parent: &Arc<FiniteGroup>) -> Self {
        Subgroup {
            parent: parent.clone(),
            elements: Arc::new((0..parent.order()).collect()),
            generators: parent.generators().to_vec(),
        }
    }

    pub fn trivial(parent: &Arc<FiniteGroup>) -> Self {
        Subgroup {
            parent: parent.clone(),
            elements: Arc::new(vec![parent.identity()]),
            generators: vec![],
        }
    }

    /// The subgroup generated by `gens`.
    pub fn generated_by(parent: &Arc<FiniteGroup>, gens: &[Elem]) -> Result<Self> {
        if let Some(&g) = gens.iter().find(|&&g| g >= parent.order()) {
            return Err(Error::usage(format!("element {g} not in {}", parent.label())));
        }
        let elements = Self::closure_elements(parent, gens);
        let generators = gens.iter().copied().filter(|&g| g != 0).collect();
        Ok(Subgroup {
            parent: parent.clone(),
            elements: Arc::new(elements),
            generators,
        })
    }

    /// Wraps a sorted element list, checking that it is a subgroup.
    pub fn from_elements(parent: &Arc<FiniteGroup>, mut elements: Vec<Elem>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if elements.first() != Some(&parent.identity()) {
            return Err(Error::usage("subgroup must contain the identity"));
        }
        if elements.last().is_some_and(|&g| g >= parent.order()) {
            return Err(Error::usage("subgroup element out of range"));
        }
        for &a in &elements {
            if elements.binary_search(&parent.inverse(a)).is_err() {
                return Err(Error::usage("element set not closed under inverses"));
            }
        }
        // the search escapes the set exactly when it is not closed
        let generators = try_find_generators(parent, &elements)
            .ok_or_else(|| Error::usage("element set not closed under multiplication"))?;
        let sub = Subgroup {
            parent: parent.clone(),
            elements: Arc::new(elements),
            generators,
        };
        Ok(sub)
    }

    /// `elements` must be a sorted subgroup.
    pub(crate) fn from_sorted_unchecked(parent: &Arc<FiniteGroup>, elements: Vec<Elem>) -> Self {
        let generators =
            try_find_generators(parent, &elements).expect("subgroup element set is closed");
        Subgroup {
            parent: parent.clone(),
            elements: Arc::new(elements),
            generators,
        }
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub(crate) fn elements_arc(&self) -> &Arc<Vec<Elem>> {
        &self.elements
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_whole(&self) -> bool {
        self.elements.len() == self.parent.order()
    }

    pub fn contains(&self, g: Elem) -> bool {
        self.local_index(g).is_some()
    }

    pub fn local_index(&self, g: Elem) -> Option<usize> {
        self.elements.binary_search(&g).ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.parent.same_as(&other.parent) && self.elements.iter().all(|&g| other.contains(g))
    }

    /// Same parent and same elements.
    pub fn same_as(&self, other: &Subgroup) -> bool {
        (Arc::ptr_eq(&self.elements, &other.elements) || self.elements == other.elements)
            && self.parent.same_as(&other.parent)
    }

    /// Elements of this subgroup commuting with every entry of `tuple`.
    pub fn centralizer(&self, tuple: &[Elem]) -> Subgroup {
        if tuple.iter().all(|&g| g == 0) {
            return self.clone();
        }
        let g = &self.parent;
        let elements: Vec<Elem> = self
            .elements
            .iter()
            .copied()
            .filter(|&h| tuple.iter().all(|&t| g.commute(h, t)))
            .collect();
        if elements.len() == self.order() {
            return self.clone();
        }
        Self::from_sorted_unchecked(g, elements)
    }

    /// Conjugacy classes of this subgroup (under its own conjugation), each
    /// sorted, listed by smallest element; the first class is `{identity}`.
    pub fn conjugacy_classes(&self) -> Vec<Vec<Elem>> {
        let g = &self.parent;
        let gens: Vec<(Elem, Elem)> = self
            .generators
            .iter()
            .map(|&s| (s, g.inverse(s)))
            .collect();
        let (labels, count) = orbits(self.order(), gens.len(), |i, x| {
            let (s, si) = gens[i];
            let y = g.mul(g.mul(s, self.elements[x]), si);
            self.local_index(y).expect("subgroup closed under conjugation")
        });
        let mut classes = vec![Vec::new(); count];
        for (x, &l) in labels.iter().enumerate() {
            classes[l].push(self.elements[x]);
        }
        classes
    }

    /// Materializes this subgroup as a standalone permutation group; the
    /// second component maps its element indices back to parent elements.
    pub fn to_group(&self) -> Result<(Arc<FiniteGroup>, Vec<Elem>)> {
        let degree = self.parent.degree();
        let gens: Vec<Vec<usize>> = self
            .generators
            .iter()
            .map(|&s| self.parent.permutation_of(s))
            .collect();
        let label = format!("sub{}({})", self.order(), self.parent.label());
        let group = if gens.is_empty() {
            FiniteGroup::trivial()
        } else {
            FiniteGroup::from_permutations(label, degree, &gens)?
        };
        let lookup: HashMap<Vec<usize>, Elem> = self
            .elements
            .iter()
            .map(|&e| (self.parent.permutation_of(e), e))
            .collect();
        let map = if gens.is_empty() {
            vec![self.parent.identity()]
        } else {
            (0..group.order())
                .map(|i| lookup[&group.permutation_of(i)])
                .collect()
        };
        Ok((group, map))
    }

    /// All elements generated by `gens`, sorted.
    pub(crate) fn closure_elements(group: &FiniteGroup, gens: &[Elem]) -> Vec<Elem> {
        let mut seen = vec![false; group.order()];
        seen[0] = true;
        let mut out = vec![0];
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = group.mul(x, s);
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
}

/// A small generating set for the subgroup with sorted elements `elems`:
/// random elements are added until their closure is everything. `None` when
/// some product leaves `elems`.
fn try_find_generators(group: &FiniteGroup, elems: &[Elem]) -> Option<Vec<Elem>> {
    let n = elems.len();
    if n <= 1 {
        return Some(vec![]);
    }
    let local = |g: Elem| elems.binary_search(&g).ok();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64((n as u64) << 32 ^ elems[n - 1] as u64);
    let mut in_closure = vec![false; n];
    in_closure[0] = true;
    let mut members = vec![0usize];
    let mut gens: Vec<Elem> = Vec::new();
    while members.len() < n {
        let pick = (0..8)
            .map(|_| rng.gen_range(1..n))
            .find(|&i| !in_closure[i])
            .unwrap_or_else(|| (1..n).find(|&i| !in_closure[i]).expect("closure incomplete"));
        let s = elems[pick];
        gens.push(s);
        // old members only need the new generator; new members need all
        let mut queue: VecDeque<(usize, bool)> = members.iter().map(|&m| (m, false)).collect();
        while let Some((x, all)) = queue.pop_front() {
            let xe = elems[x];
            let targets: &[Elem] = if all { &gens } else { std::slice::from_ref(&s) };
            for &t in targets {
                let y = local(group.mul(xe, t))?;
                if !in_closure[y] {
                    in_closure[y] = true;
                    members.push(y);
                    queue.push_back((y, true));
                }
            }
        }
    }
    Some(gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centralizers_in_s3() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let whole = Subgroup::whole(&s3);
        let t = s3.generators()[0];
        let c = s3.generators()[1];
        assert_eq!(whole.centralizer(&[t]).order(), 2);
        assert_eq!(whole.centralizer(&[c]).order(), 3);
        assert_eq!(whole.centralizer(&[0]).order(), 6);
        assert_eq!(whole.centralizer(&[]).order(), 6);
    }

    #[test]
    fn generators_generate() {
        let s4 = FiniteGroup::symmetric(4).unwrap();
        let all: Vec<Elem> = (0..24).collect();
        let sub = Subgroup::from_sorted_unchecked(&s4, all);
        assert_eq!(
            Subgroup::closure_elements(&s4, sub.generators()).len(),
            24
        );
    }

    #[test]
    fn from_elements_rejects_non_subgroups() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert!(Subgroup::from_elements(&s3, vec![0, 1, 2]).is_err());
        assert!(Subgroup::from_elements(&s3, vec![1]).is_err());
        let c = s3.generators()[1];
        let sub = Subgroup::generated_by(&s3, &[c]).unwrap();
        assert!(Subgroup::from_elements(&s3, sub.elements().to_vec()).is_ok());
    }

    #[test]
    fn to_group_round_trip() {
        let s4 = FiniteGroup::symmetric(4).unwrap();
        let sub = Subgroup::generated_by(&s4, &[s4.generators()[1]]).unwrap();
        let (g, map) = sub.to_group().unwrap();
        assert_eq!(g.order(), 4);
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(map[g.mul(a, b)], s4.mul(map[a], map[b]));
            }
        }
    }
}
