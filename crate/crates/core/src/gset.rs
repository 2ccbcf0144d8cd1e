//! Finite sets with two commuting group actions.
//!
//! A [`BiSet`] is a view: a sorted subset of the points of a shared ambient
//! set, together with the subgroup of the O-side group that currently acts.
//! Fixed sets are therefore just filtered index lists, and wreath powers
//! compute their O-action from the base action instead of storing it.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{check_budget, Error, Result};
use crate::group::{make_group, orbits, CommutingTuple, Elem, FiniteGroup, GroupDescriptor, Subgroup};

/// Cap on the number of points of a constructed set.
pub const POINT_LIMIT: usize = 1_000_000;

/// Cap on stored action-table entries.
const TABLE_ENTRY_LIMIT: usize = 64_000_000;

struct Ambient {
    size: usize,
    o_group: Arc<FiniteGroup>,
    g_b: Arc<FiniteGroup>,
    /// `|G_B| * size` images, row per element of `G_B`.
    b_images: Vec<u32>,
    o: OAction,
}

enum OAction {
    Trivial,
    /// Images for every element of `domain` (sorted elements of `o_group`).
    Dense {
        domain: Arc<Vec<Elem>>,
        images: Vec<u32>,
    },
    /// Points are base-`m` tuples of length `n` acted on by a wreath product;
    /// inner element `a` sends base point `x` to `inner[a * m + x]`.
    Wreath {
        m: usize,
        pw: Vec<usize>,
        inner: Vec<u32>,
    },
}

enum OMap<'a> {
    Id,
    Row(&'a [u32]),
    Wreath {
        m: usize,
        pw: &'a [usize],
        coords: Vec<(&'a [u32], usize)>,
    },
}

impl OMap<'_> {
    #[inline]
    fn apply(&self, x: u32) -> u32 {
        match self {
            OMap::Id => x,
            OMap::Row(r) => r[x as usize],
            OMap::Wreath { m, pw, coords } => {
                let x = x as usize;
                let mut out = 0;
                for (i, &(row, src)) in coords.iter().enumerate() {
                    out += row[(x / pw[src]) % m] as usize * pw[i];
                }
                out as u32
            }
        }
    }
}

impl Ambient {
    fn o_map(&self, g: Elem) -> OMap<'_> {
        if g == 0 {
            return OMap::Id;
        }
        match &self.o {
            OAction::Trivial => OMap::Id,
            OAction::Dense { domain, images } => {
                let i = domain
                    .binary_search(&g)
                    .expect("element outside the acting subgroup");
                OMap::Row(&images[i * self.size..(i + 1) * self.size])
            }
            OAction::Wreath { m, pw, inner } => {
                let mut coords = Vec::with_capacity(pw.len() - 1);
                let ok = self.o_group.wreath_coords(g, |_, a, src| {
                    coords.push((&inner[a * m..(a + 1) * m], src));
                });
                debug_assert!(ok);
                OMap::Wreath { m: *m, pw, coords }
            }
        }
    }

    #[inline]
    fn b_row(&self, b: Elem) -> &[u32] {
        &self.b_images[b * self.size..(b + 1) * self.size]
    }
}

/// A finite set with commuting actions of `G_O` (through the subgroup
/// [`g_o`](Self::g_o)) and `G_B`.
#[derive(Clone)]
pub struct BiSet {
    ambient: Arc<Ambient>,
    points: Arc<Vec<u32>>,
    g_o: Subgroup,
}

impl fmt::Debug for BiSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BiSet")
            .field("size", &self.size())
            .field("g_o", &self.g_o.parent().label())
            .field("g_o_order", &self.g_o.order())
            .field("g_b", &self.ambient.g_b.label())
            .finish()
    }
}

fn check_same_group(what: &str, a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a.same_as(b) {
        Ok(())
    } else {
        Err(Error::GroupMismatch(format!(
            "{what}: {} vs {}",
            a.label(),
            b.label()
        )))
    }
}

impl BiSet {
    fn from_ambient(ambient: Ambient, g_o: Subgroup) -> Self {
        let points = Arc::new((0..ambient.size as u32).collect());
        BiSet {
            ambient: Arc::new(ambient),
            points,
            g_o,
        }
    }

    /// Builds a set from dense action tables: `o_images` has a row for every
    /// element of `g_o` (in sorted order), `b_images` a row for every element
    /// of `g_b`.
    fn from_tables(
        g_o: Subgroup,
        g_b: &Arc<FiniteGroup>,
        size: usize,
        o_images: Vec<u32>,
        b_images: Vec<u32>,
    ) -> Self {
        let ambient = Ambient {
            size,
            o_group: g_o.parent().clone(),
            g_b: g_b.clone(),
            b_images,
            o: OAction::Dense {
                domain: Arc::new(g_o.elements().to_vec()),
                images: o_images,
            },
        };
        Self::from_ambient(ambient, g_o)
    }

    /// Extends generator permutations to full actions, checking that each
    /// side is a well-defined action and that the two sides commute.
    pub fn from_generator_actions(
        g_o: &Arc<FiniteGroup>,
        g_b: &Arc<FiniteGroup>,
        size: usize,
        act_o: &[Vec<usize>],
        act_b: &[Vec<usize>],
    ) -> Result<Self> {
        check_budget("set size", size as u128, POINT_LIMIT as u128)?;
        let o_images = extend_action(g_o, size, act_o, "actO")?;
        let b_images = extend_action(g_b, size, act_b, "actB")?;
        for (i, a) in act_o.iter().enumerate() {
            for (j, b) in act_b.iter().enumerate() {
                if (0..size).any(|x| a[b[x]] != b[a[x]]) {
                    return Err(Error::usage(format!(
                        "actO generator {i} and actB generator {j} do not commute"
                    )));
                }
            }
        }
        Ok(Self::from_tables(
            Subgroup::whole(g_o),
            g_b,
            size,
            o_images,
            b_images,
        ))
    }

    pub fn empty(g_o: &Arc<FiniteGroup>, g_b: &Arc<FiniteGroup>) -> Self {
        Self::trivial_action(g_o, g_b, 0)
    }

    pub fn point(g_o: &Arc<FiniteGroup>, g_b: &Arc<FiniteGroup>) -> Self {
        Self::trivial_action(g_o, g_b, 1)
    }

    /// `size` points, both groups acting trivially.
    pub fn trivial_action(g_o: &Arc<FiniteGroup>, g_b: &Arc<FiniteGroup>, size: usize) -> Self {
        let ambient = Ambient {
            size,
            o_group: g_o.clone(),
            g_b: g_b.clone(),
            b_images: (0..g_b.order()).flat_map(|_| 0..size as u32).collect(),
            o: OAction::Trivial,
        };
        Self::from_ambient(ambient, Subgroup::whole(g_o))
    }

    /// `G` acting on itself by left multiplication on the O-side; trivial
    /// B-side.
    pub fn regular_o(g: &Arc<FiniteGroup>) -> Self {
        Self::regular_bi(g, &FiniteGroup::trivial())
    }

    /// `G_O` acting on itself by left multiplication, `G_B` acting trivially.
    pub fn regular_o_over(g_o: &Arc<FiniteGroup>, g_b: &Arc<FiniteGroup>) -> Self {
        let n = g_o.order();
        let mut o_images = Vec::with_capacity(n * n);
        for g in 0..n {
            o_images.extend((0..n).map(|x| g_o.mul(g, x) as u32));
        }
        let b_images = (0..g_b.order()).flat_map(|_| 0..n as u32).collect();
        Self::from_tables(Subgroup::whole(g_o), g_b, n, o_images, b_images)
    }

    /// `G_O × G_B` with `(g, b)·(x, y) = (gx, by)`; point `(x, y)` has index
    /// `x·|G_B| + y`.
    pub fn regular_bi(g_o: &Arc<FiniteGroup>, g_b: &Arc<FiniteGroup>) -> Self {
        let (no, nb) = (g_o.order(), g_b.order());
        let size = no * nb;
        let mut o_images = Vec::with_capacity(no * size);
        for g in 0..no {
            for x in 0..no {
                let gx = g_o.mul(g, x);
                o_images.extend((0..nb).map(|y| (gx * nb + y) as u32));
            }
        }
        let mut b_images = Vec::with_capacity(nb * size);
        for b in 0..nb {
            for x in 0..no {
                b_images.extend((0..nb).map(|y| (x * nb + g_b.mul(b, y)) as u32));
            }
        }
        Self::from_tables(Subgroup::whole(g_o), g_b, size, o_images, b_images)
    }

    /// The coset space `G_B/H` as a G_B-set (trivial O-side group).
    pub fn coset_space(g_b: &Arc<FiniteGroup>, h: &Subgroup) -> Result<Self> {
        check_same_group("coset space", g_b, h.parent())?;
        let n = g_b.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if coset_of[x] != usize::MAX {
                continue;
            }
            for &y in h.elements() {
                coset_of[g_b.mul(x, y)] = reps.len();
            }
            reps.push(x);
        }
        let size = reps.len();
        let mut b_images = Vec::with_capacity(n * size);
        for b in 0..n {
            b_images.extend(reps.iter().map(|&r| coset_of[g_b.mul(b, r)] as u32));
        }
        let triv = FiniteGroup::trivial();
        let ambient = Ambient {
            size,
            o_group: triv.clone(),
            g_b: g_b.clone(),
            b_images,
            o: OAction::Trivial,
        };
        Ok(Self::from_ambient(ambient, Subgroup::whole(&triv)))
    }

    /// `G_O` acting on three points through its permutation representation
    /// (of degree at most 3, padded with fixed points): `ℤ/2` swaps two
    /// points and fixes the third, `ℤ/3` rotates, `S_3` acts naturally.
    /// `G_B` acts trivially.
    pub fn three_point(g_o: &Arc<FiniteGroup>, g_b: &Arc<FiniteGroup>) -> Result<Self> {
        if g_o.degree() > 3 || g_o.wreath_factors().is_some() {
            return Err(Error::usage(format!(
                "{} has no action on three points",
                g_o.label()
            )));
        }
        let act_o: Vec<Vec<usize>> = g_o
            .generators()
            .iter()
            .map(|&s| {
                let mut p = g_o.permutation_of(s);
                p.extend(p.len()..3);
                p
            })
            .collect();
        let act_b = vec![vec![0, 1, 2]; g_b.generators().len()];
        Self::from_generator_actions(g_o, g_b, 3, &act_o, &act_b)
    }

    // ---- accessors ----------------------------------------------------------

    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The subgroup of the O-side group acting on this set.
    pub fn g_o(&self) -> &Subgroup {
        &self.g_o
    }

    pub fn g_b(&self) -> &Arc<FiniteGroup> {
        &self.ambient.g_b
    }

    /// Sorted ambient indices; a fingerprint of this view within its ambient.
    pub(crate) fn point_ids(&self) -> &Arc<Vec<u32>> {
        &self.points
    }

    fn is_full(&self) -> bool {
        self.points.len() == self.ambient.size
    }

    #[inline]
    fn local(&self, a: u32) -> usize {
        if self.is_full() {
            a as usize
        } else {
            self.points
                .binary_search(&a)
                .expect("actions preserve the point set")
        }
    }

    fn check_o(&self, g: Elem) -> Result<()> {
        if self.g_o.contains(g) {
            Ok(())
        } else {
            Err(Error::usage(format!(
                "element {g} does not act on this set (acting group has order {})",
                self.g_o.order()
            )))
        }
    }

    /// Image of local point `i` under `g ∈ g_o`.
    pub fn act_o(&self, g: Elem, i: usize) -> Result<usize> {
        self.check_o(g)?;
        Ok(self.local(self.ambient.o_map(g).apply(self.points[i])))
    }

    /// Image of local point `i` under `b ∈ G_B`.
    pub fn act_b(&self, b: Elem, i: usize) -> usize {
        self.local(self.ambient.b_row(b)[self.points[i] as usize])
    }

    /// The permutation of local points induced by `g ∈ g_o`.
    pub fn o_permutation(&self, g: Elem) -> Result<Vec<usize>> {
        self.check_o(g)?;
        let map = self.ambient.o_map(g);
        Ok(self
            .points
            .iter()
            .map(|&x| self.local(map.apply(x)))
            .collect())
    }

    pub fn b_permutation(&self, b: Elem) -> Vec<usize> {
        let row = self.ambient.b_row(b);
        self.points
            .iter()
            .map(|&x| self.local(row[x as usize]))
            .collect()
    }

    /// Checks that each O-generator commutes with each B-generator on every
    /// point.
    pub fn check_commutation(&self) -> Result<()> {
        for &g in self.g_o.generators() {
            let map = self.ambient.o_map(g);
            for &b in self.g_b().generators() {
                let row = self.ambient.b_row(b);
                for &x in self.points.iter() {
                    if map.apply(row[x as usize]) != row[map.apply(x) as usize] {
                        return Err(Error::invariant(format!(
                            "O-element {g} and B-element {b} do not commute at point {x}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    // ---- fixed sets and quotients --------------------------------------------

    /// Ambient indices of the points fixed by every entry of `tuple`.
    pub(crate) fn fixed_points(&self, tuple: &[Elem]) -> Arc<Vec<u32>> {
        let maps: Vec<OMap<'_>> = tuple
            .iter()
            .filter(|&&g| g != 0)
            .map(|&g| self.ambient.o_map(g))
            .collect();
        if maps.iter().all(|m| matches!(m, OMap::Id)) {
            return self.points.clone();
        }
        Arc::new(
            self.points
                .iter()
                .copied()
                .filter(|&x| maps.iter().all(|m| m.apply(x) == x))
                .collect(),
        )
    }

    /// A view of the same ambient with other points and acting subgroup.
    pub(crate) fn view(&self, points: Arc<Vec<u32>>, g_o: Subgroup) -> BiSet {
        BiSet {
            ambient: self.ambient.clone(),
            points,
            g_o,
        }
    }

    /// Points fixed by every entry of `tuple`, acted on by the centralizer of
    /// the tuple in [`g_o`](Self::g_o) and by all of `G_B`.
    pub fn fixed_set(&self, tuple: &[Elem]) -> Result<BiSet> {
        for &g in tuple {
            self.check_o(g)?;
        }
        let points = self.fixed_points(tuple);
        Ok(self.view(points, self.g_o.centralizer(tuple)))
    }

    pub fn fixed_set_of(&self, phi: &CommutingTuple) -> Result<BiSet> {
        check_same_group("fixed set", phi.parent(), self.g_o.parent())?;
        self.fixed_set(phi.entries())
    }

    /// The same points with the O-side restricted to `h ⊂ g_o`.
    pub fn restrict_o(&self, h: &Subgroup) -> Result<BiSet> {
        if !h.is_subgroup_of(&self.g_o) {
            return Err(Error::usage("restriction to a non-subgroup"));
        }
        Ok(self.view(self.points.clone(), h.clone()))
    }

    /// Orbits of `k ⊂ g_o` on the local points: label per point and count.
    pub fn orbit_labels(&self, k: &Subgroup) -> (Vec<usize>, usize) {
        let maps: Vec<OMap<'_>> = k
            .generators()
            .iter()
            .map(|&g| self.ambient.o_map(g))
            .collect();
        orbits(self.size(), maps.len(), |i, x| {
            self.local(maps[i].apply(self.points[x]))
        })
    }

    /// The set of `k`-orbits with the induced `G_B`-action; the O-side group
    /// is kept but acts trivially.
    pub fn quotient_by(&self, k: &Subgroup) -> Result<BiSet> {
        if !k.is_subgroup_of(&self.g_o) {
            return Err(Error::usage("quotient by a subgroup that does not act"));
        }
        let (labels, count) = self.orbit_labels(k);
        let mut reps = vec![u32::MAX; count];
        for (x, &l) in labels.iter().enumerate().rev() {
            reps[l] = self.points[x];
        }
        let nb = self.g_b().order();
        let mut b_images = Vec::with_capacity(nb * count);
        for b in 0..nb {
            let row = self.ambient.b_row(b);
            b_images.extend(
                reps.iter()
                    .map(|&r| labels[self.local(row[r as usize])] as u32),
            );
        }
        let ambient = Ambient {
            size: count,
            o_group: self.g_o.parent().clone(),
            g_b: self.g_b().clone(),
            b_images,
            o: OAction::Trivial,
        };
        Ok(BiSet::from_ambient(ambient, self.g_o.clone()))
    }

    /// Number of points fixed by all of the given `G_B` elements.
    pub fn count_b_fixed(&self, elems: &[Elem]) -> usize {
        let rows: Vec<&[u32]> = elems
            .iter()
            .filter(|&&b| b != 0)
            .map(|&b| self.ambient.b_row(b))
            .collect();
        self.points
            .iter()
            .filter(|&&x| rows.iter().all(|r| r[x as usize] == x))
            .count()
    }

    /// Orbits of `G_B` on the local points.
    pub fn b_orbit_labels(&self) -> (Vec<usize>, usize) {
        let gens = self.g_b().generators();
        orbits(self.size(), gens.len(), |i, x| {
            self.local(self.ambient.b_row(gens[i])[self.points[x] as usize])
        })
    }

    /// Sorted stabilizer in `G_B` of local point `i`.
    pub fn b_stabilizer(&self, i: usize) -> Vec<Elem> {
        let x = self.points[i];
        (0..self.g_b().order())
            .filter(|&b| self.ambient.b_row(b)[x as usize] == x)
            .collect()
    }

    // ---- constructions ---------------------------------------------------------

    fn check_compatible(&self, other: &BiSet, what: &str) -> Result<()> {
        check_same_group(what, self.g_o.parent(), other.g_o.parent())?;
        if self.g_o.elements() != other.g_o.elements() {
            return Err(Error::GroupMismatch(format!(
                "{what}: acting O-subgroups differ"
            )));
        }
        check_same_group(what, self.g_b(), other.g_b())
    }

    /// Dense tables of this set's actions on local points: rows for every
    /// element of `g_o`, then for every element of `G_B`.
    fn local_tables(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let o = self
            .g_o
            .elements()
            .iter()
            .map(|&g| self.o_permutation(g).expect("g_o acts"))
            .collect();
        let b = (0..self.g_b().order())
            .map(|b| self.b_permutation(b))
            .collect();
        (o, b)
    }

    /// Cartesian product with the diagonal actions; `(x, y)` has index
    /// `x·|Y| + y`.
    pub fn product(&self, other: &BiSet) -> Result<BiSet> {
        self.check_compatible(other, "product")?;
        let (n1, n2) = (self.size(), other.size());
        let size = n1 * n2;
        check_budget("set size", size as u128, POINT_LIMIT as u128)?;
        check_table(self.g_o.order() + self.g_b().order(), size)?;
        let (o1, b1) = self.local_tables();
        let (o2, b2) = other.local_tables();
        let pair = |p: &[usize], q: &[usize]| -> Vec<u32> {
            (0..n1)
                .flat_map(|x| (0..n2).map(move |y| (p[x] * n2 + q[y]) as u32))
                .collect()
        };
        let o_images = o1.iter().zip(&o2).flat_map(|(p, q)| pair(p, q)).collect();
        let b_images = b1.iter().zip(&b2).flat_map(|(p, q)| pair(p, q)).collect();
        Ok(Self::from_tables(
            self.g_o.clone(),
            self.g_b(),
            size,
            o_images,
            b_images,
        ))
    }

    /// Disjoint union; the points of `other` follow those of `self`.
    pub fn disjoint_union(&self, other: &BiSet) -> Result<BiSet> {
        self.check_compatible(other, "disjoint union")?;
        let (n1, n2) = (self.size(), other.size());
        let size = n1 + n2;
        check_budget("set size", size as u128, POINT_LIMIT as u128)?;
        check_table(self.g_o.order() + self.g_b().order(), size)?;
        let (o1, b1) = self.local_tables();
        let (o2, b2) = other.local_tables();
        let join = |p: &[usize], q: &[usize]| -> Vec<u32> {
            p.iter()
                .map(|&x| x as u32)
                .chain(q.iter().map(|&y| (n1 + y) as u32))
                .collect()
        };
        let o_images = o1.iter().zip(&o2).flat_map(|(p, q)| join(p, q)).collect();
        let b_images = b1.iter().zip(&b2).flat_map(|(p, q)| join(p, q)).collect();
        Ok(Self::from_tables(
            self.g_o.clone(),
            self.g_b(),
            size,
            o_images,
            b_images,
        ))
    }

    /// The `k`-th symmetric power: multisets of `k` points, stored as sorted
    /// tuples in lexicographic order, acted on by act-then-sort.
    pub fn symmetric_power(&self, k: usize) -> Result<BiSet> {
        let n = self.size();
        let size = multiset_count(n, k);
        check_budget("symmetric power size", size, POINT_LIMIT as u128)?;
        let size = size as usize;
        check_table(self.g_o.order() + self.g_b().order(), size)?;
        let mut tuples: Vec<Vec<u32>> = Vec::with_capacity(size);
        let mut cur = vec![0u32; k];
        if k == 0 {
            tuples.push(vec![]);
        } else if n > 0 {
            loop {
                tuples.push(cur.clone());
                // next non-decreasing tuple
                let mut i = k;
                while i > 0 && cur[i - 1] as usize == n - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                let v = cur[i - 1] + 1;
                for c in &mut cur[i - 1..] {
                    *c = v;
                }
            }
        }
        let index: HashMap<&[u32], u32> = tuples
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_slice(), i as u32))
            .collect();
        let (o, b) = self.local_tables();
        let mut buf = vec![0u32; k];
        let mut image_rows = |perms: &[Vec<usize>]| -> Vec<u32> {
            let mut out = Vec::with_capacity(perms.len() * size);
            for p in perms {
                for t in &tuples {
                    for (slot, &x) in buf.iter_mut().zip(t) {
                        *slot = p[x as usize] as u32;
                    }
                    buf.sort_unstable();
                    out.push(index[buf.as_slice()]);
                }
            }
            out
        };
        let o_images = image_rows(&o);
        let b_images = image_rows(&b);
        Ok(Self::from_tables(
            self.g_o.clone(),
            self.g_b(),
            size,
            o_images,
            b_images,
        ))
    }

    /// `X^n` under the wreath product `G ≀ S_n` (with `G` the acting O-side
    /// group), `(a,σ)·(x_1,…,x_n) = (a_1·x_{σ⁻¹(1)}, …)`, and `G_B` acting
    /// diagonally. Point `(x_0,…,x_{n-1})` has index `Σ x_i·|X|^i`.
    pub fn wreath_power(&self, n: usize) -> Result<BiSet> {
        if n == 0 {
            return Err(Error::usage("wreath power needs n >= 1"));
        }
        if n == 1 {
            return Ok(self.clone());
        }
        let m = self.size();
        let size = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        check_budget("wreath power size", size, POINT_LIMIT as u128)?;
        let size = size as usize;
        check_table(self.g_b().order(), size)?;
        let (inner, map) = if self.g_o.is_whole() {
            (self.g_o.parent().clone(), (0..self.g_o.order()).collect())
        } else {
            self.g_o.to_group()?
        };
        let group = FiniteGroup::wreath(&inner, n)?;
        let mut inner_images = Vec::with_capacity(inner.order() * m);
        for &g in &map {
            inner_images.extend(
                self.o_permutation(g)
                    .expect("g_o acts")
                    .into_iter()
                    .map(|x| x as u32),
            );
        }
        let pw: Vec<usize> = (0..=n).map(|i| m.pow(i as u32)).collect();
        let nb = self.g_b().order();
        let mut b_images = Vec::with_capacity(nb * size);
        for b in 0..nb {
            let p = self.b_permutation(b);
            for x in 0..size {
                let mut y = 0;
                for i in 0..n {
                    y += p[(x / pw[i]) % m] * pw[i];
                }
                b_images.push(y as u32);
            }
        }
        let ambient = Ambient {
            size,
            o_group: group.clone(),
            g_b: self.g_b().clone(),
            b_images,
            o: OAction::Wreath {
                m,
                pw,
                inner: inner_images,
            },
        };
        Ok(BiSet::from_ambient(ambient, Subgroup::whole(&group)))
    }

    /// Exchanges the two sides: the result has `G_B` acting on the O-side and
    /// the acting O-subgroup (materialized as a group) on the B-side.
    pub fn transpose(&self) -> Result<BiSet> {
        let (new_b, map) = if self.g_o.is_whole() {
            (self.g_o.parent().clone(), (0..self.g_o.order()).collect::<Vec<_>>())
        } else {
            self.g_o.to_group()?
        };
        let new_o = self.g_b().clone();
        let size = self.size();
        check_table(new_o.order() + new_b.order(), size)?;
        let o_images = (0..new_o.order())
            .flat_map(|b| self.b_permutation(b).into_iter().map(|x| x as u32))
            .collect();
        let b_images = map
            .iter()
            .flat_map(|&g| {
                self.o_permutation(g)
                    .expect("g_o acts")
                    .into_iter()
                    .map(|x| x as u32)
            })
            .collect();
        Ok(Self::from_tables(
            Subgroup::whole(&new_o),
            &new_b,
            size,
            o_images,
            b_images,
        ))
    }

    pub fn to_descriptor(&self, g_o: GroupDescriptor, g_b: GroupDescriptor) -> Result<BiSetDescriptor> {
        if !self.g_o.is_whole() {
            return Err(Error::usage("only sets acted on by a whole group can be exported"));
        }
        Ok(BiSetDescriptor {
            size: self.size(),
            g_o,
            g_b,
            act_o: self
                .g_o
                .generators()
                .iter()
                .map(|&g| self.o_permutation(g).expect("g_o acts"))
                .collect(),
            act_b: self
                .g_b()
                .generators()
                .iter()
                .map(|&b| self.b_permutation(b))
                .collect(),
        })
    }
}

/// Number of multisets of size `k` from `n` elements, saturating.
fn multiset_count(n: usize, k: usize) -> u128 {
    if n == 0 {
        return u128::from(k == 0);
    }
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        c = match c.checked_mul(n as u128 + i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    c
}

fn check_table(rows: usize, size: usize) -> Result<()> {
    check_budget(
        "action table entries",
        rows as u128 * size as u128,
        TABLE_ENTRY_LIMIT as u128,
    )
}

/// Extends generator permutations to an action table over all elements,
/// rejecting anything that is not a homomorphism.
fn extend_action(
    g: &Arc<FiniteGroup>,
    size: usize,
    gens: &[Vec<usize>],
    what: &str,
) -> Result<Vec<u32>> {
    if gens.len() != g.generators().len() {
        return Err(Error::usage(format!(
            "{what}: {} permutations given, {} has {} generators",
            gens.len(),
            g.label(),
            g.generators().len()
        )));
    }
    for (i, p) in gens.iter().enumerate() {
        let mut seen = vec![false; size];
        if p.len() != size || p.iter().any(|&x| x >= size || std::mem::replace(&mut seen[x], true)) {
            return Err(Error::usage(format!(
                "{what}[{i}] is not a permutation of {size} points"
            )));
        }
    }
    check_table(g.order(), size)?;
    let n = g.order();
    let mut images: Vec<Option<Vec<u32>>> = vec![None; n];
    images[0] = Some((0..size as u32).collect());
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (s, p) in g.generators().iter().zip(gens) {
            let y = g.mul(x, *s);
            let fx = images[x].as_ref().expect("visited");
            // (x·s)·v = x·(s·v)
            let fy: Vec<u32> = p.iter().map(|&v| fx[v]).collect();
            match &images[y] {
                Some(old) if *old != fy => {
                    return Err(Error::usage(format!(
                        "{what} does not define an action of {}",
                        g.label()
                    )))
                }
                Some(_) => {}
                None => {
                    images[y] = Some(fy);
                    queue.push_back(y);
                }
            }
        }
    }
    let mut out = Vec::with_capacity(n * size);
    for img in images {
        out.extend(img.ok_or_else(|| Error::invariant("generators do not generate"))?);
    }
    Ok(out)
}

/// JSON form of a set with two actions:
/// `{"size":m,"gO":…,"gB":…,"actO":[[…]],"actB":[[…]]}`, one permutation per
/// generator of each group.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct BiSetDescriptor {
    pub size: usize,
    #[serde(rename = "gO")]
    pub g_o: GroupDescriptor,
    #[serde(rename = "gB")]
    pub g_b: GroupDescriptor,
    #[serde(rename = "actO", default)]
    pub act_o: Vec<Vec<usize>>,
    #[serde(rename = "actB", default)]
    pub act_b: Vec<Vec<usize>>,
}

pub fn make_biset(desc: &BiSetDescriptor) -> Result<BiSet> {
    let g_o = make_group(&desc.g_o)?;
    let g_b = make_group(&desc.g_b)?;
    BiSet::from_generator_actions(&g_o, &g_b, desc.size, &desc.act_o, &desc.act_b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> Arc<FiniteGroup> {
        FiniteGroup::cyclic(2).unwrap()
    }

    #[test]
    fn swap_fixed_set() {
        let g = z2();
        let x = BiSet::three_point(&g, &FiniteGroup::trivial()).unwrap();
        let f = x.fixed_set(&[1]).unwrap();
        assert_eq!(f.size(), 1);
        assert_eq!(x.fixed_set(&[0]).unwrap().size(), 3);
        assert!(BiSet::regular_o(&g).fixed_set(&[1]).unwrap().is_empty());
    }

    #[test]
    fn quotient_of_biregular() {
        let g = z2();
        let x = BiSet::regular_bi(&g, &g);
        let q = x.quotient_by(x.g_o()).unwrap();
        assert_eq!(q.size(), 2);
        assert_eq!(q.b_permutation(1), vec![1, 0]);
        let q0 = x.quotient_by(&Subgroup::trivial(&g)).unwrap();
        assert_eq!(q0.size(), 4);
        let r = BiSet::regular_o(&FiniteGroup::symmetric(3).unwrap());
        assert_eq!(r.quotient_by(r.g_o()).unwrap().size(), 1);
    }

    #[test]
    fn symmetric_square_of_regular() {
        let x = BiSet::regular_o(&z2());
        let s2 = x.symmetric_power(2).unwrap();
        assert_eq!(s2.size(), 3);
        // aa, ab, bb
        assert_eq!(s2.o_permutation(1).unwrap(), vec![2, 1, 0]);
        assert_eq!(x.symmetric_power(0).unwrap().size(), 1);
        assert_eq!(x.symmetric_power(1).unwrap().size(), 2);
    }

    #[test]
    fn wreath_power_sizes() {
        let x = BiSet::regular_o(&z2());
        let w = x.wreath_power(3).unwrap();
        assert_eq!(w.size(), 8);
        assert_eq!(w.g_o().order(), 48);
        w.check_commutation().unwrap();
        let y = BiSet::regular_bi(&z2(), &z2());
        let w2 = y.wreath_power(2).unwrap();
        assert_eq!(w2.size(), 16);
        w2.check_commutation().unwrap();
        assert_eq!(y.wreath_power(1).unwrap().size(), 4);
    }

    #[test]
    fn wreath_action_is_an_action() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let x = BiSet::three_point(&s3, &FiniteGroup::trivial()).unwrap();
        let w = x.wreath_power(2).unwrap();
        let g = w.g_o().parent().clone();
        for a in (0..g.order()).step_by(5) {
            for b in (0..g.order()).step_by(7) {
                let ab = g.mul(a, b);
                for p in 0..w.size() {
                    let lhs = w.act_o(ab, p).unwrap();
                    let rhs = w.act_o(a, w.act_o(b, p).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn products_and_unions() {
        let g = z2();
        let x = BiSet::regular_o(&g);
        let p = x.product(&x).unwrap();
        assert_eq!(p.size(), 4);
        assert_eq!(p.orbit_labels(p.g_o()).1, 2);
        let pt = BiSet::point(&g, &FiniteGroup::trivial());
        assert_eq!(x.product(&pt).unwrap().size(), 2);
        let e = BiSet::empty(&g, &FiniteGroup::trivial());
        assert_eq!(x.disjoint_union(&e).unwrap().size(), 2);
        let other = BiSet::regular_o(&FiniteGroup::cyclic(3).unwrap());
        assert!(matches!(x.product(&other), Err(Error::GroupMismatch(_))));
    }

    #[test]
    fn rejects_bad_actions() {
        let g = z2();
        let t = FiniteGroup::trivial();
        // a 3-cycle is not an involution
        assert!(BiSet::from_generator_actions(&g, &t, 3, &[vec![1, 2, 0]], &[]).is_err());
        // non-commuting sides
        assert!(BiSet::from_generator_actions(&g, &g, 3, &[vec![1, 0, 2]], &[vec![0, 2, 1]]).is_err());
        assert!(BiSet::from_generator_actions(&g, &t, 2, &[vec![0, 0]], &[]).is_err());
    }

    #[test]
    fn coset_spaces() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let c2 = Subgroup::generated_by(&s3, &[s3.generators()[0]]).unwrap();
        let x = BiSet::coset_space(&s3, &c2).unwrap();
        assert_eq!(x.size(), 3);
        assert_eq!(x.count_b_fixed(c2.elements()), 1);
        assert_eq!(x.b_orbit_labels().1, 1);
    }

    #[test]
    fn descriptor_round_trip() {
        let json = r#"{"size":3,"gO":{"type":"cyclic","n":2},"gB":{"type":"trivial"},
                       "actO":[[1,0,2]],"actB":[]}"#;
        let d: BiSetDescriptor = serde_json::from_str(json).unwrap();
        let x = make_biset(&d).unwrap();
        assert_eq!(x.fixed_set(&[1]).unwrap().size(), 1);
        let back = x.to_descriptor(d.g_o.clone(), d.g_b.clone()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn transpose_swaps_sides() {
        let g = z2();
        let x = BiSet::three_point(&g, &FiniteGroup::trivial()).unwrap();
        let t = x.transpose().unwrap();
        assert_eq!(t.g_b().order(), 2);
        assert_eq!(t.count_b_fixed(&[1]), 1);
    }
}
