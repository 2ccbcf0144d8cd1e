//! Orbifold, higher-order and equivariant higher-order Euler characteristics.
//!
//! The production path is the recursion over conjugacy-class
//! representatives and their centralizers. Two oracles are kept alongside:
//! the averaging form over commuting `(k+1)`-tuples for the integer version,
//! and the sum over classes of commuting `k`-tuples for the Burnside-valued
//! one. With cross-checking on, small groups run both paths and any
//! disagreement is an error.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use num_rational::Ratio;
use rayon::prelude::*;

use crate::burnside::{BurnsideElement, BurnsideRing};
use crate::cellspace::{sign, AsCells, CellSpace};
use crate::error::{check_budget, Error, Result};
use crate::group::{commuting_tuple_classes_in, Elem};
use crate::Int;

/// Cross-checks run only when the acting group has at most this order.
pub const CROSS_CHECK_LIMIT: usize = 400;

#[derive(Clone, Debug)]
pub struct EulerOptions {
    /// Also evaluate the oracle form and compare.
    pub cross_check: bool,
    /// Cap on the number of recursion leaves.
    pub leaf_budget: usize,
}

impl Default for EulerOptions {
    fn default() -> Self {
        EulerOptions {
            cross_check: cfg!(debug_assertions),
            leaf_budget: 2_000_000,
        }
    }
}

/// Plain Euler characteristic `Σ (−1)^d |F|`.
pub fn chi(x: &impl AsCells) -> Int {
    x.as_cells().chi()
}

/// `Σ_{[g]} χ(X^g / C(g))`.
pub fn chi_orb(x: &impl AsCells) -> Result<Int> {
    chi_k(x, 1)
}

pub fn chi_k(x: &impl AsCells, k: usize) -> Result<Int> {
    chi_k_with(x, k, &EulerOptions::default())
}

/// Order-`k` Euler characteristic of `x` under its acting O-group; `k = 0`
/// gives `χ(X/G)`.
pub fn chi_k_with(x: &impl AsCells, k: usize, opts: &EulerOptions) -> Result<Int> {
    let cells = x.as_cells();
    let engine = Engine::new(opts, |c: &CellSpace| {
        let mut total = 0;
        for (d, f) in c.cells() {
            total += sign(*d) * f.orbit_labels(c.g_o()).1 as Int;
        }
        Ok(vec![total])
    });
    let v = engine.run(&cells, k)?[0];
    if opts.cross_check && cells.g_o().order() <= CROSS_CHECK_LIMIT {
        let w = chi_k_averaging(&cells, k)?;
        if v != w {
            return Err(Error::invariant(format!(
                "order-{k} Euler characteristic: recursion gives {v}, averaging gives {w}"
            )));
        }
    }
    Ok(v)
}

pub fn chi_k_equivariant(ring: &Arc<BurnsideRing>, x: &impl AsCells, k: usize) -> Result<BurnsideElement> {
    chi_k_equivariant_with(ring, x, k, &EulerOptions::default())
}

/// Order-`k` equivariant Euler characteristic in `A(G_B)`; `k = 0` gives
/// `χ^{G_B}(X/G_O)`.
pub fn chi_k_equivariant_with(
    ring: &Arc<BurnsideRing>,
    x: &impl AsCells,
    k: usize,
    opts: &EulerOptions,
) -> Result<BurnsideElement> {
    let cells = x.as_cells();
    let engine = Engine::new(opts, |c: &CellSpace| {
        let mut total = vec![0; ring.rank()];
        for (d, f) in c.cells() {
            let q = ring.class_of(&f.quotient_by(c.g_o())?)?;
            for (t, v) in total.iter_mut().zip(q.coeffs()) {
                *t += sign(*d) * v;
            }
        }
        Ok(total)
    });
    let v = ring.from_coeffs(engine.run(&cells, k)?)?;
    if opts.cross_check && cells.g_o().order() <= CROSS_CHECK_LIMIT {
        let w = chi_k_equivariant_tuple_form(ring, &cells, k)?;
        if v != w {
            return Err(Error::invariant(format!(
                "order-{k} equivariant Euler characteristic: recursion gives {v}, tuple form gives {w}"
            )));
        }
    }
    Ok(v)
}

/// Oracle: `(1/|G|) Σ χ(X^φ)` over commuting `(k+1)`-tuples `φ`, summed as
/// `Σ_{[φ]} χ(X^φ)/|C(φ)|` over conjugacy classes of tuples.
pub fn chi_k_averaging(x: &impl AsCells, k: usize) -> Result<Int> {
    let cells = x.as_cells();
    let mut total = Ratio::from_integer(0 as Int);
    for (phi, cent) in commuting_tuple_classes_in(cells.g_o(), k + 1)? {
        let fixed: Int = cells
            .cells()
            .iter()
            .map(|(d, f)| sign(*d) * f.fixed_points(&phi).len() as Int)
            .sum();
        total += Ratio::new(fixed, cent as Int);
    }
    if !total.is_integer() {
        return Err(Error::invariant(format!("averaging form is not integral: {total}")));
    }
    Ok(total.to_integer())
}

/// Oracle: `Σ_{[φ]} χ^{G_B}(X^φ / C(φ))` over classes of commuting
/// `k`-tuples, with the equivariant characteristic taken through isotropy
/// strata.
pub fn chi_k_equivariant_tuple_form(
    ring: &Arc<BurnsideRing>,
    x: &impl AsCells,
    k: usize,
) -> Result<BurnsideElement> {
    let cells = x.as_cells();
    let mut total = ring.zero();
    for (phi, _) in commuting_tuple_classes_in(cells.g_o(), k)? {
        let fixed = cells.fixed_cells(&phi)?;
        let q = fixed.quotient_cells(fixed.g_o())?;
        total = total.try_add(&ring.chi_equivariant(&q)?)?;
    }
    Ok(total)
}

type MemoKey = (Vec<Arc<Vec<u32>>>, Arc<Vec<Elem>>, usize);

struct Engine<L> {
    leaf: L,
    memo: Mutex<HashMap<MemoKey, Vec<Int>>>,
    leaves: AtomicUsize,
    budget: usize,
}

impl<L> Engine<L>
where
    L: Fn(&CellSpace) -> Result<Vec<Int>> + Sync,
{
    fn new(opts: &EulerOptions, leaf: L) -> Self {
        Engine {
            leaf,
            memo: Mutex::new(HashMap::new()),
            leaves: AtomicUsize::new(0),
            budget: opts.leaf_budget,
        }
    }

    fn run(&self, x: &CellSpace, k: usize) -> Result<Vec<Int>> {
        if k == 0 {
            let n = self.leaves.fetch_add(1, Ordering::Relaxed) + 1;
            check_budget("Euler recursion leaves", n as u128, self.budget as u128)?;
            return (self.leaf)(x);
        }
        let key: MemoKey = (
            x.cells().iter().map(|(_, f)| f.point_ids().clone()).collect(),
            x.g_o().elements_arc().clone(),
            k,
        );
        if let Some(v) = self.memo.lock().expect("memo lock").get(&key) {
            return Ok(v.clone());
        }
        let h = x.g_o();
        let reps: Vec<Elem> = h.conjugacy_classes().into_iter().map(|c| c[0]).collect();
        let parts = reps
            .par_iter()
            .map(|&g| -> Result<Option<Vec<Int>>> {
                let fixed: Vec<_> = x
                    .cells()
                    .iter()
                    .map(|(d, f)| (*d, f.fixed_points(&[g]), f))
                    .collect();
                if fixed.iter().all(|(_, p, _)| p.is_empty()) {
                    return Ok(None);
                }
                let c = h.centralizer(&[g]);
                let cells = fixed
                    .into_iter()
                    .map(|(d, p, f)| (d, f.view(p, c.clone())))
                    .collect();
                let sub = x.with_cells(c, cells);
                self.run(&sub, k - 1).map(Some)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut total: Option<Vec<Int>> = None;
        for v in parts.into_iter().flatten() {
            match &mut total {
                None => total = Some(v),
                Some(t) => t.iter_mut().zip(&v).for_each(|(a, b)| *a += b),
            }
        }
        let total = match total {
            Some(t) => t,
            None => (self.leaf)(&x.with_cells(h.clone(), vec![]))?,
        };
        self.memo
            .lock()
            .expect("memo lock")
            .insert(key, total.clone());
        Ok(total)
    }
}
