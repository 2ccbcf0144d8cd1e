//! Finite cell-list spaces: disjoint unions of open cells `σ^d × F`, with the
//! groups acting only on the finite factor `F`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{make_group, Elem, FiniteGroup, GroupDescriptor, Subgroup};
use crate::gset::{BiSet, BiSetDescriptor};
use crate::Int;

#[derive(Clone, Debug)]
pub struct CellSpace {
    g_o: Subgroup,
    g_b: Arc<FiniteGroup>,
    cells: Vec<(usize, BiSet)>,
}

impl CellSpace {
    /// Cells must all be acted on by the same O-subgroup and the same `G_B`.
    pub fn new(g_o: Subgroup, g_b: Arc<FiniteGroup>, cells: Vec<(usize, BiSet)>) -> Result<Self> {
        for (i, (_, f)) in cells.iter().enumerate() {
            let same_o = f.g_o().same_as(&g_o);
            let same_b = Arc::ptr_eq(f.g_b(), &g_b) || f.g_b().same_as(&g_b);
            if !same_o || !same_b {
                return Err(Error::GroupMismatch(format!(
                    "cell {i} is acted on by different groups"
                )));
            }
        }
        Ok(CellSpace { g_o, g_b, cells })
    }

    pub fn empty(g_o: &Arc<FiniteGroup>, g_b: &Arc<FiniteGroup>) -> Self {
        CellSpace {
            g_o: Subgroup::whole(g_o),
            g_b: g_b.clone(),
            cells: vec![],
        }
    }

    /// A single `0`-cell times `x`.
    pub fn from_biset(x: &BiSet) -> Self {
        Self::cell(0, x)
    }

    pub fn cell(dim: usize, x: &BiSet) -> Self {
        CellSpace {
            g_o: x.g_o().clone(),
            g_b: x.g_b().clone(),
            cells: vec![(dim, x.clone())],
        }
    }

    pub fn cells(&self) -> &[(usize, BiSet)] {
        &self.cells
    }

    pub fn g_o(&self) -> &Subgroup {
        &self.g_o
    }

    pub fn g_b(&self) -> &Arc<FiniteGroup> {
        &self.g_b
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(|(_, f)| f.is_empty())
    }

    /// `Σ (−1)^dim·|F|`.
    pub fn chi(&self) -> Int {
        self.cells
            .iter()
            .map(|(d, f)| sign(*d) * f.size() as Int)
            .sum()
    }

    pub fn fixed_cells(&self, tuple: &[Elem]) -> Result<CellSpace> {
        let cells = self
            .cells
            .iter()
            .map(|(d, f)| Ok((*d, f.fixed_set(tuple)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(CellSpace {
            g_o: self.g_o.centralizer(tuple),
            g_b: self.g_b.clone(),
            cells,
        })
    }

    pub fn quotient_cells(&self, k: &Subgroup) -> Result<CellSpace> {
        let cells = self
            .cells
            .iter()
            .map(|(d, f)| Ok((*d, f.quotient_by(k)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(CellSpace {
            g_o: self.g_o.clone(),
            g_b: self.g_b.clone(),
            cells,
        })
    }

    pub(crate) fn with_cells(&self, g_o: Subgroup, cells: Vec<(usize, BiSet)>) -> CellSpace {
        CellSpace {
            g_o,
            g_b: self.g_b.clone(),
            cells,
        }
    }

    pub fn disjoint_union(&self, other: &CellSpace) -> Result<CellSpace> {
        let mut cells = self.cells.clone();
        cells.extend(other.cells.iter().cloned());
        CellSpace::new(self.g_o.clone(), self.g_b.clone(), cells)
    }

    /// Diagonal product: `(d₁, F₁) × (d₂, F₂) = (d₁ + d₂, F₁ × F₂)`.
    pub fn product(&self, other: &CellSpace) -> Result<CellSpace> {
        let mut cells = Vec::with_capacity(self.cells.len() * other.cells.len());
        for (d1, f1) in &self.cells {
            for (d2, f2) in &other.cells {
                cells.push((d1 + d2, f1.product(f2)?));
            }
        }
        CellSpace::new(self.g_o.clone(), self.g_b.clone(), cells)
    }
}

pub(crate) fn sign(dim: usize) -> Int {
    if dim % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Anything the Euler characteristics accept.
pub trait AsCells {
    fn as_cells(&self) -> CellSpace;
}

impl AsCells for CellSpace {
    fn as_cells(&self) -> CellSpace {
        self.clone()
    }
}

impl AsCells for BiSet {
    fn as_cells(&self) -> CellSpace {
        CellSpace::from_biset(self)
    }
}

/// JSON form: `{"gO":…,"gB":…,"cells":[{"dim":1,"biset":{…}},…]}`. The
/// groups may be omitted when there is at least one cell; every cell must
/// name the same groups.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct CellSpaceDescriptor {
    #[serde(rename = "gO", default)]
    pub g_o: Option<GroupDescriptor>,
    #[serde(rename = "gB", default)]
    pub g_b: Option<GroupDescriptor>,
    pub cells: Vec<CellDescriptor>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct CellDescriptor {
    pub dim: usize,
    pub biset: BiSetDescriptor,
}

pub fn make_cellspace(desc: &CellSpaceDescriptor) -> Result<CellSpace> {
    let go_desc = desc
        .g_o
        .clone()
        .or_else(|| desc.cells.first().map(|c| c.biset.g_o.clone()))
        .ok_or_else(|| Error::usage("cell space without cells must name gO"))?;
    let gb_desc = desc
        .g_b
        .clone()
        .or_else(|| desc.cells.first().map(|c| c.biset.g_b.clone()))
        .ok_or_else(|| Error::usage("cell space without cells must name gB"))?;
    let g_o = make_group(&go_desc)?;
    let g_b = make_group(&gb_desc)?;
    let mut cells = Vec::with_capacity(desc.cells.len());
    for (i, c) in desc.cells.iter().enumerate() {
        if c.biset.g_o != go_desc || c.biset.g_b != gb_desc {
            return Err(Error::GroupMismatch(format!("cell {i} names different groups")));
        }
        let f = BiSet::from_generator_actions(&g_o, &g_b, c.biset.size, &c.biset.act_o, &c.biset.act_b)
            .map_err(|e| Error::usage(format!("cells[{i}].biset: {e}")))?;
        cells.push((c.dim, f));
    }
    CellSpace::new(Subgroup::whole(&g_o), g_b, cells)
}
