//! Doubly graded modules seen through a finite window.
//!
//! [`GradedModule`] is the interface shared by coset modules of one lattice
//! and tensor products of such modules. [`WindowRep`] materializes the
//! doubly homogeneous cells inside a [`CellWindow`] together with the matrices
//! of a finite operator sample between them; the irreducibility, commutant and
//! grading checks all run on this representation.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Debug;

use num_traits::Zero;

use crate::error::{ModuleError, VertexError};
use crate::linalg::SparseMatrix;
use crate::lincomb::LinComb;
use crate::scalar::{frac_int, Frac};

/// One doubly homogeneous subspace `W^{(β)}_{(n)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell<S> {
    pub sector: S,
    pub weight: Frac,
}

/// A finite set of sectors and a weight bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellWindow<S> {
    pub max_weight: Frac,
    pub sectors: Vec<S>,
}

impl<S> CellWindow<S> {
    pub fn new(max_weight: Frac, sectors: Vec<S>) -> Self {
        Self {
            max_weight,
            sectors,
        }
    }
}

pub trait GradedModule {
    type Sector: Clone + Ord + Debug;
    type Key: Clone + Ord + Debug;
    type Op: Clone + Debug;

    /// Whether `sector` carries a nonzero subspace of this module.
    fn has_sector(&self, sector: &Self::Sector) -> bool;

    /// Lowest weight occurring in `sector`; all weights lie in `min + ℤ≥0`.
    fn min_weight(&self, sector: &Self::Sector) -> Frac;

    fn cell_basis(&self, sector: &Self::Sector, weight: Frac) -> Vec<Self::Key>;

    fn degree(&self, key: &Self::Key) -> Cell<Self::Sector>;

    /// Cell that `op` maps `cell` into.
    fn op_target(&self, op: &Self::Op, cell: &Cell<Self::Sector>) -> Cell<Self::Sector>;

    /// Applies `op` to each key; the computation may share caches across keys.
    fn apply_batch(
        &self,
        op: &Self::Op,
        keys: &[Self::Key],
    ) -> Result<Vec<LinComb<Self::Key>>, VertexError>;

    /// Number of commuting zero modes `h_i(0)` spanning the Cartan part.
    fn cartan_rank(&self) -> usize;

    /// `h_i(0)` on a basis key.
    fn apply_cartan(&self, i: usize, key: &Self::Key) -> LinComb<Self::Key>;

    /// Pairing `⟨h_i, β⟩` of the `(𝔥, Ã)`-grading.
    fn pairing(&self, i: usize, sector: &Self::Sector) -> Frac;

    /// Default operator sample for a window.
    fn default_sample(&self, window: &CellWindow<Self::Sector>) -> Vec<Self::Op>;

    fn describe_op(&self, op: &Self::Op) -> String;

    /// Dimension of a cell; implementors may count without enumerating.
    fn cell_dimension(&self, sector: &Self::Sector, weight: Frac) -> u64 {
        self.cell_basis(sector, weight).len() as u64
    }

    /// All nonempty cells of the window, ordered by (weight, sector).
    fn window_cells(&self, window: &CellWindow<Self::Sector>) -> Vec<Cell<Self::Sector>> {
        let mut cells = Vec::new();
        for s in window.sectors.iter().filter(|s| self.has_sector(s)) {
            let mut w = self.min_weight(s);
            while w <= window.max_weight {
                if !self.cell_basis(s, w).is_empty() {
                    cells.push(Cell {
                        sector: s.clone(),
                        weight: w,
                    });
                }
                w += frac_int(1);
            }
        }
        cells.sort_by(|a, b| (a.weight, &a.sector).cmp(&(b.weight, &b.sector)));
        cells.dedup();
        cells
    }
}

/// Matrix of one sampled operator restricted to one source cell.
#[derive(Clone, Debug)]
pub struct OpBlock {
    pub op: usize,
    pub source: usize,
    pub target: usize,
    pub matrix: SparseMatrix,
}

/// Cells of a window with their bases and the sampled operator blocks
/// between cells that both lie in the window.
#[derive(Clone, Debug)]
pub struct WindowRep<S, K> {
    pub cells: Vec<Cell<S>>,
    pub bases: Vec<Vec<K>>,
    pub blocks: Vec<OpBlock>,
    pub op_names: Vec<String>,
}

impl<S: Clone + Ord + Debug, K: Clone + Ord + Debug> WindowRep<S, K> {
    pub fn build<M>(module: &M, window: &CellWindow<S>, ops: &[M::Op]) -> Result<Self, ModuleError>
    where
        M: GradedModule<Sector = S, Key = K>,
    {
        let cells = module.window_cells(window);
        let bases: Vec<Vec<K>> = cells
            .iter()
            .map(|c| module.cell_basis(&c.sector, c.weight))
            .collect();
        let index: BTreeMap<&Cell<S>, usize> =
            cells.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let key_index: Vec<BTreeMap<&K, usize>> = bases
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, k)| (k, i)).collect())
            .collect();
        let mut blocks = Vec::new();
        for (oi, op) in ops.iter().enumerate() {
            for (ci, cell) in cells.iter().enumerate() {
                let tcell = module.op_target(op, cell);
                let Some(&ti) = index.get(&tcell) else {
                    continue;
                };
                let images = module.apply_batch(op, &bases[ci])?;
                let mut matrix = SparseMatrix::zeros(bases[ti].len(), bases[ci].len());
                for (j, img) in images.iter().enumerate() {
                    for (k, c) in img.iter() {
                        let &row = key_index[ti].get(k).ok_or(ModuleError::NotHomogeneous)?;
                        matrix.cols[j].push((row, c.clone()));
                    }
                }
                if matrix.nnz() > 0 {
                    blocks.push(OpBlock {
                        op: oi,
                        source: ci,
                        target: ti,
                        matrix,
                    });
                }
            }
        }
        Ok(Self {
            cells,
            bases,
            blocks,
            op_names: ops.iter().map(|o| module.describe_op(o)).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.bases.iter().map(Vec::len).sum()
    }

    pub fn cell_index(&self, cell: &Cell<S>) -> Option<usize> {
        self.cells.iter().position(|c| c == cell)
    }

    /// Lowest cell: minimal weight, ties broken by sector order.
    pub fn lowest_cell(&self) -> Option<usize> {
        (0..self.cells.len()).min_by(|&a, &b| {
            let (ca, cb) = (&self.cells[a], &self.cells[b]);
            (ca.weight, &ca.sector).cmp(&(cb.weight, &cb.sector))
        })
    }
}

/// Checks that applying each op to each window cell produces only terms of
/// the predicted degree (the double grading of the operator algebra).
pub fn check_ops_homogeneous<M: GradedModule>(
    module: &M,
    window: &CellWindow<M::Sector>,
    ops: &[M::Op],
) -> Result<(u64, Vec<String>), VertexError> {
    let mut checked = 0;
    let mut failures = Vec::new();
    for op in ops {
        for cell in module.window_cells(window) {
            let target = module.op_target(op, &cell);
            if target.weight > window.max_weight {
                continue;
            }
            let basis = module.cell_basis(&cell.sector, cell.weight);
            for (key, img) in basis.iter().zip(module.apply_batch(op, &basis)?) {
                checked += 1;
                if img.keys().any(|k| module.degree(k) != target) {
                    failures.push(alloc::format!("{} on {:?}", module.describe_op(op), key));
                }
            }
        }
    }
    Ok((checked, failures))
}

/// `true` iff `weight - min_weight(sector)` is a nonnegative integer.
pub fn on_weight_grid<M: GradedModule>(module: &M, sector: &M::Sector, weight: Frac) -> bool {
    let off = weight - module.min_weight(sector);
    off.is_integer() && off >= Frac::zero()
}
