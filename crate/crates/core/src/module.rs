//! Coset modules `V_{L+β}` and windowed module theory.
//!
//! All verdicts here are "at window": they are exact statements about the
//! finite set of doubly homogeneous cells in a [`CellWindow`] and the matrices
//! of a finite operator sample between them.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::axioms::CheckReport;
use crate::characters::{character_series, colored_partition_count, CharacterSeries};
use crate::error::{ModuleError, VertexError};
use crate::fock::{basis_mode_act, basis_of, weight_of, FockMonomial, StateVector};
use crate::graded::{Cell, CellWindow, GradedModule, WindowRep};
use crate::lattice::{DualCoset, EvenLattice, Sector};
use crate::linalg::{solve_parametrized, Echelon, LinForm, Params, SparseMatrix};
use crate::lincomb::LinComb;
use crate::scalar::{floor, frac_int, Frac, Q};
use crate::tensor::TensorModule;
use crate::vertex::{ModeEngine, TruncationWindow};

/// A generator of the sampled operator algebra on a lattice module.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LatticeOp {
    /// `b_color(n)`, the modes of `b_color(-1)1`.
    Heisenberg { color: u16, n: i64 },
    /// `source_mode` for a basis monomial `source` of `V_L`.
    Vertex { source: FockMonomial, mode: i64 },
    /// `L(n) = ω_{n+1}`.
    Virasoro(i64),
}

/// The direct sum `⊕ V_{L+β_i}` over distinct cosets `β_i + L`.
///
/// A single coset gives the irreducible module `V_{L+β}`; the zero coset
/// alone gives `V_L` as a module over itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeModule {
    lattice: EvenLattice,
    cosets: Vec<DualCoset>,
}

pub fn build_coset_module(
    lattice: &EvenLattice,
    beta: &Sector,
) -> Result<LatticeModule, ModuleError> {
    let coset = lattice.dual_coset(beta).ok_or(ModuleError::NotInDual)?;
    Ok(LatticeModule {
        lattice: lattice.clone(),
        cosets: vec![coset],
    })
}

impl LatticeModule {
    /// `V_L` as a module over itself.
    pub fn algebra(lattice: &EvenLattice) -> Self {
        build_coset_module(lattice, &Sector::zero(lattice.rank())).expect("zero is in the dual")
    }

    /// `V_{L°}`, the sum over all of `L°/L`, presented un-split.
    pub fn dual_module(lattice: &EvenLattice) -> Self {
        Self {
            lattice: lattice.clone(),
            cosets: lattice.discriminant_group(),
        }
    }

    /// The zero module (no cosets).
    pub fn zero(lattice: &EvenLattice) -> Self {
        Self {
            lattice: lattice.clone(),
            cosets: Vec::new(),
        }
    }

    /// Direct sum with another module of the same lattice; cosets must be distinct.
    pub fn direct_sum(&self, other: &LatticeModule) -> Result<LatticeModule, ModuleError> {
        assert_eq!(
            self.lattice, other.lattice,
            "direct sum over different lattices"
        );
        let mut cosets = self.cosets.clone();
        for c in &other.cosets {
            if cosets.iter().any(|d| d.rep == c.rep) {
                return Err(ModuleError::NotDecomposableAtWindow);
            }
            cosets.push(c.clone());
        }
        Ok(Self {
            lattice: self.lattice.clone(),
            cosets,
        })
    }

    pub fn lattice(&self) -> &EvenLattice {
        &self.lattice
    }

    pub fn cosets(&self) -> &[DualCoset] {
        &self.cosets
    }

    /// The coset of an irreducible module (the first coset of a sum).
    pub fn coset(&self) -> Option<&DualCoset> {
        self.cosets.first()
    }

    /// Sectors `β_i + λ`, `|λ_j| <= radius`, over all cosets.
    pub fn sectors_in_box(&self, radius: i64) -> Vec<Sector> {
        self.cosets
            .iter()
            .flat_map(|c| self.lattice.sectors_in_box(&c.rep, radius))
            .collect()
    }

    pub fn window(&self, max_weight: Frac, radius: i64) -> CellWindow<Sector> {
        CellWindow::new(max_weight, self.sectors_in_box(radius))
    }

    /// Weight and sector shift of an operator.
    pub fn op_shift(&self, op: &LatticeOp) -> (Frac, Sector) {
        let r = self.lattice.rank();
        match op {
            LatticeOp::Heisenberg { n, .. } => (frac_int(-n), Sector::zero(r)),
            LatticeOp::Virasoro(n) => (frac_int(-n), Sector::zero(r)),
            LatticeOp::Vertex { source, mode } => (
                weight_of(&self.lattice, source) - frac_int(mode + 1),
                source.sector.clone(),
            ),
        }
    }

    /// Applies an operator to state vectors of this module, with the engine
    /// window set to `max_weight`.
    pub fn apply_op(
        &self,
        op: &LatticeOp,
        w: &StateVector,
        max_weight: Frac,
    ) -> Result<StateVector, VertexError> {
        let mut engine = ModeEngine::new(
            &self.lattice,
            TruncationWindow {
                max_weight,
                sector_box: None,
            },
        );
        self.apply_with(&mut engine, op, w)
    }

    pub(crate) fn apply_with(
        &self,
        engine: &mut ModeEngine<'_>,
        op: &LatticeOp,
        w: &StateVector,
    ) -> Result<StateVector, VertexError> {
        match op {
            LatticeOp::Heisenberg { color, n } => {
                let mut out = StateVector::zero();
                for (m, c) in w.iter() {
                    out.add_scaled(&basis_mode_act(&self.lattice, *color, *n, m), c);
                }
                Ok(out)
            }
            LatticeOp::Vertex { source, mode } => engine.apply_monomial(source, *mode, w),
            LatticeOp::Virasoro(n) => engine.virasoro(*n, w),
        }
    }

    /// Default generators: `b_i(n)` for `|n| <= height`, modes of
    /// `ι(e_{±b_i})` whose weight shift is at most `height` in absolute value,
    /// and `L(n)` for `|n| <= 2`.
    pub fn sample_for_height(&self, height: i64) -> Vec<LatticeOp> {
        let r = self.lattice.rank();
        let mut ops = Vec::new();
        for color in 0..r as u16 {
            for n in -height..=height {
                ops.push(LatticeOp::Heisenberg { color, n });
            }
        }
        for i in 0..r {
            for sign in [1i64, -1] {
                let mut c = vec![0i64; r];
                c[i] = sign;
                let source = FockMonomial::top(Sector::from_ints(&c));
                let wt = self.lattice.half_norm(&source.sector).to_integer();
                // shift = wt - mode - 1
                for mode in (wt - 1 - height)..=(wt - 1 + height) {
                    ops.push(LatticeOp::Vertex {
                        source: source.clone(),
                        mode,
                    });
                }
            }
        }
        for n in -2..=2 {
            ops.push(LatticeOp::Virasoro(n));
        }
        ops
    }
}

impl GradedModule for LatticeModule {
    type Sector = Sector;
    type Key = FockMonomial;
    type Op = LatticeOp;

    fn has_sector(&self, sector: &Sector) -> bool {
        sector.rank() == self.lattice.rank()
            && self.lattice.in_dual(sector)
            && self
                .cosets
                .iter()
                .any(|c| self.lattice.same_coset(&c.rep, sector))
    }

    fn min_weight(&self, sector: &Sector) -> Frac {
        self.lattice.half_norm(sector)
    }

    fn cell_basis(&self, sector: &Sector, weight: Frac) -> Vec<FockMonomial> {
        if !self.has_sector(sector) {
            return Vec::new();
        }
        basis_of(&self.lattice, sector, weight)
    }

    fn degree(&self, key: &FockMonomial) -> Cell<Sector> {
        Cell {
            sector: key.sector.clone(),
            weight: weight_of(&self.lattice, key),
        }
    }

    fn op_target(&self, op: &LatticeOp, cell: &Cell<Sector>) -> Cell<Sector> {
        let (dw, ds) = self.op_shift(op);
        Cell {
            sector: cell.sector.add(&ds),
            weight: cell.weight + dw,
        }
    }

    fn apply_batch(
        &self,
        op: &LatticeOp,
        keys: &[FockMonomial],
    ) -> Result<Vec<StateVector>, VertexError> {
        let (dw, _) = self.op_shift(op);
        let max_weight = keys
            .iter()
            .map(|k| weight_of(&self.lattice, k) + dw)
            .max()
            .unwrap_or_else(Frac::zero);
        let mut engine = ModeEngine::new(
            &self.lattice,
            TruncationWindow {
                max_weight,
                sector_box: None,
            },
        );
        keys.iter()
            .map(|k| self.apply_with(&mut engine, op, &StateVector::basis(k.clone())))
            .collect()
    }

    fn cartan_rank(&self) -> usize {
        self.lattice.rank()
    }

    fn apply_cartan(&self, i: usize, key: &FockMonomial) -> StateVector {
        basis_mode_act(&self.lattice, i as u16, 0, key)
    }

    fn pairing(&self, i: usize, sector: &Sector) -> Frac {
        self.lattice.pairings(sector)[i]
    }

    fn default_sample(&self, window: &CellWindow<Sector>) -> Vec<LatticeOp> {
        let lowest = window
            .sectors
            .iter()
            .filter(|s| self.has_sector(s))
            .map(|s| self.min_weight(s))
            .min()
            .unwrap_or_else(Frac::zero);
        let height = (-floor(lowest - window.max_weight)).max(1);
        self.sample_for_height(height)
    }

    fn describe_op(&self, op: &LatticeOp) -> String {
        match op {
            LatticeOp::Heisenberg { color, n } => format!("b{}({})", color + 1, n),
            LatticeOp::Vertex { source, mode } => format!("[{source}]_{mode}"),
            LatticeOp::Virasoro(n) => format!("L({n})"),
        }
    }

    fn cell_dimension(&self, sector: &Sector, weight: Frac) -> u64 {
        lattice_cell_dimension(self, sector, weight)
    }
}

/// Cell dimension via the partition-count route, independent of enumeration.
pub fn lattice_cell_dimension(module: &LatticeModule, sector: &Sector, weight: Frac) -> u64 {
    if !module.has_sector(sector) {
        return 0;
    }
    let off = weight - module.lattice.half_norm(sector);
    if !off.is_integer() || off < Frac::zero() {
        return 0;
    }
    colored_partition_count(module.lattice.rank(), off.to_integer() as u64)
}

/// A finite generating sample of the operator algebra `A(V; W)`.
#[derive(Clone, Debug)]
pub struct OperatorSample<Op> {
    pub generators: Vec<Op>,
    /// Maximal number of generator applications in a closure word.
    pub closure_depth: usize,
}

impl<Op> OperatorSample<Op> {
    pub fn new(generators: Vec<Op>, closure_depth: usize) -> Self {
        Self {
            generators,
            closure_depth,
        }
    }
}

pub const DEFAULT_DEPTH: usize = 64;

pub fn default_sample<M: GradedModule>(
    module: &M,
    window: &CellWindow<M::Sector>,
) -> OperatorSample<M::Op> {
    OperatorSample::new(module.default_sample(window), DEFAULT_DEPTH)
}

/// Per-cell basis of an invariant subspace, in cell-basis coordinates.
#[derive(Clone, Debug)]
pub struct InvariantSubspace<S> {
    pub cells: Vec<(Cell<S>, Vec<Vec<Q>>)>,
}

impl<S> InvariantSubspace<S> {
    pub fn dim(&self) -> usize {
        self.cells.iter().map(|(_, b)| b.len()).sum()
    }
}

#[derive(Clone, Debug)]
pub enum Verdict<S> {
    IrreducibleAtWindow,
    Reducible(InvariantSubspace<S>),
}

impl<S> Verdict<S> {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Verdict::IrreducibleAtWindow)
    }
}

#[derive(Clone, Debug)]
pub struct IrreducibilityReport<S> {
    pub verdict: Verdict<S>,
    pub cells: usize,
    pub dim: usize,
    /// The lowest cell that every nonzero vector was shown to reach.
    pub lowest: Option<Cell<S>>,
    pub generators: usize,
    pub closure_depth: usize,
}

struct Closure {
    spans: Vec<Echelon>,
    converged: bool,
}

fn forward_closure<S, K>(
    rep: &WindowRep<S, K>,
    seeds: Vec<(usize, Vec<Q>)>,
    depth: usize,
) -> Closure {
    let mut spans: Vec<Echelon> = rep.bases.iter().map(|b| Echelon::new(b.len())).collect();
    let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); rep.cells.len()];
    for (bi, b) in rep.blocks.iter().enumerate() {
        by_source[b.source].push(bi);
    }
    let mut queue: VecDeque<(usize, Vec<Q>, usize)> = VecDeque::new();
    for (c, v) in seeds {
        if spans[c].insert(v.clone()) {
            queue.push_back((c, v, 0));
        }
    }
    let mut converged = true;
    while let Some((c, v, d)) = queue.pop_front() {
        if d >= depth {
            converged = false;
            continue;
        }
        for &bi in &by_source[c] {
            let b = &rep.blocks[bi];
            if spans[b.target].is_full() {
                continue;
            }
            let img = b.matrix.mul_vec(&v);
            if spans[b.target].insert(img.clone()) {
                queue.push_back((b.target, img, d + 1));
            }
        }
    }
    Closure { spans, converged }
}

/// Annihilator rows `A_c` with `ker A_c` = vectors of cell `c` that never
/// reach `target` with a nonzero component.
fn co_reach<S, K>(rep: &WindowRep<S, K>, target: usize, depth: usize) -> Closure {
    let mut spans: Vec<Echelon> = rep.bases.iter().map(|b| Echelon::new(b.len())).collect();
    let mut by_target: Vec<Vec<usize>> = vec![Vec::new(); rep.cells.len()];
    for (bi, b) in rep.blocks.iter().enumerate() {
        by_target[b.target].push(bi);
    }
    spans[target] = Echelon::full(rep.bases[target].len());
    let mut queue: VecDeque<(usize, Vec<Q>, usize)> = spans[target]
        .rows()
        .iter()
        .map(|r| (target, r.clone(), 0))
        .collect();
    let mut converged = true;
    while let Some((c, f, d)) = queue.pop_front() {
        if d >= depth {
            converged = false;
            continue;
        }
        for &bi in &by_target[c] {
            let b = &rep.blocks[bi];
            if spans[b.source].is_full() {
                continue;
            }
            let pulled = b.matrix.row_mul(&f);
            if spans[b.source].insert(pulled.clone()) {
                queue.push_back((b.source, pulled, d + 1));
            }
        }
    }
    Closure { spans, converged }
}

fn unit(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

fn certificate<S: Clone, K>(rep: &WindowRep<S, K>, closure: &Closure) -> InvariantSubspace<S> {
    InvariantSubspace {
        cells: rep
            .cells
            .iter()
            .zip(&closure.spans)
            .filter(|(_, e)| e.rank() > 0)
            .map(|(c, e)| (c.clone(), e.rows().to_vec()))
            .collect(),
    }
}

/// Windowed irreducibility of a module under a sampled operator closure.
///
/// Irreducible-at-window means: the closure of the lowest cell's vector spans
/// every cell of the window, and from every cell the closure maps each nonzero
/// vector to a nonzero vector of the lowest cell. Reducible carries the
/// invariant subspace generated by a vector of the lowest cell.
pub fn irreducibility_check<M: GradedModule>(
    module: &M,
    sample: &OperatorSample<M::Op>,
    window: &CellWindow<M::Sector>,
) -> Result<IrreducibilityReport<M::Sector>, ModuleError> {
    let rep = WindowRep::build(module, window, &sample.generators)?;
    irreducibility_of_rep(&rep, sample)
}

pub fn irreducibility_of_rep<
    S: Clone + Ord + core::fmt::Debug,
    K: Clone + Ord + core::fmt::Debug,
    Op,
>(
    rep: &WindowRep<S, K>,
    sample: &OperatorSample<Op>,
) -> Result<IrreducibilityReport<S>, ModuleError> {
    let mut report = IrreducibilityReport {
        verdict: Verdict::IrreducibleAtWindow,
        cells: rep.cells.len(),
        dim: rep.dim(),
        lowest: None,
        generators: sample.generators.len(),
        closure_depth: sample.closure_depth,
    };
    let Some(t) = rep.lowest_cell() else {
        // the zero module has no proper nonzero submodule to exhibit
        return Err(ModuleError::InsufficientSample);
    };
    report.lowest = Some(rep.cells[t].clone());
    let dt = rep.bases[t].len();
    for k in 0..dt {
        let fwd = forward_closure(rep, vec![(t, unit(dt, k))], sample.closure_depth);
        if !fwd.spans.iter().all(Echelon::is_full) {
            if fwd.converged {
                report.verdict = Verdict::Reducible(certificate(rep, &fwd));
                return Ok(report);
            }
            return Err(ModuleError::InsufficientSample);
        }
    }
    let back = co_reach(rep, t, sample.closure_depth);
    if dt == 1 && back.spans.iter().all(Echelon::is_full) {
        return Ok(report);
    }
    Err(ModuleError::InsufficientSample)
}

/// Which linear maps the commutant ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommutantMode {
    /// Maps preserving every cell (weight and sector).
    Graded,
    /// Maps preserving weight only; sectors may mix.
    Ungraded,
}

/// Dimension of the space of linear maps on the windowed module that commute
/// with every sampled operator between window cells.
pub fn commutant_dimension<M: GradedModule>(
    module: &M,
    sample: &OperatorSample<M::Op>,
    window: &CellWindow<M::Sector>,
    mode: CommutantMode,
) -> Result<usize, ModuleError> {
    let rep = WindowRep::build(module, window, &sample.generators)?;
    let outside = outside_pairs(module, window, &rep, &sample.generators);
    Ok(commutant_of_rep(&rep, mode, &outside))
}

/// `(op, cell)` pairs whose target cell lies outside the window.
fn outside_pairs<M: GradedModule>(
    module: &M,
    _window: &CellWindow<M::Sector>,
    rep: &WindowRep<M::Sector, M::Key>,
    ops: &[M::Op],
) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for (oi, op) in ops.iter().enumerate() {
        for (ci, c) in rep.cells.iter().enumerate() {
            if rep.cell_index(&module.op_target(op, c)).is_none() {
                out.insert((oi, ci));
            }
        }
    }
    out
}

struct GroupOp {
    source: usize,
    target: usize,
    matrix: SparseMatrix,
}

fn commutant_of_rep<S: Clone + Ord + core::fmt::Debug, K>(
    rep: &WindowRep<S, K>,
    mode: CommutantMode,
    outside: &BTreeSet<(usize, usize)>,
) -> usize {
    if rep.cells.is_empty() {
        return 0;
    }
    // groups of cells and each cell's (group, offset)
    let mut groups: Vec<Vec<usize>> = Vec::new();
    match mode {
        CommutantMode::Graded => groups.extend((0..rep.cells.len()).map(|c| vec![c])),
        CommutantMode::Ungraded => {
            let mut by_weight: BTreeMap<Frac, Vec<usize>> = BTreeMap::new();
            for (i, c) in rep.cells.iter().enumerate() {
                by_weight.entry(c.weight).or_default().push(i);
            }
            groups.extend(by_weight.into_values());
        }
    }
    let mut place = vec![(0usize, 0usize); rep.cells.len()];
    let mut gdims = Vec::new();
    for (g, members) in groups.iter().enumerate() {
        let mut off = 0;
        for &c in members {
            place[c] = (g, off);
            off += rep.bases[c].len();
        }
        gdims.push(off);
    }

    // assemble group-level operator matrices
    let nops = rep.op_names.len();
    let mut gops: Vec<GroupOp> = Vec::new();
    for oi in 0..nops {
        for (g, members) in groups.iter().enumerate() {
            if members.iter().any(|c| outside.contains(&(oi, *c))) {
                continue;
            }
            let blocks: Vec<_> = rep
                .blocks
                .iter()
                .filter(|b| b.op == oi && place[b.source].0 == g)
                .collect();
            if blocks.is_empty() {
                continue;
            }
            let tg = place[blocks[0].target].0;
            let mut m = SparseMatrix::zeros(gdims[tg], gdims[g]);
            for b in blocks {
                debug_assert_eq!(place[b.target].0, tg);
                let (so, to) = (place[b.source].1, place[b.target].1);
                for (j, col) in b.matrix.cols.iter().enumerate() {
                    m.cols[so + j].extend(col.iter().map(|(i, c)| (to + i, c.clone())));
                }
            }
            gops.push(GroupOp {
                source: g,
                target: tg,
                matrix: m,
            });
        }
    }

    let ng = groups.len();
    let mut params = Params::default();
    let mut x: Vec<Option<Vec<Vec<LinForm>>>> = vec![None; ng];
    let mut constraints: Vec<LinForm> = Vec::new();
    let order_key = |g: usize| {
        let c = &rep.cells[groups[g][0]];
        (c.weight, c.sector.clone())
    };
    // seed the lowest undetermined group with free parameters
    while let Some(seed) = (0..ng)
        .filter(|&g| x[g].is_none())
        .min_by_key(|&g| order_key(g))
    {
        let d = gdims[seed];
        x[seed] = Some(
            (0..d)
                .map(|_| (0..d).map(|_| params.fresh()).collect())
                .collect(),
        );
        // propagate: determine groups that map into determined ones
        loop {
            let mut progressed = false;
            for g in 0..ng {
                if x[g].is_some() {
                    continue;
                }
                let into: Vec<&GroupOp> = gops
                    .iter()
                    .filter(|o| o.source == g && x[o.target].is_some())
                    .collect();
                if into.is_empty() {
                    continue;
                }
                let d = gdims[g];
                let mut eqs = Vec::new();
                let mut rank_probe = Echelon::new(d);
                for o in into {
                    if rank_probe.is_full() {
                        break;
                    }
                    let xt = x[o.target].as_ref().expect("determined");
                    // M X_g = X_t M
                    let rhs = left_mul_forms(xt, &o.matrix);
                    let dense = o.matrix.to_dense_rows();
                    for (row, r) in dense.into_iter().zip(rhs) {
                        rank_probe.insert(row.clone());
                        eqs.push((row, r));
                    }
                }
                let (sol, cons) = solve_parametrized(d, d, eqs, &mut params);
                constraints.extend(cons);
                x[g] = Some(sol);
                progressed = true;
            }
            if !progressed {
                break;
            }
        }
    }

    // every commutation relation between window groups
    let p = params.count();
    let mut system = Echelon::new(p);
    let dense_form = |f: &LinForm| -> Vec<Q> {
        let mut v = vec![Q::zero(); p];
        for (i, c) in f.iter() {
            v[*i] = c.clone();
        }
        v
    };
    for f in &constraints {
        system.insert(dense_form(f));
    }
    for o in &gops {
        if system.is_full() {
            break;
        }
        let xs = x[o.source].as_ref().expect("all groups determined");
        let xt = x[o.target].as_ref().expect("all groups determined");
        let mut diff = left_mul_forms(xt, &o.matrix);
        // subtract M X_s
        for (t, col) in o.matrix.cols.iter().enumerate() {
            for (i, c) in col {
                for (j, entry) in diff[*i].iter_mut().enumerate() {
                    entry.add_scaled(&xs[t][j], &-c.clone());
                }
            }
        }
        for row in diff {
            for f in row {
                if !f.is_zero() {
                    system.insert(dense_form(&f));
                }
            }
        }
    }
    p - system.rank()
}

/// `X · M` for a matrix of linear forms `X` (d'×d') and sparse `M` (d'×d).
fn left_mul_forms(x: &[Vec<LinForm>], m: &SparseMatrix) -> Vec<Vec<LinForm>> {
    let mut out = vec![vec![LinForm::zero(); m.ncols]; m.nrows];
    for (j, col) in m.cols.iter().enumerate() {
        for (t, c) in col {
            for (i, row) in x.iter().enumerate() {
                out[i][j].add_scaled(&row[*t], c);
            }
        }
    }
    out
}

/// Verifies that each windowed sector is the simultaneous `h_i(0)`-eigenspace
/// with eigenvalues `⟨h_i, β⟩`, and that the pairing separates the sectors.
pub fn h0_eigenspace_grading<M: GradedModule>(
    module: &M,
    window: &CellWindow<M::Sector>,
) -> CheckReport {
    let mut report = CheckReport::new("h0-eigenspace-grading");
    let mut seen: BTreeMap<Vec<Frac>, M::Sector> = BTreeMap::new();
    for cell in module.window_cells(window) {
        let eig: Vec<Frac> = (0..module.cartan_rank())
            .map(|i| module.pairing(i, &cell.sector))
            .collect();
        if let Some(prev) = seen.insert(eig.clone(), cell.sector.clone()) {
            if prev != cell.sector {
                report.fail(
                    format!("pairing does not separate {prev:?} and {:?}", cell.sector),
                    "",
                    "",
                );
            }
        }
        for key in module.cell_basis(&cell.sector, cell.weight) {
            for (i, e) in eig.iter().enumerate() {
                report.checked();
                let lhs = module.apply_cartan(i, &key);
                let rhs = LinComb::term(key.clone(), crate::scalar::q_frac(*e));
                if lhs != rhs {
                    report.fail(
                        format!("h{}(0) on {key:?}", i + 1),
                        format!("{lhs:?}"),
                        format!("{rhs:?}"),
                    );
                }
            }
        }
    }
    report
}

/// One class in the classification of irreducible tensor product modules.
#[derive(Clone, Debug)]
pub struct TensorClass {
    pub cosets: (DualCoset, DualCoset),
    /// Coset of `L₁ ⊕ L₂` the pair corresponds to.
    pub sum_coset: Sector,
    pub min_weight: Frac,
    pub irreducible: bool,
    pub fingerprint: CharacterSeries<Vec<Sector>>,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub classes: Vec<TensorClass>,
    /// The pairs biject with the discriminant group of `L₁ ⊕ L₂`.
    pub bijective: bool,
    /// Pairs of class indices whose fingerprints coincide at the window.
    pub indistinguishable: Vec<(usize, usize)>,
}

impl Classification {
    pub fn all_irreducible(&self) -> bool {
        self.classes.iter().all(|c| c.irreducible)
    }
}

/// Irreducible modules of `V_{L₁} ⊗ V_{L₂}`: all `V_{L₁+γ₁} ⊗ V_{L₂+γ₂}`.
///
/// `radius` bounds the sector box `γ_i + λ`, `|λ_j| <= radius`, of each factor.
pub fn classify_irreducibles_tensor(
    l1: &EvenLattice,
    l2: &EvenLattice,
    max_weight: Frac,
    radius: i64,
) -> Result<Classification, ModuleError> {
    classify_irreducibles_tensor_at_depth(l1, l2, max_weight, radius, DEFAULT_DEPTH)
}

/// [`classify_irreducibles_tensor`] with an explicit operator closure depth.
pub fn classify_irreducibles_tensor_at_depth(
    l1: &EvenLattice,
    l2: &EvenLattice,
    max_weight: Frac,
    radius: i64,
    depth: usize,
) -> Result<Classification, ModuleError> {
    let sum = l1.orthogonal_sum(l2);
    let sum_cosets: BTreeSet<Sector> = sum
        .discriminant_group()
        .into_iter()
        .map(|c| c.rep)
        .collect();
    let mut classes = Vec::new();
    let mut hit = BTreeSet::new();
    for c1 in l1.discriminant_group() {
        for c2 in l2.discriminant_group() {
            let w1 = build_coset_module(l1, &c1.rep)?;
            let w2 = build_coset_module(l2, &c2.rep)?;
            let tensor = TensorModule::new(vec![w1, w2]);
            let window = tensor.window(max_weight, radius);
            let sample = OperatorSample::new(tensor.default_sample(&window), depth);
            let verdict = irreducibility_check(&tensor, &sample, &window)?;
            let mut joined = c1.rep.0.clone();
            joined.extend(c2.rep.0.iter().cloned());
            let sum_coset = sum.canonical_rep(&Sector(joined));
            hit.insert(sum_coset.clone());
            let min_weight = l1.half_norm(&c1.rep) + l2.half_norm(&c2.rep);
            classes.push(TensorClass {
                cosets: (c1.clone(), c2.clone()),
                sum_coset,
                min_weight,
                irreducible: verdict.verdict.is_irreducible(),
                fingerprint: character_series(&tensor, &window),
            });
        }
    }
    let bijective = hit == sum_cosets && classes.len() == sum_cosets.len();
    let mut indistinguishable = Vec::new();
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            if classes[i].fingerprint == classes[j].fingerprint {
                indistinguishable.push((i, j));
            }
        }
    }
    Ok(Classification {
        classes,
        bijective,
        indistinguishable,
    })
}

#[derive(Clone, Debug)]
pub struct Summand {
    pub module: LatticeModule,
    pub min_weight: Frac,
    pub irreducible: bool,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub summands: Vec<Summand>,
    pub max_weight: Frac,
    pub radius: i64,
    /// Per-cell dimension reconciliation between ambient and summands.
    pub reconciliation: CheckReport,
}

/// Splits a sum of coset modules into irreducible summands by grouping the
/// `h(0)`-eigenvalues of its windowed basis modulo `L`.
pub fn decompose_completely(
    module: &LatticeModule,
    max_weight: Frac,
    radius: i64,
) -> Result<Decomposition, ModuleError> {
    decompose_completely_at_depth(module, max_weight, radius, DEFAULT_DEPTH)
}

/// [`decompose_completely`] with an explicit operator closure depth.
pub fn decompose_completely_at_depth(
    module: &LatticeModule,
    max_weight: Frac,
    radius: i64,
    depth: usize,
) -> Result<Decomposition, ModuleError> {
    let l = module.lattice();
    let window = module.window(max_weight, radius);
    let mut groups: BTreeMap<Sector, BTreeSet<Sector>> = BTreeMap::new();
    for cell in module.window_cells(&window) {
        for key in module.cell_basis(&cell.sector, cell.weight) {
            let mut eig = Vec::with_capacity(l.rank());
            for i in 0..l.rank() {
                let img = module.apply_cartan(i, &key);
                let c = img
                    .ratio_to(&LinComb::basis(key.clone()))
                    .ok_or(ModuleError::NotDecomposableAtWindow)?;
                let c = crate::scalar::to_frac(&c).ok_or(ModuleError::NotDecomposableAtWindow)?;
                eig.push(c);
            }
            let sector = l.apply_inverse(&eig);
            groups
                .entry(l.canonical_rep(&sector))
                .or_default()
                .insert(sector);
        }
    }
    let mut summands = Vec::new();
    for rep in groups.keys() {
        let summand = build_coset_module(l, rep)?;
        let sub_window = summand.window(max_weight, radius);
        let sample = OperatorSample::new(summand.default_sample(&sub_window), depth);
        let verdict = irreducibility_check(&summand, &sample, &sub_window)?;
        if !verdict.verdict.is_irreducible() {
            return Err(ModuleError::NotDecomposableAtWindow);
        }
        let min_weight = summand
            .sectors_in_box(radius)
            .iter()
            .map(|s| l.half_norm(s))
            .min()
            .expect("nonempty box");
        summands.push(Summand {
            module: summand,
            min_weight,
            irreducible: true,
        });
    }
    let mut reconciliation = CheckReport::new("decomposition-dimensions");
    for cell in module.window_cells(&window) {
        reconciliation.checked();
        let ambient = module.cell_basis(&cell.sector, cell.weight).len() as u64;
        let parts: u64 = summands
            .iter()
            .map(|s| lattice_cell_dimension(&s.module, &cell.sector, cell.weight))
            .sum();
        if ambient != parts {
            reconciliation.fail(
                format!("{cell:?}"),
                format!("{ambient}"),
                format!("{parts}"),
            );
        }
    }
    if !reconciliation.passed() {
        return Err(ModuleError::NotDecomposableAtWindow);
    }
    Ok(Decomposition {
        summands,
        max_weight,
        radius,
        reconciliation,
    })
}
