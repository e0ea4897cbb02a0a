//! Tensor products `V_{L₁} ⊗ ··· ⊗ V_{L_p}` and their modules.
//!
//! A tensor basis vector is a tuple of Fock monomials, one per factor. The
//! sector of a tuple is the tuple of factor sectors and its weight is the sum
//! of factor weights.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::axioms::{CheckReport, VirasoroAction};
use crate::error::VertexError;
use crate::fock::{basis_mode_act, weight_of, FockMonomial, StateVector};
use crate::graded::{Cell, CellWindow, GradedModule};
use crate::lattice::{EvenLattice, Sector};
use crate::lincomb::LinComb;
use crate::module::{LatticeModule, LatticeOp};
use crate::scalar::{floor, frac_int, Frac};
use crate::vertex::{conformal_vector, ModeEngine, TruncationWindow};

pub type TensorKey = Vec<FockMonomial>;
pub type TensorVector = LinComb<TensorKey>;

/// Replaces slot `slot` of every tuple in `w` by the image of `f`.
fn act_on_slot<E>(
    w: &TensorVector,
    slot: usize,
    mut f: impl FnMut(&FockMonomial) -> Result<StateVector, E>,
) -> Result<TensorVector, E> {
    let mut out = TensorVector::zero();
    for (key, c) in w.iter() {
        for (img, d) in f(&key[slot])?.iter() {
            let mut k = key.clone();
            k[slot] = img.clone();
            out.add_term(k, c * d);
        }
    }
    Ok(out)
}

/// Tensor product of lattice vertex algebras.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorAlgebra {
    factors: Vec<EvenLattice>,
}

impl TensorAlgebra {
    pub fn new(factors: Vec<EvenLattice>) -> Self {
        assert!(!factors.is_empty(), "tensor product of no factors");
        Self { factors }
    }

    pub fn factors(&self) -> &[EvenLattice] {
        &self.factors
    }

    /// Ranks of the summands of the grading group `L₁ ⊕ ··· ⊕ L_p`.
    pub fn grading_group(&self) -> Vec<usize> {
        self.factors.iter().map(EvenLattice::rank).collect()
    }

    /// `⟨h, α⟩ = Σ ⟨h_i, α_i⟩_i`, with `h` and `α` given slotwise.
    pub fn pairing(&self, h: &[Sector], alpha: &[Sector]) -> Frac {
        self.factors
            .iter()
            .zip(h.iter().zip(alpha))
            .map(|(l, (h, a))| l.pair(h, a))
            .sum()
    }

    pub fn vacuum(&self) -> TensorKey {
        self.factors
            .iter()
            .map(|l| FockMonomial::vacuum(l.rank()))
            .collect()
    }

    /// `ω = Σ_i 1 ⊗ ··· ⊗ ω_i ⊗ ··· ⊗ 1`.
    pub fn conformal_vector(&self) -> TensorVector {
        let vac = self.vacuum();
        let mut out = TensorVector::zero();
        for (slot, l) in self.factors.iter().enumerate() {
            for (m, c) in conformal_vector(l).iter() {
                let mut k = vac.clone();
                k[slot] = m.clone();
                out.add_term(k, c.clone());
            }
        }
        out
    }

    pub fn engine(&self, max_weight: Frac) -> TensorEngine<'_> {
        TensorEngine {
            engines: self
                .factors
                .iter()
                .map(|l| {
                    ModeEngine::new(
                        l,
                        TruncationWindow {
                            max_weight,
                            sector_box: None,
                        },
                    )
                })
                .collect(),
        }
    }

    /// The algebra as a module over itself.
    pub fn as_module(&self) -> TensorModule {
        TensorModule::new(self.factors.iter().map(LatticeModule::algebra).collect())
    }
}

/// Range `[lo, hi]` of modes `j` for which `v_j w` can be nonzero; `lo` is
/// `None` when unbounded below.
type ModeRange = (Option<i64>, i64);

/// Mode evaluation on tensor vectors, one cached [`ModeEngine`] per factor.
pub struct TensorEngine<'a> {
    engines: Vec<ModeEngine<'a>>,
}

impl<'a> TensorEngine<'a> {
    pub fn arity(&self) -> usize {
        self.engines.len()
    }

    /// `u_m` acting on slot `slot` only.
    pub fn slot_mode(
        &mut self,
        slot: usize,
        u: &FockMonomial,
        m: i64,
        w: &TensorVector,
    ) -> Result<TensorVector, VertexError> {
        let engine = &mut self.engines[slot];
        act_on_slot(w, slot, |x| engine.mode(u, m, x))
    }

    fn slot_range(&self, slot: usize, u: &FockMonomial, w: &FockMonomial) -> ModeRange {
        if u.modes().is_empty() && u.sector.is_zero() {
            (Some(-1), -1)
        } else {
            (None, self.engines[slot].vanishing_bound(u, w))
        }
    }

    /// Range of `j` with `(v_0 ⊗ ··· ⊗ v_{k-1})_j (w_0 ⊗ ··· ⊗ w_{k-1})` possibly nonzero.
    fn prefix_range(&self, v: &[FockMonomial], w: &[FockMonomial]) -> ModeRange {
        let mut lo = Some(0i64);
        let mut hi = 0i64;
        for (slot, (u, x)) in v.iter().zip(w).enumerate() {
            let (l, h) = self.slot_range(slot, u, x);
            lo = lo.zip(l).map(|(a, b)| a + b);
            hi += h;
        }
        let shift = v.len() as i64 - 1;
        (lo.map(|l| l + shift), hi + shift)
    }

    /// `(v_0 ⊗ ··· ⊗ v_{k-1})_m (w_0 ⊗ ··· ⊗ w_{k-1})` for `k = v.len()`,
    /// folding `Y(a ⊗ b, x) = Y(a, x) ⊗ Y(b, x)` from the left:
    /// `(a ⊗ b)_m = Σ_i a_i ⊗ b_{m-1-i}`.
    fn fold_mode(
        &mut self,
        v: &[FockMonomial],
        m: i64,
        w: &[FockMonomial],
    ) -> Result<TensorVector, VertexError> {
        let k = v.len();
        let last = k - 1;
        if k == 1 {
            let img = self.engines[0].mode(&v[0], m, &w[0])?;
            return Ok(img
                .iter()
                .map(|(x, c)| (vec![x.clone()], c.clone()))
                .collect());
        }
        let (plo, phi) = self.prefix_range(&v[..last], &w[..last]);
        let (llo, lhi) = self.slot_range(last, &v[last], &w[last]);
        let lo = plo.unwrap_or(i64::MIN).max(m - 1 - lhi);
        let hi = llo.map_or(phi, |l| phi.min(m - 1 - l));
        let mut out = TensorVector::zero();
        for i in lo..=hi {
            let right = self.engines[last].mode(&v[last], m - 1 - i, &w[last])?;
            if right.is_zero() {
                continue;
            }
            let left = self.fold_mode(&v[..last], i, &w[..last])?;
            for (lk, lc) in left.iter() {
                for (rk, rc) in right.iter() {
                    let mut key = lk.clone();
                    key.push(rk.clone());
                    out.add_term(key, lc * rc);
                }
            }
        }
        Ok(out)
    }

    /// `v_m w` for a tuple monomial `v` and a tuple basis vector `w`.
    pub fn mode(
        &mut self,
        v: &TensorKey,
        m: i64,
        w: &TensorKey,
    ) -> Result<TensorVector, VertexError> {
        assert_eq!(v.len(), self.arity());
        assert_eq!(w.len(), self.arity());
        self.fold_mode(v, m, w)
    }

    pub fn apply_key(
        &mut self,
        v: &TensorKey,
        m: i64,
        w: &TensorVector,
    ) -> Result<TensorVector, VertexError> {
        let mut out = TensorVector::zero();
        for (k, c) in w.iter() {
            out.add_scaled(&self.mode(v, m, k)?, c);
        }
        Ok(out)
    }

    pub fn apply(
        &mut self,
        v: &TensorVector,
        m: i64,
        w: &TensorVector,
    ) -> Result<TensorVector, VertexError> {
        let mut out = TensorVector::zero();
        for (k, c) in v.iter() {
            out.add_scaled(&self.apply_key(k, m, w)?, c);
        }
        Ok(out)
    }

    /// Upper mode bound of `v` acting on every key of `w`.
    fn upper_bound(&self, v: &TensorKey, w: &TensorVector) -> Option<i64> {
        w.keys().map(|k| self.prefix_range(v, k).1).max()
    }
}

impl VirasoroAction for TensorEngine<'_> {
    type Key = TensorKey;

    fn virasoro(&mut self, n: i64, w: &TensorVector) -> Result<TensorVector, VertexError> {
        let mut out = TensorVector::zero();
        for slot in 0..self.arity() {
            let engine = &mut self.engines[slot];
            let omega = engine.conformal_vector().clone();
            out += &act_on_slot(w, slot, |x| {
                engine.apply(&omega, n + 1, &StateVector::basis(x.clone()))
            })?;
        }
        Ok(out)
    }
}

/// Compares the direct action of `(head ⊗ last)_m` on `target` with the
/// expansion `Σ_{i<0} a_i b_{m-i-1} + Σ_{i≥0} b_{m-i-1} a_i`, where
/// `a = head ⊗ 1` and `b = 1 ⊗ ··· ⊗ 1 ⊗ last`; both sums are cut off by the
/// lower truncation on the fixed target.
pub fn expand_tensor_mode(
    engine: &mut TensorEngine<'_>,
    head: &[FockMonomial],
    last: &FockMonomial,
    m: i64,
    target: &TensorKey,
) -> Result<CheckReport, VertexError> {
    let p = engine.arity();
    assert_eq!(head.len() + 1, p);
    let mut v = head.to_vec();
    v.push(last.clone());
    let direct = engine.mode(&v, m, target)?;

    let vac_of = |x: &FockMonomial| FockMonomial::vacuum(x.sector.rank());
    let mut a = head.to_vec();
    a.push(vac_of(last));
    let mut b: TensorKey = head.iter().map(vac_of).collect();
    b.push(last.clone());

    let t = TensorVector::basis(target.clone());
    let mut expansion = TensorVector::zero();
    if let Some(b_top) = engine.upper_bound(&b, &t) {
        for i in (m - 1 - b_top).min(0)..0 {
            let bt = engine.apply_key(&b, m - i - 1, &t)?;
            expansion += &engine.apply_key(&a, i, &bt)?;
        }
    }
    if let Some(a_top) = engine.upper_bound(&a, &t) {
        for i in 0..=a_top {
            let at = engine.apply_key(&a, i, &t)?;
            expansion += &engine.apply_key(&b, m - i - 1, &at)?;
        }
    }
    let mut report = CheckReport::new("tensor-mode-expansion");
    report.compare(
        || format!("v={v:?} m={m} target={target:?}"),
        &direct,
        &expansion,
    );
    Ok(report)
}

/// `[(u in slot a)_m, (v in slot b)_n] = 0` on each target, for `a ≠ b`.
pub fn check_slot_commutation(
    engine: &mut TensorEngine<'_>,
    (sa, u, m): (usize, &FockMonomial, i64),
    (sb, v, n): (usize, &FockMonomial, i64),
    targets: &[TensorKey],
) -> Result<CheckReport, VertexError> {
    let mut report = CheckReport::new("slot-commutation");
    for t in targets {
        let t = TensorVector::basis(t.clone());
        let x = engine.slot_mode(sb, v, n, &t)?;
        let uv = engine.slot_mode(sa, u, m, &x)?;
        let y = engine.slot_mode(sa, u, m, &t)?;
        let vu = engine.slot_mode(sb, v, n, &y)?;
        report.compare(
            || format!("slots {sa},{sb} u={u} m={m} v={v} n={n} on {t:?}"),
            &uv,
            &vu,
        );
    }
    Ok(report)
}

/// Generators of the sampled operator algebra on a tensor module.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TensorOp {
    /// A factor operator acting on one slot (`1 ⊗ ··· ⊗ op ⊗ ··· ⊗ 1`).
    Slot { slot: usize, op: LatticeOp },
    /// Total `L(n) = Σ_i L_i(n)`.
    Virasoro(i64),
}

/// `W₁ ⊗ ··· ⊗ W_p` as a module for the tensor product algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorModule {
    factors: Vec<LatticeModule>,
}

impl TensorModule {
    pub fn new(factors: Vec<LatticeModule>) -> Self {
        assert!(!factors.is_empty(), "tensor product of no factors");
        Self { factors }
    }

    pub fn factors(&self) -> &[LatticeModule] {
        &self.factors
    }

    pub fn algebra(&self) -> TensorAlgebra {
        TensorAlgebra::new(self.factors.iter().map(|f| f.lattice().clone()).collect())
    }

    /// Product of the factor sector boxes of `radius`.
    pub fn sectors_in_box(&self, radius: i64) -> Vec<Vec<Sector>> {
        let mut out: Vec<Vec<Sector>> = vec![Vec::new()];
        for f in &self.factors {
            let boxed = f.sectors_in_box(radius);
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    boxed.iter().map(move |s| {
                        let mut p = prefix.clone();
                        p.push(s.clone());
                        p
                    })
                })
                .collect();
        }
        out
    }

    pub fn window(&self, max_weight: Frac, radius: i64) -> CellWindow<Vec<Sector>> {
        CellWindow::new(max_weight, self.sectors_in_box(radius))
    }

    fn slot_of_color(&self, mut i: usize) -> (usize, usize) {
        for (slot, f) in self.factors.iter().enumerate() {
            let r = f.lattice().rank();
            if i < r {
                return (slot, i);
            }
            i -= r;
        }
        panic!("color index out of range");
    }

    /// Splits `weight` over the slots, calling `f` with each admissible split.
    fn for_each_split(&self, sector: &[Sector], weight: Frac, mut f: impl FnMut(&[Frac])) {
        fn rec(mins: &[Frac], left: Frac, acc: &mut Vec<Frac>, f: &mut dyn FnMut(&[Frac])) {
            let k = acc.len();
            if k + 1 == mins.len() {
                let off = left - mins[k];
                if off.is_integer() && off >= Frac::zero() {
                    acc.push(left);
                    f(acc);
                    acc.pop();
                }
                return;
            }
            let rest: Frac = mins[k + 1..].iter().copied().sum();
            let top = floor(left - rest - mins[k]);
            for j in 0..=top {
                let w = mins[k] + frac_int(j);
                acc.push(w);
                rec(mins, left - w, acc, f);
                acc.pop();
            }
        }
        let mins: Vec<Frac> = self
            .factors
            .iter()
            .zip(sector)
            .map(|(m, s)| m.min_weight(s))
            .collect();
        rec(&mins, weight, &mut Vec::new(), &mut f);
    }
}

impl GradedModule for TensorModule {
    type Sector = Vec<Sector>;
    type Key = TensorKey;
    type Op = TensorOp;

    fn has_sector(&self, sector: &Vec<Sector>) -> bool {
        sector.len() == self.factors.len()
            && self
                .factors
                .iter()
                .zip(sector)
                .all(|(f, s)| f.has_sector(s))
    }

    fn min_weight(&self, sector: &Vec<Sector>) -> Frac {
        self.factors
            .iter()
            .zip(sector)
            .map(|(f, s)| f.min_weight(s))
            .sum()
    }

    fn cell_basis(&self, sector: &Vec<Sector>, weight: Frac) -> Vec<TensorKey> {
        if !self.has_sector(sector) {
            return Vec::new();
        }
        let mut out = Vec::new();
        self.for_each_split(sector, weight, |split| {
            let mut tuples: Vec<TensorKey> = vec![Vec::new()];
            for ((f, s), w) in self.factors.iter().zip(sector).zip(split) {
                let basis = f.cell_basis(s, *w);
                tuples = tuples
                    .into_iter()
                    .flat_map(|t| {
                        basis.iter().map(move |b| {
                            let mut t = t.clone();
                            t.push(b.clone());
                            t
                        })
                    })
                    .collect();
            }
            out.extend(tuples);
        });
        out.sort();
        out
    }

    fn cell_dimension(&self, sector: &Vec<Sector>, weight: Frac) -> u64 {
        if !self.has_sector(sector) {
            return 0;
        }
        let mut total = 0;
        self.for_each_split(sector, weight, |split| {
            total += self
                .factors
                .iter()
                .zip(sector)
                .zip(split)
                .map(|((f, s), w)| f.cell_dimension(s, *w))
                .product::<u64>();
        });
        total
    }

    fn degree(&self, key: &TensorKey) -> Cell<Vec<Sector>> {
        Cell {
            sector: key.iter().map(|m| m.sector.clone()).collect(),
            weight: self
                .factors
                .iter()
                .zip(key)
                .map(|(f, m)| weight_of(f.lattice(), m))
                .sum(),
        }
    }

    fn op_target(&self, op: &TensorOp, cell: &Cell<Vec<Sector>>) -> Cell<Vec<Sector>> {
        match op {
            TensorOp::Virasoro(n) => Cell {
                sector: cell.sector.clone(),
                weight: cell.weight - frac_int(*n),
            },
            TensorOp::Slot { slot, op } => {
                let (dw, ds) = self.factors[*slot].op_shift(op);
                let mut sector = cell.sector.clone();
                sector[*slot] = sector[*slot].add(&ds);
                Cell {
                    sector,
                    weight: cell.weight + dw,
                }
            }
        }
    }

    fn apply_batch(
        &self,
        op: &TensorOp,
        keys: &[TensorKey],
    ) -> Result<Vec<TensorVector>, VertexError> {
        let slot_weight =
            |slot: usize, k: &TensorKey| weight_of(self.factors[slot].lattice(), &k[slot]);
        let engine_for = |slot: usize, dw: Frac| {
            let max_weight = keys
                .iter()
                .map(|k| slot_weight(slot, k) + dw)
                .max()
                .unwrap_or_else(Frac::zero);
            ModeEngine::new(
                self.factors[slot].lattice(),
                TruncationWindow {
                    max_weight,
                    sector_box: None,
                },
            )
        };
        match op {
            TensorOp::Slot { slot, op } => {
                let f = &self.factors[*slot];
                let (dw, _) = f.op_shift(op);
                let mut engine = engine_for(*slot, dw);
                keys.iter()
                    .map(|k| {
                        act_on_slot(&TensorVector::basis(k.clone()), *slot, |x| {
                            f.apply_with(&mut engine, op, &StateVector::basis(x.clone()))
                        })
                    })
                    .collect()
            }
            TensorOp::Virasoro(n) => {
                let mut engines: Vec<_> = (0..self.factors.len())
                    .map(|s| engine_for(s, frac_int(-n)))
                    .collect();
                keys.iter()
                    .map(|k| {
                        let t = TensorVector::basis(k.clone());
                        let mut out = TensorVector::zero();
                        for (slot, engine) in engines.iter_mut().enumerate() {
                            out += &act_on_slot(&t, slot, |x| {
                                engine.virasoro(*n, &StateVector::basis(x.clone()))
                            })?;
                        }
                        Ok(out)
                    })
                    .collect()
            }
        }
    }

    fn cartan_rank(&self) -> usize {
        self.factors.iter().map(|f| f.lattice().rank()).sum()
    }

    fn apply_cartan(&self, i: usize, key: &TensorKey) -> TensorVector {
        let (slot, color) = self.slot_of_color(i);
        let l = self.factors[slot].lattice();
        act_on_slot::<()>(&TensorVector::basis(key.clone()), slot, |x| {
            Ok(basis_mode_act(l, color as u16, 0, x))
        })
        .expect("infallible")
    }

    fn pairing(&self, i: usize, sector: &Vec<Sector>) -> Frac {
        let (slot, color) = self.slot_of_color(i);
        self.factors[slot].pairing(color, &sector[slot])
    }

    fn default_sample(&self, window: &CellWindow<Vec<Sector>>) -> Vec<TensorOp> {
        let lowest = window
            .sectors
            .iter()
            .filter(|s| self.has_sector(s))
            .map(|s| self.min_weight(s))
            .min()
            .unwrap_or_else(Frac::zero);
        let height = (-floor(lowest - window.max_weight)).max(1);
        let mut ops = Vec::new();
        for (slot, f) in self.factors.iter().enumerate() {
            ops.extend(
                f.sample_for_height(height)
                    .into_iter()
                    .filter(|op| !matches!(op, LatticeOp::Virasoro(_)))
                    .map(|op| TensorOp::Slot { slot, op }),
            );
        }
        ops.extend((-2..=2).map(TensorOp::Virasoro));
        ops
    }

    fn describe_op(&self, op: &TensorOp) -> String {
        match op {
            TensorOp::Slot { slot, op } => {
                format!("{}@{}", self.factors[*slot].describe_op(op), slot + 1)
            }
            TensorOp::Virasoro(n) => format!("L({n})"),
        }
    }
}
