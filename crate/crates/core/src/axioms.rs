//! Executable axiom checks in mode (component) form.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Debug;

use num_traits::Zero;

use crate::error::{AxiomError, VertexError};
use crate::fock::{FockMonomial, StateVector};
use crate::graded::{check_ops_homogeneous, on_weight_grid, CellWindow, GradedModule};
use crate::lincomb::LinComb;
use crate::scalar::{binomial, frac_int, q_int, sign_pow, Frac, Q};
use crate::vertex::ModeEngine;

/// One failed instance, reproducible from its input description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub inputs: String,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of a named check over many instances; passes iff `failures` is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub instances_checked: u64,
    pub failures: Vec<Counterexample>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            instances_checked: 0,
            failures: Vec::new(),
        }
    }

    pub fn checked(&mut self) {
        self.instances_checked += 1;
    }

    pub fn fail(
        &mut self,
        inputs: impl Into<String>,
        lhs: impl Into<String>,
        rhs: impl Into<String>,
    ) {
        self.failures.push(Counterexample {
            inputs: inputs.into(),
            lhs: lhs.into(),
            rhs: rhs.into(),
        });
    }

    /// Records one instance comparing `lhs` and `rhs`.
    pub fn compare<T: PartialEq + Debug>(
        &mut self,
        inputs: impl FnOnce() -> String,
        lhs: &T,
        rhs: &T,
    ) {
        self.checked();
        if lhs != rhs {
            self.fail(inputs(), format!("{lhs:?}"), format!("{rhs:?}"));
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.instances_checked += other.instances_checked;
        self.failures.extend(other.failures);
    }
}

/// Anything with Virasoro operators `L(n)` on a space of linear combinations.
pub trait VirasoroAction {
    type Key: Ord + Clone + Debug;

    fn virasoro(
        &mut self,
        n: i64,
        w: &LinComb<Self::Key>,
    ) -> Result<LinComb<Self::Key>, VertexError>;
}

impl VirasoroAction for ModeEngine<'_> {
    type Key = FockMonomial;

    fn virasoro(&mut self, n: i64, w: &StateVector) -> Result<StateVector, VertexError> {
        ModeEngine::virasoro(self, n, w)
    }
}

/// Iterate side `Σ_i C(m,i) (u_{p+i} v)_{m+n-i} w`.
fn jacobi_iterate(
    engine: &mut ModeEngine<'_>,
    u: &FockMonomial,
    v: &FockMonomial,
    w: &FockMonomial,
    (p, m, n): (i64, i64, i64),
) -> Result<StateVector, VertexError> {
    let mut out = StateVector::zero();
    let top = engine.vanishing_bound(u, v) - p;
    let top = if m >= 0 { top.min(m) } else { top };
    for i in 0..=top.max(-1) {
        let c = binomial(m, i as u64);
        if c.is_zero() {
            continue;
        }
        let inner = engine.mode(u, p + i, v)?;
        let wv = StateVector::basis(w.clone());
        let outer = engine.apply(&inner, m + n - i, &wv)?;
        out.add_scaled(&outer, &c);
    }
    Ok(out)
}

/// Commutator side `Σ_i (-1)^i C(p,i) [u_{m+p-i} v_{n+i} w - (-1)^p v_{n+p-i} u_{m+i} w]`.
fn jacobi_commutator(
    engine: &mut ModeEngine<'_>,
    u: &FockMonomial,
    v: &FockMonomial,
    w: &FockMonomial,
    (p, m, n): (i64, i64, i64),
) -> Result<StateVector, VertexError> {
    let mut out = StateVector::zero();
    let first_top = engine.vanishing_bound(v, w) - n;
    let second_top = engine.vanishing_bound(u, w) - m;
    let mut top = first_top.max(second_top);
    if p >= 0 {
        top = top.min(p);
    }
    let sign_p = q_int(sign_pow(p));
    for i in 0..=top.max(-1) {
        let c = binomial(p, i as u64) * q_int(sign_pow(i));
        if c.is_zero() {
            continue;
        }
        if i <= first_top {
            let vw = engine.mode(v, n + i, w)?;
            let a = engine.apply_monomial(u, m + p - i, &vw)?;
            out.add_scaled(&a, &c);
        }
        if i <= second_top {
            let uw = engine.mode(u, m + i, w)?;
            let b = engine.apply_monomial(v, n + p - i, &uw)?;
            out.add_scaled(&b, &-(&c * &sign_p));
        }
    }
    Ok(out)
}

/// Component Jacobi identity for one `(u, v, w)` and every `(p, m, n)` in `indices`.
pub fn check_component_jacobi(
    engine: &mut ModeEngine<'_>,
    u: &FockMonomial,
    v: &FockMonomial,
    w: &FockMonomial,
    indices: &[(i64, i64, i64)],
) -> Result<CheckReport, VertexError> {
    let mut report = CheckReport::new("component-jacobi");
    for &idx in indices {
        let lhs = jacobi_commutator(engine, u, v, w, idx)?;
        let rhs = jacobi_iterate(engine, u, v, w, idx)?;
        report.compare(|| format!("u={u} v={v} w={w} (p,m,n)={idx:?}"), &lhs, &rhs);
    }
    Ok(report)
}

/// All `(p, m, n)` with each index in `lo..=hi`.
pub fn index_box(lo: i64, hi: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    for p in lo..=hi {
        for m in lo..=hi {
            for n in lo..=hi {
                out.push((p, m, n));
            }
        }
    }
    out
}

/// Checks `[L(m),L(n)] - (m-n)L(m+n) = (m³-m)/12 δ_{m+n,0} c` on `basis` and
/// returns the extracted `c` when the central term is visible (`m+n = 0`, `m³ ≠ m`).
pub fn check_virasoro<C: VirasoroAction>(
    ctx: &mut C,
    m: i64,
    n: i64,
    basis: &[C::Key],
) -> Result<(CheckReport, Option<Q>), AxiomError> {
    let mut report = CheckReport::new(format!("virasoro[{m},{n}]"));
    let central = if m + n == 0 { m * m * m - m } else { 0 };
    let mut charge: Option<Q> = None;
    for key in basis {
        let w = LinComb::basis(key.clone());
        let lm_ln = ctx.virasoro(n, &w).and_then(|x| ctx.virasoro(m, &x))?;
        let ln_lm = ctx.virasoro(m, &w).and_then(|x| ctx.virasoro(n, &x))?;
        let lmn = ctx.virasoro(m + n, &w)?.scale(&q_int(m - n));
        let defect = lm_ln - ln_lm - lmn;
        report.checked();
        if central == 0 {
            if !defect.is_zero() {
                report.fail(format!("{key:?}"), format!("{defect:?}"), "0");
            }
            continue;
        }
        let scalar = if defect.is_zero() {
            Q::zero()
        } else {
            defect
                .ratio_to(&w)
                .ok_or(AxiomError::NonScalarDefect { m, n })?
        };
        let c = scalar * q_int(12) / q_int(central);
        match &charge {
            None => charge = Some(c),
            Some(prev) if *prev != c => {
                report.fail(
                    format!("{key:?}"),
                    format!("c = {c}"),
                    format!("c = {prev}"),
                );
            }
            Some(_) => {}
        }
    }
    Ok((report, charge))
}

/// Central charge extracted from `[L(2), L(-2)]` on `basis`.
pub fn central_charge<C: VirasoroAction>(ctx: &mut C, basis: &[C::Key]) -> Result<Q, AxiomError> {
    let (report, c) = check_virasoro(ctx, 2, -2, basis)?;
    match (report.passed(), c) {
        (true, Some(c)) => Ok(c),
        _ => Err(AxiomError::NonScalarDefect { m: 2, n: -2 }),
    }
}

/// `(L(-1)v)_m = -m v_{m-1}` on every vector of `basis`.
pub fn check_l_minus_one_derivative(
    engine: &mut ModeEngine<'_>,
    v: &StateVector,
    m: i64,
    basis: &[FockMonomial],
) -> Result<CheckReport, VertexError> {
    let mut report = CheckReport::new("l-minus-one-derivative");
    let dv = engine.virasoro(-1, v)?;
    for w in basis {
        let wv = StateVector::basis(w.clone());
        let lhs = engine.apply(&dv, m, &wv)?;
        let rhs = engine.apply(v, m - 1, &wv)?.scale(&q_int(-m));
        report.compare(|| format!("v={v} m={m} w={w}"), &lhs, &rhs);
    }
    Ok(report)
}

/// `1_m w = δ_{m,-1} w` for `m` in `modes`.
pub fn check_vacuum_property(
    engine: &mut ModeEngine<'_>,
    basis: &[FockMonomial],
    modes: core::ops::RangeInclusive<i64>,
) -> Result<CheckReport, VertexError> {
    let mut report = CheckReport::new("vacuum-property");
    let vac = FockMonomial::vacuum(engine.lattice().rank());
    for w in basis {
        for m in modes.clone() {
            let lhs = engine.mode(&vac, m, w)?;
            let rhs = if m == -1 {
                StateVector::basis(w.clone())
            } else {
                StateVector::zero()
            };
            report.compare(|| format!("1_{m} {w}"), &lhs, &rhs);
        }
    }
    Ok(report)
}

/// `v_m 1 = 0` for `m >= 0` and `v_{-1} 1 = v`, i.e. `Y(v,x)1 → v` as `x → 0`.
pub fn check_creation_property(
    engine: &mut ModeEngine<'_>,
    sources: &[FockMonomial],
) -> Result<CheckReport, VertexError> {
    let mut report = CheckReport::new("creation-property");
    let vac = FockMonomial::vacuum(engine.lattice().rank());
    for v in sources {
        let top = engine.vanishing_bound(v, &vac).max(0);
        for m in 0..=top {
            let lhs = engine.mode(v, m, &vac)?;
            report.compare(|| format!("{v}_{m} 1"), &lhs, &StateVector::zero());
        }
        let lhs = engine.mode(v, -1, &vac)?;
        report.compare(|| format!("{v}_-1 1"), &lhs, &StateVector::basis(v.clone()));
    }
    Ok(report)
}

/// Grading report with the lowest weight found in each windowed sector.
#[derive(Clone, Debug)]
pub struct GradingReport<S> {
    pub report: CheckReport,
    pub lower_bounds: Vec<(S, Frac)>,
}

/// Strong-grading axioms on a window: per-sector weights bounded below by the
/// minimal weight (which is attained), cells off the weight grid empty, each
/// cell's basis count equal to the independent dimension count, and every
/// sampled operator mapping cells into the predicted cell.
pub fn check_grading_axioms<M: GradedModule>(
    module: &M,
    window: &CellWindow<M::Sector>,
    sample: &[M::Op],
) -> Result<GradingReport<M::Sector>, VertexError> {
    let mut report = CheckReport::new("grading-axioms");
    let mut lower_bounds = Vec::new();
    let half = Frac::new(1, 2);
    for s in window.sectors.iter().filter(|s| module.has_sector(s)) {
        let min = module.min_weight(s);
        lower_bounds.push((s.clone(), min));
        report.compare(
            || format!("{s:?}: minimal weight {min} attained"),
            &module.cell_basis(s, min).is_empty(),
            &false,
        );
        for below in [min - frac_int(1), min - frac_int(2), min - half, min + half] {
            debug_assert!(!on_weight_grid(module, s, below));
            report.compare(
                || format!("{s:?}: weight {below} off the grid"),
                &module.cell_basis(s, below).len(),
                &0,
            );
        }
        let mut w = min;
        while w <= window.max_weight {
            let enumerated = module.cell_basis(s, w).len() as u64;
            report.compare(
                || format!("{s:?} weight {w}: enumeration vs dimension count"),
                &enumerated,
                &module.cell_dimension(s, w),
            );
            w += frac_int(1);
        }
    }
    let (checked, failures) = check_ops_homogeneous(module, window, sample)?;
    report.instances_checked += checked;
    for f in failures {
        report.fail(f, "term outside predicted cell", "");
    }
    Ok(GradingReport {
        report,
        lower_bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{basis_of, Mode};
    use crate::lattice::{EvenLattice, Sector};
    use crate::vertex::TruncationWindow;
    use alloc::vec;

    fn a1() -> EvenLattice {
        EvenLattice::new(vec![vec![2]]).unwrap()
    }

    fn hyp() -> EvenLattice {
        EvenLattice::new(vec![vec![0, 1], vec![1, 0]]).unwrap()
    }

    fn h1() -> FockMonomial {
        FockMonomial::new(Sector::zero(1), alloc::vec![Mode::new(1, 0)])
    }

    #[test]
    fn jacobi_on_heisenberg_generators() {
        let l = a1();
        let mut e = ModeEngine::new(&l, TruncationWindow::up_to(32));
        let vac = FockMonomial::vacuum(1);
        let r = check_component_jacobi(&mut e, &h1(), &h1(), &vac, &index_box(-2, 2)).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.instances_checked, 125);
        let r = check_component_jacobi(&mut e, &vac, &vac, &vac, &index_box(-2, 2)).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn jacobi_exercises_cocycle_signs() {
        let l = a1();
        let mut e = ModeEngine::new(&l, TruncationWindow::up_to(32));
        let p = FockMonomial::top(Sector::from_ints(&[1]));
        let m = FockMonomial::top(Sector::from_ints(&[-1]));
        let r = check_component_jacobi(&mut e, &p, &m, &p, &index_box(-1, 1)).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn central_charges() {
        for (l, c) in [(a1(), 1), (hyp(), 2)] {
            let mut e = ModeEngine::new(&l, TruncationWindow::up_to(16));
            let basis: Vec<_> = (0..=3)
                .flat_map(|w| basis_of(&l, &Sector::zero(l.rank()), frac_int(w)))
                .collect();
            assert_eq!(central_charge(&mut e, &basis).unwrap(), q_int(c));
            let (r, none) = check_virasoro(&mut e, 1, -1, &basis).unwrap();
            assert!(r.passed() && none.is_none());
            let (r, _) = check_virasoro(&mut e, 2, -1, &basis).unwrap();
            assert!(r.passed());
        }
    }

    #[test]
    fn derivative_vacuum_creation() {
        let l = a1();
        let mut e = ModeEngine::new(&l, TruncationWindow::up_to(16));
        let basis: Vec<_> = [0, 1, 2]
            .iter()
            .flat_map(|&w| basis_of(&l, &Sector::zero(1), frac_int(w)))
            .chain(basis_of(&l, &Sector::from_ints(&[1]), frac_int(2)))
            .collect();
        let eb = StateVector::basis(FockMonomial::top(Sector::from_ints(&[1])));
        for m in -1..=1 {
            assert!(check_l_minus_one_derivative(&mut e, &eb, m, &basis)
                .unwrap()
                .passed());
        }
        let vac = StateVector::basis(FockMonomial::vacuum(1));
        assert!(check_l_minus_one_derivative(&mut e, &vac, 0, &basis)
            .unwrap()
            .passed());
        assert!(check_vacuum_property(&mut e, &basis, -3..=3)
            .unwrap()
            .passed());
        assert!(check_creation_property(&mut e, &basis).unwrap().passed());
    }
}
