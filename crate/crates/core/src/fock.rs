//! Fock space states of `V_L` and its coset modules.
//!
//! A basis state is `b_{c_1}(-n_1) ··· b_{c_k}(-n_k) ⊗ ι(e_γ)` where the
//! `b_c` are the lattice basis vectors viewed in `𝔥`, and `γ` is the sector.
//! Its weight is `Σ n_i + ⟨γ,γ⟩/2` and its sector (the second grading) is `γ`.

use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::lattice::{EvenLattice, Sector};
use crate::lincomb::LinComb;
use crate::scalar::{frac_int, q_frac, q_int, Frac};

/// A single creation factor `b_color(-depth)`, `depth >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode {
    pub depth: u32,
    pub color: u16,
}

impl Mode {
    pub fn new(depth: u32, color: u16) -> Self {
        Self { depth, color }
    }
}

/// A basis monomial of a lattice Fock space.
///
/// `modes` is kept sorted descending by `(depth, color)` so that equal states
/// are structurally equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockMonomial {
    pub sector: Sector,
    modes: Vec<Mode>,
}

impl FockMonomial {
    pub fn new(sector: Sector, mut modes: Vec<Mode>) -> Self {
        modes.sort_unstable_by(|a, b| b.cmp(a));
        Self { sector, modes }
    }

    /// `ι(e_γ)` with no Heisenberg excitations.
    pub fn top(sector: Sector) -> Self {
        Self {
            sector,
            modes: Vec::new(),
        }
    }

    pub fn vacuum(rank: usize) -> Self {
        Self::top(Sector::zero(rank))
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    /// `Σ n_i`, the Heisenberg part of the weight.
    pub fn mode_degree(&self) -> u64 {
        self.modes.iter().map(|m| m.depth as u64).sum()
    }

    pub fn max_depth(&self) -> u32 {
        self.modes.first().map_or(0, |m| m.depth)
    }

    pub fn with_mode(&self, mode: Mode) -> Self {
        let pos = self.modes.partition_point(|m| *m > mode);
        let mut modes = self.modes.clone();
        modes.insert(pos, mode);
        Self {
            sector: self.sector.clone(),
            modes,
        }
    }

    /// Removes one copy of `mode`; `None` if absent.
    pub fn without_mode(&self, mode: Mode) -> Option<Self> {
        let pos = self.modes.iter().position(|m| *m == mode)?;
        let mut modes = self.modes.clone();
        modes.remove(pos);
        Some(Self {
            sector: self.sector.clone(),
            modes,
        })
    }

    pub fn multiplicity(&self, mode: Mode) -> usize {
        self.modes.iter().filter(|m| **m == mode).count()
    }

    pub fn with_sector(&self, sector: Sector) -> Self {
        Self {
            sector,
            modes: self.modes.clone(),
        }
    }

    /// Splits off the leading (deepest) creation factor.
    pub fn split_first(&self) -> Option<(Mode, FockMonomial)> {
        let (&first, rest) = self.modes.split_first()?;
        Some((
            first,
            Self {
                sector: self.sector.clone(),
                modes: rest.to_vec(),
            },
        ))
    }
}

impl fmt::Display for FockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.modes {
            write!(f, "b{}(-{}) ", m.color + 1, m.depth)?;
        }
        if !self.modes.is_empty() {
            write!(f, "| ")?;
        }
        write!(f, "e({})", self.sector)
    }
}

impl fmt::Debug for FockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub type StateVector = LinComb<FockMonomial>;

/// The pair (conformal weight, sector) of a doubly homogeneous subspace.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DoubleDegree {
    pub weight: Frac,
    pub sector: Sector,
}

pub fn double_degree(lattice: &EvenLattice, m: &FockMonomial) -> DoubleDegree {
    DoubleDegree {
        weight: weight_of(lattice, m),
        sector: m.sector.clone(),
    }
}

pub fn weight_of(lattice: &EvenLattice, m: &FockMonomial) -> Frac {
    frac_int(m.mode_degree() as i64) + lattice.half_norm(&m.sector)
}

/// `b_color(n)` applied to a basis monomial.
pub fn basis_mode_act(lattice: &EvenLattice, color: u16, n: i64, m: &FockMonomial) -> StateVector {
    match n {
        n if n < 0 => StateVector::basis(m.with_mode(Mode::new((-n) as u32, color))),
        0 => {
            let eig = lattice.pairings(&m.sector)[color as usize];
            StateVector::term(m.clone(), q_frac(eig))
        }
        n => {
            // [b_c(n), b_d(-n)] = n ⟨b_c, b_d⟩
            let depth = n as u32;
            let row = &lattice.gram()[color as usize];
            let mut out = StateVector::zero();
            let mut prev: Option<Mode> = None;
            for &mode in m.modes().iter().filter(|md| md.depth == depth) {
                if prev == Some(mode) {
                    continue;
                }
                prev = Some(mode);
                let g = row[mode.color as usize];
                if g == 0 {
                    continue;
                }
                let mult = m.multiplicity(mode) as i64;
                let rest = m.without_mode(mode).expect("mode present");
                out.add_term(rest, q_int(n * g * mult));
            }
            out
        }
    }
}

/// `h(n)` for `h = Σ h_c b_c ∈ 𝔥` applied to a state.
pub fn heisenberg_act(lattice: &EvenLattice, h: &[Frac], n: i64, v: &StateVector) -> StateVector {
    let mut out = StateVector::zero();
    for (m, c) in v.iter() {
        for (color, hc) in h.iter().enumerate() {
            if hc.is_zero() {
                continue;
            }
            let img = basis_mode_act(lattice, color as u16, n, m);
            out.add_scaled(&img, &(c * q_frac(*hc)));
        }
    }
    out
}

/// All colored partitions of `n` with `colors` colors, as descending mode lists.
pub fn colored_partitions(n: u64, colors: usize) -> Vec<Vec<Mode>> {
    fn rec(rem: u64, bound: Mode, colors: usize, cur: &mut Vec<Mode>, out: &mut Vec<Vec<Mode>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        let top = (bound.depth as u64).min(rem) as u32;
        for depth in (1..=top).rev() {
            let max_color = if depth == bound.depth {
                bound.color as usize
            } else {
                colors - 1
            };
            for color in (0..=max_color).rev() {
                let mode = Mode::new(depth, color as u16);
                cur.push(mode);
                rec(rem - depth as u64, mode, colors, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if colors == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let start = Mode::new(n as u32, (colors - 1) as u16);
    rec(n, start, colors, &mut Vec::new(), &mut out);
    out
}

/// Basis of the doubly homogeneous subspace of the given sector and weight.
///
/// Empty when `weight - ⟨β,β⟩/2` is not a nonnegative integer.
pub fn basis_of(lattice: &EvenLattice, sector: &Sector, weight: Frac) -> Vec<FockMonomial> {
    let offset = weight - lattice.half_norm(sector);
    if !offset.is_integer() || offset < Frac::zero() {
        return Vec::new();
    }
    colored_partitions(offset.to_integer() as u64, lattice.rank())
        .into_iter()
        .map(|modes| FockMonomial {
            sector: sector.clone(),
            modes,
        })
        .collect()
}

pub fn project_degree(lattice: &EvenLattice, v: &StateVector, d: &DoubleDegree) -> StateVector {
    v.filter(|m| m.sector == d.sector && weight_of(lattice, m) == d.weight)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn a1() -> EvenLattice {
        EvenLattice::new(vec![vec![2]]).unwrap()
    }

    fn hyp() -> EvenLattice {
        EvenLattice::new(vec![vec![0, 1], vec![1, 0]]).unwrap()
    }

    fn s(c: &[i64]) -> Sector {
        Sector::from_ints(c)
    }

    #[test]
    fn annihilation_and_zero_mode() {
        let l = a1();
        let vac = StateVector::basis(FockMonomial::vacuum(1));
        assert!(heisenberg_act(&l, &[frac_int(1)], 1, &vac).is_zero());
        let top = StateVector::basis(FockMonomial::top(s(&[1])));
        assert_eq!(
            heisenberg_act(&l, &[frac_int(1)], 0, &top),
            top.scale(&q_int(2))
        );
        let excited = heisenberg_act(&l, &[frac_int(1)], -1, &vac);
        assert_eq!(
            heisenberg_act(&l, &[frac_int(1)], 1, &excited),
            vac.scale(&q_int(2))
        );
    }

    #[test]
    fn degrees() {
        let l = a1();
        assert_eq!(
            double_degree(&l, &FockMonomial::vacuum(1)).weight,
            frac_int(0)
        );
        assert_eq!(
            double_degree(&l, &FockMonomial::top(s(&[1]))).weight,
            frac_int(1)
        );
        let m = FockMonomial::new(s(&[1]), vec![Mode::new(1, 0), Mode::new(2, 0)]);
        assert_eq!(
            double_degree(&l, &m),
            DoubleDegree {
                weight: frac_int(4),
                sector: s(&[1])
            }
        );
        assert_eq!(alloc::format!("{m}"), "b1(-2) b1(-1) | e(1)");
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(basis_of(&a1(), &s(&[0]), frac_int(0)).len(), 1);
        assert_eq!(basis_of(&a1(), &s(&[0]), frac_int(2)).len(), 2);
        assert_eq!(basis_of(&hyp(), &s(&[0, 0]), frac_int(2)).len(), 5);
        assert!(basis_of(&a1(), &s(&[1]), frac_int(0)).is_empty());
        assert!(basis_of(&a1(), &Sector(vec![Frac::new(1, 2)]), frac_int(1)).is_empty());
        assert_eq!(
            basis_of(&a1(), &Sector(vec![Frac::new(1, 2)]), Frac::new(5, 4)).len(),
            1
        );
    }

    #[test]
    fn projection() {
        let l = a1();
        let vac = FockMonomial::vacuum(1);
        let ex = vac.with_mode(Mode::new(1, 0));
        let v: StateVector = [(vac.clone(), q_int(1)), (ex.clone(), q_int(1))]
            .into_iter()
            .collect();
        let d1 = DoubleDegree {
            weight: frac_int(1),
            sector: s(&[0]),
        };
        assert_eq!(project_degree(&l, &v, &d1), StateVector::basis(ex));
        let d0 = DoubleDegree {
            weight: frac_int(0),
            sector: s(&[0]),
        };
        assert_eq!(
            project_degree(&l, &StateVector::basis(vac.clone()), &d0),
            StateVector::basis(vac)
        );
        let wrong = DoubleDegree {
            weight: frac_int(1),
            sector: s(&[-1]),
        };
        assert!(
            project_degree(&l, &StateVector::basis(FockMonomial::top(s(&[1]))), &wrong).is_zero()
        );
    }

    #[test]
    fn canonical_order_is_structural() {
        let a = FockMonomial::new(
            s(&[0, 0]),
            vec![Mode::new(1, 0), Mode::new(2, 1), Mode::new(1, 1)],
        );
        let b = FockMonomial::new(
            s(&[0, 0]),
            vec![Mode::new(1, 1), Mode::new(1, 0), Mode::new(2, 1)],
        );
        assert_eq!(a, b);
        let c = FockMonomial::new(s(&[0, 0]), vec![Mode::new(2, 1)])
            .with_mode(Mode::new(1, 0))
            .with_mode(Mode::new(1, 1));
        assert_eq!(a, c);
    }
}
