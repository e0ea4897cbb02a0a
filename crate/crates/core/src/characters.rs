//! Graded dimensions and character tables.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::axioms::CheckReport;
use crate::graded::{CellWindow, GradedModule};
use crate::lattice::{EvenLattice, Sector};
use crate::module::LatticeModule;
use crate::scalar::Frac;
use crate::tensor::TensorModule;

/// Coefficients of `Π_{k≥1} (1-q^k)^{-colors}` up to `q^n_max`.
pub fn colored_partition_table(colors: usize, n_max: u64) -> Vec<u64> {
    let n_max = n_max as usize;
    let mut table = vec![0u64; n_max + 1];
    table[0] = 1;
    for part in 1..=n_max {
        for _ in 0..colors {
            for n in part..=n_max {
                table[n] += table[n - part];
            }
        }
    }
    table
}

/// Number of partitions of `n` into parts of `colors` colors.
pub fn colored_partition_count(colors: usize, n: u64) -> u64 {
    colored_partition_table(colors, n)[n as usize]
}

/// `dim V_{L}^{(β)}_{(n)}`: colored partitions of `n - ⟨β,β⟩/2`, or 0 off the grid.
pub fn graded_dimension(lattice: &EvenLattice, sector: &Sector, weight: Frac) -> u64 {
    if !lattice.in_dual(sector) {
        return 0;
    }
    let off = weight - lattice.half_norm(sector);
    if !off.is_integer() || off < Frac::zero() {
        return 0;
    }
    colored_partition_count(lattice.rank(), off.to_integer() as u64)
}

/// Nonzero cell dimensions `(sector, weight) → dim` up to `max_weight`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterSeries<S: Ord> {
    pub entries: BTreeMap<(S, Frac), u64>,
    pub max_weight: Frac,
}

impl<S: Ord + Clone> CharacterSeries<S> {
    pub fn empty(max_weight: Frac) -> Self {
        Self {
            entries: BTreeMap::new(),
            max_weight,
        }
    }

    pub fn dim(&self, sector: &S, weight: Frac) -> u64 {
        self.entries
            .get(&(sector.clone(), weight))
            .copied()
            .unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of dimensions over all sectors, per weight.
    pub fn totals_by_weight(&self) -> BTreeMap<Frac, u64> {
        let mut out = BTreeMap::new();
        for ((_, w), d) in &self.entries {
            *out.entry(*w).or_insert(0) += d;
        }
        out
    }

    /// Cellwise sum.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, d) in &other.entries {
            *out.entries.entry(k.clone()).or_insert(0) += d;
        }
        out
    }
}

/// Character table of the window by basis enumeration.
pub fn character_series<M: GradedModule>(
    module: &M,
    window: &CellWindow<M::Sector>,
) -> CharacterSeries<M::Sector> {
    let mut out = CharacterSeries::empty(window.max_weight);
    for cell in module.window_cells(window) {
        let d = module.cell_basis(&cell.sector, cell.weight).len() as u64;
        if d > 0 {
            out.entries.insert((cell.sector, cell.weight), d);
        }
    }
    out
}

/// Character of `W₁ ⊗ W₂` (by enumeration of tensor cells) against the
/// weight convolution of the factor characters, over sector boxes of `radius`.
pub fn character_convolution_check(
    w1: &LatticeModule,
    w2: &LatticeModule,
    max_weight: Frac,
    radius: i64,
) -> CheckReport {
    let mut report = CheckReport::new("character-convolution");
    let lowest = |m: &LatticeModule| {
        m.sectors_in_box(radius)
            .iter()
            .map(|s| m.lattice().half_norm(s))
            .min()
    };
    let tensor = TensorModule::new(vec![w1.clone(), w2.clone()]);
    let direct = character_series(&tensor, &tensor.window(max_weight, radius));
    let (Some(low1), Some(low2)) = (lowest(w1), lowest(w2)) else {
        report.compare(|| "zero factor".into(), &direct.entries.len(), &0);
        return report;
    };
    let c1 = character_series(w1, &w1.window(max_weight - low2, radius));
    let c2 = character_series(w2, &w2.window(max_weight - low1, radius));
    let mut conv: BTreeMap<(Vec<Sector>, Frac), u64> = BTreeMap::new();
    for ((s1, n1), d1) in &c1.entries {
        for ((s2, n2), d2) in &c2.entries {
            if *n1 + *n2 <= max_weight {
                *conv
                    .entry((vec![s1.clone(), s2.clone()], *n1 + *n2))
                    .or_insert(0) += d1 * d2;
            }
        }
    }
    let mut keys: Vec<_> = conv.keys().chain(direct.entries.keys()).cloned().collect();
    keys.sort();
    keys.dedup();
    for (s, n) in keys {
        let lhs = direct.dim(&s, n);
        let rhs = conv.get(&(s.clone(), n)).copied().unwrap_or(0);
        report.compare(|| format!("{s:?} weight {n}"), &lhs, &rhs);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::build_coset_module;
    use crate::scalar::frac_int;

    #[test]
    fn small_partition_counts() {
        assert_eq!(colored_partition_table(1, 6), vec![1, 1, 2, 3, 5, 7, 11]);
        assert_eq!(colored_partition_table(2, 3), vec![1, 2, 5, 10]);
        assert_eq!(colored_partition_count(0, 0), 1);
        assert_eq!(colored_partition_count(0, 3), 0);
    }

    #[test]
    fn graded_dimension_examples() {
        let a1 = EvenLattice::new(vec![vec![2]]).unwrap();
        let hyp = EvenLattice::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(graded_dimension(&a1, &Sector::zero(1), frac_int(0)), 1);
        assert_eq!(graded_dimension(&a1, &Sector::zero(1), frac_int(2)), 2);
        assert_eq!(
            graded_dimension(&hyp, &Sector::from_ints(&[1, 1]), frac_int(3)),
            5
        );
        assert_eq!(
            graded_dimension(&a1, &Sector::from_ints(&[1]), frac_int(0)),
            0
        );
        assert_eq!(
            graded_dimension(&a1, &Sector(vec![Frac::new(1, 2)]), Frac::new(1, 2)),
            0
        );
    }

    #[test]
    fn series_and_totals() {
        let a1 = EvenLattice::new(vec![vec![2]]).unwrap();
        let v = LatticeModule::algebra(&a1);
        let s = character_series(&v, &v.window(frac_int(2), 2));
        let totals: Vec<u64> = s.totals_by_weight().into_values().collect();
        assert_eq!(totals, vec![1, 3, 4]);
        let w = build_coset_module(&a1, &Sector(vec![Frac::new(1, 2)])).unwrap();
        let s = character_series(&w, &w.window(frac_int(2), 1));
        assert_eq!(s.dim(&Sector(vec![Frac::new(1, 2)]), Frac::new(1, 4)), 1);
        let z = LatticeModule::zero(&a1);
        assert!(character_series(&z, &z.window(frac_int(3), 1)).is_empty());
    }

    #[test]
    fn dual_character_is_sum_over_cosets() {
        let l = EvenLattice::new(vec![vec![4]]).unwrap();
        let dual = LatticeModule::dual_module(&l);
        let whole = character_series(&dual, &dual.window(frac_int(4), 2));
        let mut sum = CharacterSeries::empty(frac_int(4));
        for c in l.discriminant_group() {
            let m = build_coset_module(&l, &c.rep).unwrap();
            sum = sum.add(&character_series(&m, &m.window(frac_int(4), 2)));
        }
        assert_eq!(whole, sum);
    }

    #[test]
    fn convolution() {
        let a1 = EvenLattice::new(vec![vec![2]]).unwrap();
        let hyp = EvenLattice::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        let v = LatticeModule::algebra(&a1);
        let r = character_convolution_check(&v, &v, frac_int(4), 2);
        assert!(r.passed() && r.instances_checked > 0, "{r:?}");
        let w = build_coset_module(&a1, &Sector(vec![Frac::new(1, 2)])).unwrap();
        let r = character_convolution_check(&LatticeModule::algebra(&hyp), &w, frac_int(3), 1);
        assert!(r.passed() && r.instances_checked > 0, "{r:?}");
        let r = character_convolution_check(&v, &LatticeModule::zero(&a1), frac_int(3), 1);
        assert!(r.passed());
    }
}
