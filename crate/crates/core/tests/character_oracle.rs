//! Graded dimensions against a generating-function oracle.

use latvoa_core::characters::{colored_partition_count, graded_dimension};
use latvoa_core::fock::basis_of;
use latvoa_core::scalar::frac_int;
use latvoa_core::{EvenLattice, Frac, Sector};
use proptest::prelude::*;

/// Coefficients of `Π_{k>=1} (1 - q^k)^{-colors}` up to `q^n_max`, by
/// multiplying in one geometric series per color and depth.
fn series(colors: usize, n_max: usize) -> Vec<u64> {
    let mut a = vec![0u64; n_max + 1];
    a[0] = 1;
    for k in 1..=n_max {
        for _ in 0..colors {
            for n in k..=n_max {
                a[n] += a[n - k];
            }
        }
    }
    a
}

#[test]
fn partition_counts_match_generating_function() {
    for colors in 1..=8 {
        let oracle = series(colors, 20);
        for (n, want) in oracle.iter().enumerate() {
            assert_eq!(
                colored_partition_count(colors, n as u64),
                *want,
                "colors {colors}, n {n}"
            );
        }
    }
    assert_eq!(series(1, 20)[20], 627);
    assert_eq!(series(24, 2)[2], 324);
}

fn diagonal(entries: &[i64]) -> EvenLattice {
    let r = entries.len();
    let gram = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| if i == j { entries[i] } else { 0 })
                .collect()
        })
        .collect();
    EvenLattice::new(gram).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn graded_dimension_is_shifted_partition_count(
        halves in prop::collection::vec(1i64..=3, 1..=8),
        coords in prop::collection::vec(-2i64..=2, 8),
        offset in 0i64..=20,
    ) {
        let gram: Vec<i64> = halves.iter().map(|h| 2 * h).collect();
        let l = diagonal(&gram);
        let r = l.rank();
        let sector = Sector::from_ints(&coords[..r]);
        let norm: i64 = (0..r).map(|i| gram[i] * coords[i] * coords[i]).sum();
        let oracle = series(r, 20);
        let weight = frac_int(norm / 2 + offset);
        prop_assert_eq!(graded_dimension(&l, &sector, weight), oracle[offset as usize]);
        prop_assert_eq!(graded_dimension(&l, &sector, weight - Frac::new(1, 2)), 0);
        if offset <= 6 {
            prop_assert_eq!(basis_of(&l, &sector, weight).len() as u64, oracle[offset as usize]);
        }
    }
}
