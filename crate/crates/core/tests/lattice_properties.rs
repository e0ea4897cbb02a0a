//! Property tests for lattices, the cocycle and the Heisenberg action.

use latvoa_core::fock::{basis_of, heisenberg_act};
use latvoa_core::scalar::{frac_int, q_frac};
use latvoa_core::{EvenLattice, Frac, Sector, StateVector};
use proptest::prelude::*;

/// Random symmetric even Gram matrices of rank 1 to 3; some are degenerate.
fn gram() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=3).prop_flat_map(|r| {
        prop::collection::vec(-3i64..=3, r * (r + 1) / 2).prop_map(move |entries| {
            let mut g = vec![vec![0; r]; r];
            let mut k = 0;
            for i in 0..r {
                for j in 0..=i {
                    let v = if i == j { 2 * entries[k] } else { entries[k] };
                    g[i][j] = v;
                    g[j][i] = v;
                    k += 1;
                }
            }
            g
        })
    })
}

fn lattice() -> impl Strategy<Value = EvenLattice> {
    gram().prop_filter_map("nondegenerate", |g| EvenLattice::new(g).ok())
}

fn vector(rank: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, rank)
}

fn pairing(l: &EvenLattice, a: &[i64], b: &[i64]) -> i64 {
    let g = l.gram();
    (0..a.len())
        .flat_map(|i| (0..b.len()).map(move |j| (i, j)))
        .map(|(i, j)| a[i] * g[i][j] * b[j])
        .sum()
}

proptest! {
    #[test]
    fn cocycle_is_bimultiplicative_with_commutator_sign(
        (l, a, b, c) in lattice().prop_flat_map(|l| {
            let r = l.rank();
            (Just(l), vector(r), vector(r), vector(r))
        })
    ) {
        let eps = l.cocycle();
        let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        prop_assert_eq!(
            eps.eval_coords(&sum, &c),
            eps.eval_coords(&a, &c) * eps.eval_coords(&b, &c)
        );
        prop_assert_eq!(
            eps.eval_coords(&c, &sum),
            eps.eval_coords(&c, &a) * eps.eval_coords(&c, &b)
        );
        let sign = if pairing(&l, &a, &b).rem_euclid(2) == 0 { 1 } else { -1 };
        prop_assert_eq!(eps.eval_coords(&a, &b) * eps.eval_coords(&b, &a), sign);
        let zero = vec![0; l.rank()];
        prop_assert_eq!(eps.eval_coords(&zero, &a), 1);
        prop_assert_eq!(eps.eval_coords(&a, &zero), 1);
    }

    #[test]
    fn discriminant_group_has_order_det(l in lattice()) {
        let cosets = l.discriminant_group();
        prop_assert_eq!(cosets.len() as i64, l.det().abs());
        for (i, x) in cosets.iter().enumerate() {
            prop_assert!(l.in_dual(&x.rep));
            for y in &cosets[..i] {
                prop_assert!(!l.same_coset(&x.rep, &y.rep));
            }
        }
    }

    #[test]
    fn heisenberg_commutator(
        (l, h1, h2, m, n, w) in lattice().prop_flat_map(|l| {
            let r = l.rank();
            (Just(l), vector(r), vector(r), -3i64..=3, -3i64..=3, 0i64..=3)
        })
    ) {
        let h1: Vec<Frac> = h1.into_iter().map(frac_int).collect();
        let h2: Vec<Frac> = h2.into_iter().map(frac_int).collect();
        let sector = Sector::zero(l.rank());
        let pair: Frac = (0..l.rank())
            .flat_map(|i| (0..l.rank()).map(move |j| (i, j)))
            .map(|(i, j)| h1[i] * h2[j] * frac_int(l.gram()[i][j]))
            .sum();
        for v in basis_of(&l, &sector, frac_int(w)) {
            let v = StateVector::basis(v);
            let ab = heisenberg_act(&l, &h1, m, &heisenberg_act(&l, &h2, n, &v));
            let ba = heisenberg_act(&l, &h2, n, &heisenberg_act(&l, &h1, m, &v));
            let expected = if m + n == 0 { v.scale(&q_frac(pair * frac_int(m))) } else { StateVector::zero() };
            prop_assert_eq!(ab - ba, expected);
        }
    }
}
