//! Even lattices, their discriminant groups and the sign cocycle.
//!
//! A lattice is given by its Gram matrix in a fixed ordered basis
//! `b_1, ..., b_r`. Elements of the dual lattice `L°` are written in the same
//! basis with rational coordinates; a rational vector `x` lies in `L°` iff
//! `gram · x` is integral.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::Zero;

use crate::error::LatticeError;
use crate::scalar::{frac_int, Frac};

/// Coordinates of an element of `𝔥 = L ⊗ ℚ` in the lattice basis.
///
/// Used both for lattice vectors (integral coordinates) and for elements of
/// the dual lattice, which label the sectors of coset modules.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Sector(pub Vec<Frac>);

impl Sector {
    pub fn zero(rank: usize) -> Self {
        Sector(vec![Frac::zero(); rank])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Sector(coords.iter().map(|&c| frac_int(c)).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn add(&self, other: &Sector) -> Sector {
        Sector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Sector) -> Sector {
        Sector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Sector {
        Sector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: Frac) -> Sector {
        Sector(self.0.iter().map(|a| a * c).collect())
    }

    /// Integer coordinates, if integral.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.0
            .iter()
            .map(|c| {
                if c.is_integer() {
                    Some(c.to_integer())
                } else {
                    None
                }
            })
            .collect()
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// An element of the lattice `L` in basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    pub coords: Vec<i64>,
}

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Self {
        Self { coords }
    }

    pub fn to_sector(&self) -> Sector {
        Sector::from_ints(&self.coords)
    }
}

/// A class `β + L` in `L°/L`, represented by its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualCoset {
    pub rep: Sector,
    /// Order of `β + L` in `L°/L`.
    pub order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Smith {
    /// Invariant factors `d_1 | d_2 | ... | d_r`, all positive.
    diag: Vec<i64>,
    /// Unimodular `U` with `U · gram · V = diag`.
    u: Vec<Vec<i64>>,
    u_inv: Vec<Vec<i64>>,
}

/// A nondegenerate even lattice given by its Gram matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct EvenLattice {
    gram: Vec<Vec<i64>>,
    det: i64,
    inverse: Vec<Vec<Frac>>,
    smith: Smith,
}

impl fmt::Debug for EvenLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EvenLattice({self})")
    }
}

/// Canonical report form: `rank r, det d, gram [[..],..]`.
impl fmt::Display for EvenLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rank {}, det {}, gram [", self.rank(), self.det)?;
        for (i, row) in self.gram.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl EvenLattice {
    /// Validates a Gram matrix and builds the lattice.
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let r = gram.len();
        if r == 0 {
            return Err(LatticeError::Empty);
        }
        if gram.iter().any(|row| row.len() != r) {
            return Err(LatticeError::NotSquare);
        }
        for i in 0..r {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric { row: i, col: j });
                }
            }
        }
        for (i, row) in gram.iter().enumerate() {
            if row[i].rem_euclid(2) != 0 {
                return Err(LatticeError::NotEven {
                    index: i,
                    value: row[i],
                });
            }
        }
        let det = determinant(&gram);
        if det == 0 {
            return Err(LatticeError::Degenerate);
        }
        let inverse = rational_inverse(&gram);
        let smith = smith_form(&gram);
        Ok(Self {
            gram,
            det,
            inverse,
            smith,
        })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn det(&self) -> i64 {
        self.det
    }

    pub fn gram_inverse(&self) -> &[Vec<Frac>] {
        &self.inverse
    }

    /// Invariant factors of the Gram matrix; `L°/L ≅ ⊕ ℤ/d_i`.
    pub fn invariant_factors(&self) -> &[i64] {
        &self.smith.diag
    }

    /// Orthogonal direct sum `self ⊕ other` (block diagonal Gram matrix).
    pub fn orthogonal_sum(&self, other: &EvenLattice) -> EvenLattice {
        let (r1, r2) = (self.rank(), other.rank());
        let mut gram = vec![vec![0i64; r1 + r2]; r1 + r2];
        for i in 0..r1 {
            gram[i][..r1].copy_from_slice(&self.gram[i]);
        }
        for i in 0..r2 {
            gram[r1 + i][r1..].copy_from_slice(&other.gram[i]);
        }
        EvenLattice::new(gram).expect("orthogonal sum of even lattices is even and nondegenerate")
    }

    /// `gram · x`, the vector of pairings `⟨b_i, x⟩`.
    pub fn pairings(&self, x: &Sector) -> Vec<Frac> {
        self.gram
            .iter()
            .map(|row| row.iter().zip(&x.0).map(|(&g, c)| frac_int(g) * c).sum())
            .collect()
    }

    pub fn pair(&self, x: &Sector, y: &Sector) -> Frac {
        self.pairings(x).iter().zip(&y.0).map(|(a, b)| a * b).sum()
    }

    /// `⟨β,β⟩/2`, the lowest weight of the sector `β`.
    pub fn half_norm(&self, x: &Sector) -> Frac {
        self.pair(x, x) / frac_int(2)
    }

    pub fn in_dual(&self, x: &Sector) -> bool {
        x.rank() == self.rank() && self.pairings(x).iter().all(|c| c.is_integer())
    }

    pub fn in_lattice(&self, x: &Sector) -> bool {
        x.rank() == self.rank() && x.is_integral()
    }

    /// Applies `gram⁻¹` to a rational vector.
    pub fn apply_inverse(&self, y: &[Frac]) -> Sector {
        Sector(
            self.inverse
                .iter()
                .map(|row| row.iter().zip(y).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    /// Coordinates of `gram·x` in `⊕ ℤ/d_i`, reduced to `[0, d_i)`.
    fn smith_coords(&self, x: &Sector) -> Vec<i64> {
        let y: Vec<i64> = self.pairings(x).iter().map(|c| c.to_integer()).collect();
        self.smith
            .u
            .iter()
            .zip(&self.smith.diag)
            .map(|(row, &d)| {
                let v: i128 = row
                    .iter()
                    .zip(&y)
                    .map(|(&a, &b)| a as i128 * b as i128)
                    .sum();
                v.rem_euclid(d as i128) as i64
            })
            .collect()
    }

    fn sector_of_smith_coords(&self, z: &[i64]) -> Sector {
        let y: Vec<Frac> = self
            .smith
            .u_inv
            .iter()
            .map(|row| frac_int(row.iter().zip(z).map(|(&a, &b)| a * b).sum()))
            .collect();
        self.apply_inverse(&y)
    }

    /// Canonical representative of `x + L` for `x ∈ L°`.
    pub fn canonical_rep(&self, x: &Sector) -> Sector {
        debug_assert!(self.in_dual(x));
        self.sector_of_smith_coords(&self.smith_coords(x))
    }

    pub fn same_coset(&self, x: &Sector, y: &Sector) -> bool {
        self.in_lattice(&x.sub(y))
    }

    /// The coset `x + L`, if `x ∈ L°`.
    pub fn dual_coset(&self, x: &Sector) -> Option<DualCoset> {
        if !self.in_dual(x) {
            return None;
        }
        let z = self.smith_coords(x);
        let order = z
            .iter()
            .zip(&self.smith.diag)
            .map(|(&c, &d)| (d / c.gcd(&d)) as u64)
            .fold(1u64, |acc, o| acc.lcm(&o));
        Some(DualCoset {
            rep: self.sector_of_smith_coords(&z),
            order,
        })
    }

    /// All classes of `L°/L`, zero coset first; `|det|` of them.
    pub fn discriminant_group(&self) -> Vec<DualCoset> {
        let diag = &self.smith.diag;
        let total: i64 = diag.iter().product();
        let mut out = Vec::with_capacity(total as usize);
        let mut z = vec![0i64; diag.len()];
        for _ in 0..total {
            let rep = self.sector_of_smith_coords(&z);
            out.push(
                self.dual_coset(&rep)
                    .expect("smith coordinates give dual vectors"),
            );
            // mixed-radix increment, first coordinate fastest
            for (c, &d) in z.iter_mut().zip(diag) {
                *c += 1;
                if *c < d {
                    break;
                }
                *c = 0;
            }
        }
        out
    }

    /// All `rep + λ` with `λ ∈ ℤ^rank`, `|λ_i| <= radius`.
    pub fn sectors_in_box(&self, rep: &Sector, radius: i64) -> Vec<Sector> {
        let r = self.rank();
        let mut out = Vec::new();
        let mut lam = vec![-radius; r];
        loop {
            out.push(rep.add(&Sector::from_ints(&lam)));
            let mut i = 0;
            loop {
                if i == r {
                    return out;
                }
                lam[i] += 1;
                if lam[i] <= radius {
                    break;
                }
                lam[i] = -radius;
                i += 1;
            }
        }
    }

    pub fn cocycle(&self) -> EpsilonCocycle<'_> {
        EpsilonCocycle { lattice: self }
    }
}

/// The sign cocycle `ε: L × L → {±1}` realizing the central extension of `L`
/// by `{±1}`.
///
/// On the ordered basis, `ε(b_i, b_j) = (-1)^{⟨b_i,b_j⟩}` for `i > j` and `1`
/// otherwise; it is extended bimultiplicatively, so
/// `ε(α,β) ε(β,α) = (-1)^{⟨α,β⟩}`.
#[derive(Clone, Copy, Debug)]
pub struct EpsilonCocycle<'a> {
    lattice: &'a EvenLattice,
}

impl<'a> EpsilonCocycle<'a> {
    pub fn lattice(&self) -> &'a EvenLattice {
        self.lattice
    }

    pub fn eval(&self, a: &LatticeVector, b: &LatticeVector) -> i64 {
        self.eval_coords(&a.coords, &b.coords)
    }

    pub fn eval_coords(&self, a: &[i64], b: &[i64]) -> i64 {
        let g = &self.lattice.gram;
        let mut parity = 0i128;
        for i in 0..a.len() {
            for j in 0..i {
                parity += (a[i] as i128) * (b[j] as i128) * (g[i][j] as i128);
            }
        }
        if parity.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    /// Sign for `a ∈ L` acting on a sector `γ ∈ L°`: `ε(a, γ - rep(γ))`, where
    /// `rep(γ)` is the canonical representative of `γ + L`.
    pub fn eval_on_sector(&self, a: &[i64], gamma: &Sector) -> i64 {
        let rep = self.lattice.canonical_rep(gamma);
        let lam = gamma
            .sub(&rep)
            .to_ints()
            .expect("difference of coset members is a lattice vector");
        self.eval_coords(a, &lam)
    }
}

fn determinant(m: &[Vec<i64>]) -> i64 {
    // Bareiss fraction-free elimination.
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

fn rational_inverse(m: &[Vec<i64>]) -> Vec<Vec<Frac>> {
    let n = m.len();
    let mut a: Vec<Vec<Frac>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Frac> = row.iter().map(|&x| frac_int(x)).collect();
            r.extend((0..n).map(|j| if i == j { frac_int(1) } else { Frac::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&i| !a[i][col].is_zero())
            .expect("nonsingular");
        a.swap(piv, col);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        let pivot_row = a[col].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != col && !row[col].is_zero() {
                let f = row[col];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Smith normal form `U · m · V = diag`, tracking `U` and `U⁻¹`.
fn smith_form(m: &[Vec<i64>]) -> Smith {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let ident = |n: usize| -> Vec<Vec<i128>> {
        (0..n)
            .map(|i| (0..n).map(|j| (i == j) as i128).collect())
            .collect()
    };
    let mut u = ident(n);
    let mut u_inv = ident(n);

    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block moves to (t, t)
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let (pi, pj) = best.expect("nonsingular matrix");
            if pi != t {
                a.swap(pi, t);
                u.swap(pi, t);
                for row in u_inv.iter_mut() {
                    row.swap(pi, t);
                }
            }
            if pj != t {
                for row in a.iter_mut() {
                    row.swap(pj, t);
                }
            }
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..n {
                let q = Integer::div_floor(&a[i][t], &p);
                if q != 0 {
                    for j in 0..n {
                        a[i][j] -= q * a[t][j];
                        u[i][j] -= q * u[t][j];
                    }
                    for row in u_inv.iter_mut() {
                        row[t] += q * row[i];
                    }
                }
                dirty |= a[i][t] != 0;
            }
            for j in t + 1..n {
                let q = Integer::div_floor(&a[t][j], &p);
                if q != 0 {
                    for row in a.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
                dirty |= a[t][j] != 0;
            }
            if dirty {
                continue;
            }
            // divisibility: fold an offending row into row t and repeat
            let offending = (t + 1..n).find(|&i| (t + 1..n).any(|j| a[i][j] % p != 0));
            if let Some(i) = offending {
                for j in 0..n {
                    a[t][j] += a[i][j];
                    u[t][j] += u[i][j];
                }
                for row in u_inv.iter_mut() {
                    row[i] -= row[t];
                }
                continue;
            }
            break;
        }
        if a[t][t] < 0 {
            for j in 0..n {
                a[t][j] = -a[t][j];
                u[t][j] = -u[t][j];
            }
            for row in u_inv.iter_mut() {
                row[t] = -row[t];
            }
        }
    }
    let to64 = |m: Vec<Vec<i128>>| -> Vec<Vec<i64>> {
        m.into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|x| i64::try_from(x).expect("smith entry fits i64"))
                    .collect()
            })
            .collect()
    };
    Smith {
        diag: (0..n).map(|i| a[i][i] as i64).collect(),
        u: to64(u),
        u_inv: to64(u_inv),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(g: &[&[i64]]) -> EvenLattice {
        EvenLattice::new(g.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn builds_small_lattices() {
        let a1 = lat(&[&[2]]);
        assert_eq!((a1.rank(), a1.det()), (1, 2));
        let h = lat(&[&[0, 1], &[1, 0]]);
        assert_eq!((h.rank(), h.det()), (2, -1));
        assert_eq!(alloc::format!("{h}"), "rank 2, det -1, gram [[0,1],[1,0]]");
    }

    #[test]
    fn rejects_bad_gram() {
        assert_eq!(
            EvenLattice::new(vec![vec![1]]),
            Err(LatticeError::NotEven { index: 0, value: 1 })
        );
        assert_eq!(
            EvenLattice::new(vec![vec![2, 1], vec![0, 2]]),
            Err(LatticeError::NotSymmetric { row: 1, col: 0 })
        );
        assert_eq!(
            EvenLattice::new(vec![vec![2, 2], vec![2, 2]]),
            Err(LatticeError::Degenerate)
        );
        assert_eq!(EvenLattice::new(vec![]), Err(LatticeError::Empty));
        assert_eq!(
            EvenLattice::new(vec![vec![2, 0]]),
            Err(LatticeError::NotSquare)
        );
    }

    #[test]
    fn discriminant_of_rank_one() {
        let a1 = lat(&[&[2]]);
        let d = a1.discriminant_group();
        assert_eq!(d.len(), 2);
        assert!(d[0].rep.is_zero());
        assert_eq!(d[1].rep, Sector(vec![Frac::new(1, 2)]));
        assert_eq!(d[1].order, 2);
        assert_eq!(lat(&[&[4]]).discriminant_group().len(), 4);
        assert_eq!(lat(&[&[0, 1], &[1, 0]]).discriminant_group().len(), 1);
    }

    #[test]
    fn a2_discriminant_is_cyclic_of_order_three() {
        let a2 = lat(&[&[2, -1], &[-1, 2]]);
        let d = a2.discriminant_group();
        assert_eq!(d.len(), 3);
        assert_eq!(d.iter().filter(|c| c.order == 3).count(), 2);
        for c in &d {
            assert!(a2.in_dual(&c.rep));
            assert_eq!(a2.canonical_rep(&c.rep), c.rep);
        }
    }

    #[test]
    fn canonical_rep_is_coset_invariant() {
        let l = lat(&[&[4, 2], &[2, 6]]);
        for c in l.discriminant_group() {
            for shift in l.sectors_in_box(&Sector::zero(2), 2) {
                assert_eq!(l.canonical_rep(&c.rep.add(&shift)), c.rep);
            }
        }
    }

    #[test]
    fn cocycle_commutator_on_basis() {
        let l = lat(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 4]]);
        let eps = l.cocycle();
        for i in 0..3 {
            for j in 0..3 {
                let mut a = vec![0; 3];
                let mut b = vec![0; 3];
                a[i] = 1;
                b[j] = 1;
                let lhs = eps.eval_coords(&a, &b) * eps.eval_coords(&b, &a);
                let rhs = if l.gram()[i][j].rem_euclid(2) == 0 {
                    1
                } else {
                    -1
                };
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn box_enumeration_size() {
        let l = lat(&[&[0, 1], &[1, 0]]);
        assert_eq!(l.sectors_in_box(&Sector::zero(2), 1).len(), 9);
    }
}
