//! Scalar types.
//!
//! Coefficients of states are arbitrary precision rationals ([`Q`]). Sector
//! coordinates and conformal weights are small rationals ([`Frac`]) whose
//! denominators divide the lattice determinant.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;
pub type Frac = Rational64;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(r: Frac) -> Q {
    Q::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub fn frac_int(n: i64) -> Frac {
    Frac::from_integer(n)
}

/// Largest integer `<= r`.
pub fn floor(r: Frac) -> i64 {
    r.numer().div_floor(r.denom())
}

pub fn is_integral(r: &Frac) -> bool {
    r.is_integer()
}

/// Generalized binomial coefficient `C(n, k)` for any integer `n` and `k >= 0`.
pub fn binomial(n: i64, k: u64) -> Q {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i as i64);
        den *= BigInt::from(i + 1);
    }
    Q::new(num, den)
}

pub fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Sign `(-1)^n`.
pub fn sign_pow(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Exact conversion of a small rational to `i64` if integral.
pub fn to_i64(r: &Q) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

/// Exact conversion to a small rational, if numerator and denominator fit.
pub fn to_frac(r: &Q) -> Option<Frac> {
    Some(Frac::new(r.numer().to_i64()?, r.denom().to_i64()?))
}

pub fn abs_q(r: &Q) -> Q {
    r.abs()
}

pub fn is_zero(r: &Q) -> bool {
    r.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_negative_upper() {
        // C(-1, k) = (-1)^k
        for k in 0..6 {
            assert_eq!(binomial(-1, k), q_int(sign_pow(k as i64)));
        }
        assert_eq!(binomial(-3, 2), q_int(6));
        assert_eq!(binomial(2, 3), q_int(0));
        assert_eq!(binomial(5, 2), q_int(10));
    }

    #[test]
    fn floor_of_fractions() {
        assert_eq!(floor(Frac::new(-1, 4)), -1);
        assert_eq!(floor(Frac::new(7, 4)), 1);
        assert_eq!(floor(frac_int(-3)), -3);
    }
}
