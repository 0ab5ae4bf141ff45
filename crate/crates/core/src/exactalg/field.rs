//! Gaussian elimination over exact fields: `Q` and the prime fields `F_p`.
//!
//! The rational path is deliberately separate from the integer SNF path, so
//! characteristic-zero results can cross-check the integral ones.

use crate::EngineError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[allow(clippy::wrong_self_convention)]
pub trait Field {
    type Elt: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elt;
    fn one(&self) -> Self::Elt;
    fn add(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn sub(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn mul(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn inv(&self, a: &Self::Elt) -> Self::Elt;
    fn neg(&self, a: &Self::Elt) -> Self::Elt;
    fn from_bigint(&self, v: &BigInt) -> Self::Elt;

    fn is_zero(&self, a: &Self::Elt) -> bool {
        *a == self.zero()
    }
}

/// The field of fractions of `Z`.
#[derive(Debug, Clone, Copy)]
pub struct Rationals;

impl Field for Rationals {
    type Elt = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        BigRational::one() / a
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, EngineError> {
        if super::is_prime(p) {
            Ok(PrimeField { p })
        } else {
            Err(EngineError::InvalidRing(format!("{p} is not prime")))
        }
    }
}

impl Field for PrimeField {
    type Elt = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + (self.p - *b) as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "division by zero in F_p");
        super::pow_mod(*a, self.p - 2, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - *a
        }
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        use num_integer::Integer;
        let m = v.mod_floor(&BigInt::from(self.p));
        u64::try_from(&m).expect("mod_floor result fits")
    }
}

pub type FMat<F> = Vec<Vec<<F as Field>::Elt>>;

/// Row-reduce in place; returns the pivot column of each pivot row.
#[allow(clippy::needless_range_loop)]
pub fn rref<F: Field>(f: &F, m: &mut FMat<F>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !f.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, pr);
        let inv = f.inv(&m[r][c]);
        for j in c..cols {
            m[r][j] = f.mul(&m[r][j], &inv);
        }
        for i in 0..rows {
            if i != r && !f.is_zero(&m[i][c]) {
                let factor = m[i][c].clone();
                for j in c..cols {
                    let t = f.mul(&factor, &m[r][j]);
                    m[i][j] = f.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank_f<F: Field>(f: &F, m: &FMat<F>) -> usize {
    let mut work = m.clone();
    rref(f, &mut work).len()
}

/// Kernel basis of `m : F^cols -> F^rows` (column-vector convention). The
/// column count is passed explicitly because a 0-row matrix carries no
/// shape information.
pub fn kernel_basis_f<F: Field>(f: &F, m: &FMat<F>, cols: usize) -> Vec<Vec<F::Elt>> {
    if m.is_empty() {
        // zero map out of F^cols
        return (0..cols)
            .map(|j| {
                let mut v = vec![f.zero(); cols];
                v[j] = f.one();
                v
            })
            .collect();
    }
    debug_assert_eq!(m[0].len(), cols);
    let mut work = m.clone();
    let pivots = rref(f, &mut work);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free_col in (0..cols).filter(|c| !pivot_set.contains(c)) {
        let mut v = vec![f.zero(); cols];
        v[free_col] = f.one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(&work[row][free_col]);
        }
        basis.push(v);
    }
    basis
}

/// Any solution of `m x = b` over the field, if one exists.
pub fn solve_f<F: Field>(f: &F, m: &FMat<F>, cols: usize, b: &[F::Elt]) -> Option<Vec<F::Elt>> {
    let rows = m.len();
    assert_eq!(b.len(), rows);
    if rows == 0 {
        return Some(vec![f.zero(); cols]);
    }
    debug_assert_eq!(m[0].len(), cols);
    let mut aug: FMat<F> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.last().is_some_and(|&c| c == cols) {
        return None; // pivot in the augmented column
    }
    let mut x = vec![f.zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_elimination() {
        let f = Rationals;
        let m: FMat<Rationals> = vec![
            vec![f.from_bigint(&BigInt::from(2)), f.from_bigint(&BigInt::from(4))],
            vec![f.from_bigint(&BigInt::from(1)), f.from_bigint(&BigInt::from(2))],
        ];
        assert_eq!(rank_f(&f, &m), 1);
        let k = kernel_basis_f(&f, &m, 2);
        assert_eq!(k.len(), 1);
    }

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7u64 {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
        assert!(PrimeField::new(9).is_err());
    }

    #[test]
    fn solve_over_f3() {
        let f = PrimeField::new(3).unwrap();
        // x + 2y = 1, 2x + y = 2 over F_3
        let m = vec![vec![1u64, 2], vec![2, 1]];
        let x = solve_f(&f, &m, 2, &[1, 2]).unwrap();
        let eval0 = f.add(&f.mul(&m[0][0], &x[0]), &f.mul(&m[0][1], &x[1]));
        let eval1 = f.add(&f.mul(&m[1][0], &x[0]), &f.mul(&m[1][1], &x[1]));
        assert_eq!((eval0, eval1), (1, 2));
        // inconsistent system
        let m2 = vec![vec![1u64, 2], vec![2, 4 % 3]];
        assert!(solve_f(&f, &m2, 2, &[1, 0]).is_none());
    }
}
