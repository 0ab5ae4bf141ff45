//! Smith normal form with unimodular transforms.
//!
//! Pivoting: smallest nonzero absolute value in the working submatrix,
//! ties broken by (row index, column index), so transforms are reproducible.

use super::IntMatrix;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// `left_transform * original * right_transform` equals the diagonal of
/// `invariant_factors` padded with zeros. Both transforms are unimodular.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub invariant_factors: Vec<BigInt>,
    pub left_transform: IntMatrix,
    pub right_transform: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let rows = m.nrows();
    let cols = m.ncols();
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);

    let mut k = 0;
    while k < rows.min(cols) {
        let Some((pi, pj)) = pivot(&a, k) else { break };
        swap_rows(&mut a, &mut left, k, pi);
        swap_cols(&mut a, &mut right, k, pj);

        loop {
            // Clear column k by row operations, re-pivoting on remainders.
            let mut dirty = false;
            for i in k + 1..rows {
                if a.at(i, k).is_zero() {
                    continue;
                }
                let q = a.at(i, k) / a.at(k, k);
                if !q.is_zero() {
                    row_op(&mut a, &mut left, i, k, &q);
                }
                if !a.at(i, k).is_zero() {
                    // remainder is strictly smaller; make it the pivot
                    swap_rows(&mut a, &mut left, k, i);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            for j in k + 1..cols {
                if a.at(k, j).is_zero() {
                    continue;
                }
                let q = a.at(k, j) / a.at(k, k);
                if !q.is_zero() {
                    col_op(&mut a, &mut right, j, k, &q);
                }
                if !a.at(k, j).is_zero() {
                    swap_cols(&mut a, &mut right, k, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Row and column k are clear. Enforce that the pivot divides the
            // rest of the submatrix.
            if let Some(i) = first_nondivisible(&a, k) {
                let one = BigInt::from(-1);
                row_op(&mut a, &mut left, k, i, &one); // row_k += row_i
                continue;
            }
            break;
        }

        if a.at(k, k).is_negative() {
            negate_row(&mut a, &mut left, k);
        }
        k += 1;
    }

    let mut invariant_factors = Vec::new();
    for i in 0..rows.min(cols) {
        if a.at(i, i).is_zero() {
            break;
        }
        invariant_factors.push(a.at(i, i).clone());
    }

    let form = SmithForm {
        invariant_factors,
        left_transform: left,
        right_transform: right,
    };
    debug_assert!(verify(m, &form), "SNF transform identity violated");
    form
}

fn verify(m: &IntMatrix, s: &SmithForm) -> bool {
    let prod = s.left_transform.mul(m).mul(&s.right_transform);
    for i in 0..prod.nrows() {
        for j in 0..prod.ncols() {
            let expect = if i == j && i < s.invariant_factors.len() {
                s.invariant_factors[i].clone()
            } else {
                BigInt::zero()
            };
            if prod.at(i, j) != &expect {
                return false;
            }
        }
    }
    true
}

/// Smallest nonzero |entry| in the submatrix at (k,k), ties by (row, col).
fn pivot(a: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in k..a.nrows() {
        for j in k..a.ncols() {
            let v = a.at(i, j);
            if v.is_zero() {
                continue;
            }
            let abs = v.abs();
            match &best {
                Some((b, _, _)) if *b <= abs => {}
                _ => best = Some((abs, i, j)),
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

fn first_nondivisible(a: &IntMatrix, k: usize) -> Option<usize> {
    let d = a.at(k, k).clone();
    for i in k + 1..a.nrows() {
        for j in k + 1..a.ncols() {
            if !(a.at(i, j) % &d).is_zero() {
                return Some(i);
            }
        }
    }
    None
}

fn swap_rows(a: &mut IntMatrix, left: &mut IntMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for c in 0..a.ncols() {
        let tmp = a.at(i, c).clone();
        let other = a.at(j, c).clone();
        a.set(i, c, other);
        a.set(j, c, tmp);
    }
    for c in 0..left.ncols() {
        let tmp = left.at(i, c).clone();
        let other = left.at(j, c).clone();
        left.set(i, c, other);
        left.set(j, c, tmp);
    }
}

fn swap_cols(a: &mut IntMatrix, right: &mut IntMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for r in 0..a.nrows() {
        let tmp = a.at(r, i).clone();
        let other = a.at(r, j).clone();
        a.set(r, i, other);
        a.set(r, j, tmp);
    }
    for r in 0..right.nrows() {
        let tmp = right.at(r, i).clone();
        let other = right.at(r, j).clone();
        right.set(r, i, other);
        right.set(r, j, tmp);
    }
}

/// row_i -= q * row_k
fn row_op(a: &mut IntMatrix, left: &mut IntMatrix, i: usize, k: usize, q: &BigInt) {
    for c in 0..a.ncols() {
        let v = a.at(i, c) - q * a.at(k, c);
        a.set(i, c, v);
    }
    for c in 0..left.ncols() {
        let v = left.at(i, c) - q * left.at(k, c);
        left.set(i, c, v);
    }
}

/// col_j -= q * col_k
fn col_op(a: &mut IntMatrix, right: &mut IntMatrix, j: usize, k: usize, q: &BigInt) {
    for r in 0..a.nrows() {
        let v = a.at(r, j) - q * a.at(r, k);
        a.set(r, j, v);
    }
    for r in 0..right.nrows() {
        let v = right.at(r, j) - q * right.at(r, k);
        right.set(r, j, v);
    }
}

fn negate_row(a: &mut IntMatrix, left: &mut IntMatrix, i: usize) {
    for c in 0..a.ncols() {
        let v = -a.at(i, c);
        a.set(i, c, v);
    }
    for c in 0..left.ncols() {
        let v = -left.at(i, c);
        left.set(i, c, v);
    }
}

/// Cokernel of `m : Z^cols -> Z^rows` as (free rank, torsion invariant
/// factors >= 2).
pub fn cokernel_invariants(m: &IntMatrix) -> (usize, Vec<BigInt>) {
    let s = smith_normal_form(m);
    let free = m.nrows() - s.rank();
    let torsion = s
        .invariant_factors
        .into_iter()
        .filter(|d| d > &BigInt::from(1))
        .collect();
    (free, torsion)
}

/// Basis of the kernel lattice of `m : Z^cols -> Z^rows`. The basis is
/// saturated: it spans all integer solutions.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let s = smith_normal_form(m);
    let r = s.rank();
    (r..m.ncols()).map(|j| s.right_transform.column(j)).collect()
}

/// One exact integer solution of `m x = b`, if any.
pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), m.nrows());
    let s = smith_normal_form(m);
    let lb = s.left_transform.apply(b);
    let r = s.rank();
    let mut y = vec![BigInt::zero(); m.ncols()];
    for (i, lbi) in lb.iter().enumerate() {
        if i < r {
            let d = &s.invariant_factors[i];
            if !(lbi % d).is_zero() {
                return None;
            }
            y[i] = lbi / d;
        } else if !lbi.is_zero() {
            return None;
        }
    }
    Some(s.right_transform.apply(&y))
}
