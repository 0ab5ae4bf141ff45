//! Exact integer and field linear algebra used by every computation.
//!
//! Matrices act on column vectors: an `r x c` matrix is a map `Z^c -> Z^r`.
//! Everything is arbitrary precision; intermediate Smith normal form entries
//! can grow well past any fixed width.

mod field;
mod snf;

pub use field::{kernel_basis_f, rank_f, rref, solve_f, Field, PrimeField, Rationals};
pub use snf::{cokernel_invariants, kernel_basis, smith_normal_form, solve, SmithForm};

use crate::EngineError;
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Coefficient rings understood by the engine.
///
/// A general PID enters only through its characteristic: `Z` and `Q` cover
/// characteristic zero, `F(p)` covers characteristic `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoeffRing {
    Z,
    Q,
    F(u64),
}

impl CoeffRing {
    pub fn is_field(&self) -> bool {
        !matches!(self, CoeffRing::Z)
    }

    /// Fails on `F(p)` with `p` not prime.
    pub fn check(&self) -> Result<(), EngineError> {
        match self {
            CoeffRing::F(p) if !is_prime(*p) => {
                Err(EngineError::InvalidRing(format!("{p} is not prime")))
            }
            _ => Ok(()),
        }
    }
}

impl std::fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoeffRing::Z => write!(f, "z"),
            CoeffRing::Q => write!(f, "q"),
            CoeffRing::F(p) => write!(f, "f:{p}"),
        }
    }
}

/// Dense labelled matrix over `Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            row_labels: (0..rows).map(|i| i.to_string()).collect(),
            col_labels: (0..cols).map(|j| j.to_string()).collect(),
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = IntMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                *m.at_mut(i, j) = BigInt::from(*v);
            }
        }
        m
    }

    pub fn diag(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, v) in entries.iter().enumerate() {
            *m.at_mut(i, i) = BigInt::from(*v);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.ncols() + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        let c = self.ncols();
        &mut self.data[i * c + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        *self.at_mut(i, j) = v;
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.ncols(), self.nrows());
        t.row_labels = self.col_labels.clone();
        t.col_labels = self.row_labels.clone();
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.ncols(), other.nrows(), "shape mismatch");
        let mut out = IntMatrix::zeros(self.nrows(), other.ncols());
        out.row_labels = self.row_labels.clone();
        out.col_labels = other.col_labels.clone();
        for i in 0..self.nrows() {
            for k in 0..self.ncols() {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.ncols() {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        *out.at_mut(i, j) += a * b;
                    }
                }
            }
        }
        out
    }

    /// Image of a column vector.
    #[allow(clippy::needless_range_loop)]
    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.ncols());
        let mut out = vec![BigInt::zero(); self.nrows()];
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                let a = self.at(i, j);
                if !a.is_zero() {
                    out[i] += a * &x[j];
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.nrows()).map(|i| self.at(i, j).clone()).collect()
    }
}

/// Rank over the fraction field `Q` (ring `Z` or `Q`) or over `F_p`.
pub fn rank(m: &IntMatrix, ring: CoeffRing) -> Result<usize, EngineError> {
    ring.check()?;
    match ring {
        CoeffRing::Z | CoeffRing::Q => Ok(smith_normal_form(m).invariant_factors.len()),
        CoeffRing::F(p) => {
            let f = PrimeField::new(p)?;
            let fm = to_field_matrix(&f, m);
            Ok(rank_f(&f, &fm))
        }
    }
}

/// Reduce an integer matrix into a field matrix.
pub fn to_field_matrix<F: Field>(f: &F, m: &IntMatrix) -> Vec<Vec<F::Elt>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| f.from_bigint(m.at(i, j))).collect())
        .collect()
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Prime factors of `|v|` by trial division, with a Miller-Rabin fallback for
/// a residual that fits in u64. Returns an error if a residual is too large
/// to certify; at desk scale this does not happen.
pub fn prime_divisors(v: &BigInt) -> Result<Vec<u64>, EngineError> {
    use num_traits::Signed;
    let mut n = v.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return Ok(out);
    }
    let mut d = 2u64;
    while d <= 10_000 {
        let big_d = BigInt::from(d);
        if (&n % &big_d).is_zero() {
            out.push(d);
            while (&n % &big_d).is_zero() {
                n /= &big_d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        let small: u64 = u64::try_from(&n).map_err(|_| {
            EngineError::InternalInvariant(format!("cannot factor residual {n}"))
        })?;
        if is_prime(small) {
            out.push(small);
        } else {
            // residual is composite with all factors > 10^4; dig them out
            let mut rest = small;
            let mut f = 10_001u64;
            while f * f <= rest {
                if rest.is_multiple_of(f) {
                    out.push(f);
                    while rest.is_multiple_of(f) {
                        rest /= f;
                    }
                }
                f += 2;
            }
            if rest > 1 {
                out.push(rest);
            }
        }
    }
    Ok(out)
}
