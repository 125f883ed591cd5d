//! Exact rational linear algebra: reduced row echelon form, kernels, and
//! span comparison.
//!
//! The lattice layer needs exact answers to "what is the null space of this
//! integer matrix" and "do these two sets of rational vectors span the same
//! subspace". Everything here is fraction-free in spirit: elimination runs
//! over rationals with checked 128-bit arithmetic and transparently retries
//! with arbitrary-precision integers if a coefficient ever overflows, so
//! results are exact in all cases.

use crate::error::{Error, Result};
use crate::rational::Rat;
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedDiv, CheckedMul, CheckedSub, One, Zero};

/// Scalar interface for exact elimination. `None` results signal overflow of
/// a fixed-width representation; the arbitrary-precision instance never
/// returns `None`.
trait Scalar: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(v: i64) -> Self;
    fn sub(&self, other: &Self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn div(&self, other: &Self) -> Option<Self>;
    fn neg(&self) -> Self;
}

impl Scalar for Ratio<i128> {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v as i128)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        self.checked_sub(other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(other)
    }
    fn div(&self, other: &Self) -> Option<Self> {
        self.checked_div(other)
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn div(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            None
        } else {
            Some(self / other)
        }
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
}

/// Reduce `rows` in place to reduced row echelon form.
///
/// Returns the pivot column of each surviving row; zero rows are dropped.
/// `None` signals fixed-width overflow (retry with big integers).
fn rref<S: Scalar>(rows: &mut Vec<Vec<S>>, ncols: usize) -> Option<Vec<usize>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        // Find a row at or below `rank` with a nonzero entry in `col`.
        let Some(sel) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, sel);
        // Normalize the pivot row.
        let inv = S::one().div(&rows[rank][col])?;
        for x in rows[rank].iter_mut() {
            *x = x.mul(&inv)?;
        }
        // Eliminate the column everywhere else.
        for r in 0..rows.len() {
            if r == rank || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone();
            for c in col..ncols {
                let delta = factor.mul(&rows[rank][c])?;
                rows[r][c] = rows[r][c].sub(&delta)?;
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    Some(pivots)
}

/// Kernel basis of the row space: one vector per free column, in column order.
fn kernel_from_rref<S: Scalar>(
    rows: &[Vec<S>],
    pivots: &[usize],
    ncols: usize,
) -> Option<Vec<Vec<S>>> {
    let pivot_set: Vec<bool> = {
        let mut v = vec![false; ncols];
        for &p in pivots {
            v[p] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_set[free] {
            continue;
        }
        let mut v = vec![S::zero(); ncols];
        v[free] = S::one();
        for (row, &p) in rows.iter().zip(pivots) {
            // Row reads: x_p + sum_{c free} row[c] * x_c = 0.
            if !row[free].is_zero() {
                v[p] = row[free].neg();
            }
        }
        basis.push(v);
    }
    Some(basis)
}

fn convert_in<S: Scalar>(rows: &[Vec<Rat>]) -> Vec<Vec<S>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    let n = S::from_i64(*x.numer());
                    let d = S::from_i64(*x.denom());
                    n.div(&d).expect("denominator is nonzero")
                })
                .collect()
        })
        .collect()
}

fn convert_out_small(rows: Vec<Vec<Ratio<i128>>>) -> Result<Vec<Vec<Rat>>> {
    rows.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| {
                    let n = i64::try_from(*x.numer())
                        .map_err(|_| Error::Overflow("kernel coefficient".into()))?;
                    let d = i64::try_from(*x.denom())
                        .map_err(|_| Error::Overflow("kernel coefficient".into()))?;
                    Ok(Rat::new(n, d))
                })
                .collect()
        })
        .collect()
}

fn convert_out_big(rows: Vec<Vec<BigRational>>) -> Result<Vec<Vec<Rat>>> {
    rows.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| {
                    let n = i64::try_from(x.numer().clone())
                        .map_err(|_| Error::Overflow("kernel coefficient".into()))?;
                    let d = i64::try_from(x.denom().clone())
                        .map_err(|_| Error::Overflow("kernel coefficient".into()))?;
                    Ok(Rat::new(n, d))
                })
                .collect()
        })
        .collect()
}

/// Exact reduced row echelon form of a rational matrix.
///
/// The result is the canonical basis of the row space: two matrices have equal
/// row spaces if and only if their reduced forms are identical.
pub fn reduced_row_echelon(rows: &[Vec<Rat>], ncols: usize) -> Result<Vec<Vec<Rat>>> {
    debug_assert!(rows.iter().all(|r| r.len() == ncols));
    let mut small: Vec<Vec<Ratio<i128>>> = convert_in(rows);
    if rref(&mut small, ncols).is_some() {
        return convert_out_small(small);
    }
    let mut big: Vec<Vec<BigRational>> = convert_in(rows);
    rref(&mut big, ncols).expect("big-integer elimination cannot overflow");
    convert_out_big(big)
}

/// Exact kernel (null space) basis of a rational matrix, one vector per free
/// column of the reduced form, in column order.
pub fn kernel_basis(rows: &[Vec<Rat>], ncols: usize) -> Result<Vec<Vec<Rat>>> {
    debug_assert!(rows.iter().all(|r| r.len() == ncols));
    let mut small: Vec<Vec<Ratio<i128>>> = convert_in(rows);
    if let Some(pivots) = rref(&mut small, ncols) {
        let kernel = kernel_from_rref(&small, &pivots, ncols).expect("infallible");
        return convert_out_small(kernel);
    }
    let mut big: Vec<Vec<BigRational>> = convert_in(rows);
    let pivots = rref(&mut big, ncols).expect("big-integer elimination cannot overflow");
    let kernel = kernel_from_rref(&big, &pivots, ncols).expect("infallible");
    convert_out_big(kernel)
}

/// Do two families of rational vectors span the same subspace? Exact.
pub fn spans_equal(a: &[Vec<Rat>], b: &[Vec<Rat>], ncols: usize) -> Result<bool> {
    Ok(reduced_row_echelon(a, ncols)? == reduced_row_echelon(b, ncols)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rat {
        Rat::from_integer(v)
    }

    #[test]
    fn rref_canonicalizes_row_space() {
        // Same plane in R^3 described by two different bases.
        let a = vec![vec![r(1), r(0), r(1)], vec![r(0), r(1), r(1)]];
        let b = vec![vec![r(1), r(1), r(2)], vec![r(2), r(-1), r(1)]];
        assert!(spans_equal(&a, &b, 3).unwrap());
        let c = vec![vec![r(1), r(1), r(1)]];
        assert!(!spans_equal(&a, &c, 3).unwrap());
    }

    #[test]
    fn kernel_annihilates_rows() {
        let m = vec![
            vec![r(1), r(2), r(3), r(0)],
            vec![r(0), r(1), r(1), r(-1)],
        ];
        let k = kernel_basis(&m, 4).unwrap();
        assert_eq!(k.len(), 2);
        for v in &k {
            for row in &m {
                let dot: Rat = row.iter().zip(v).map(|(a, b)| a * b).sum();
                assert_eq!(dot, r(0));
            }
        }
    }

    #[test]
    fn kernel_of_full_rank_matrix_is_empty() {
        let m = vec![vec![r(2), r(0)], vec![r(1), r(1)]];
        assert!(kernel_basis(&m, 2).unwrap().is_empty());
    }

    #[test]
    fn zero_matrix_kernel_is_identity() {
        let m = vec![vec![r(0), r(0), r(0)]];
        let k = kernel_basis(&m, 3).unwrap();
        assert_eq!(k.len(), 3);
    }
}
