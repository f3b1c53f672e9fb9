//! Exact elimination over the supported coefficient rings.

#![allow(clippy::needless_range_loop)]

use alloc::vec::Vec;

use num_rational::BigRational;

use crate::scalar::Scalar;

/// Rank of a matrix over a field. Rows are consumed.
pub(crate) fn rank(mut rows: Vec<Vec<Scalar>>) -> usize {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..n_cols {
        let Some(pivot) = (rank..n_rows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].inverse().expect("rank is only taken over fields");
        for r in 0..n_rows {
            if r == rank || rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] * &inv;
            for c in col..n_cols {
                let delta = &factor * &rows[rank][c];
                rows[r][c] = &rows[r][c] - &delta;
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant of a square matrix; integer entries are lifted to the rationals.
pub(crate) fn determinant(rows: Vec<Vec<Scalar>>) -> Scalar {
    let lifted: Vec<Vec<Scalar>> = rows
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|s| match s {
                    Scalar::Integer(n) => Scalar::Rational(BigRational::from_integer(n)),
                    other => other,
                })
                .collect()
        })
        .collect();
    field_determinant(lifted)
}

fn field_determinant(mut rows: Vec<Vec<Scalar>>) -> Scalar {
    let n = rows.len();
    assert!(n > 0, "determinant of an empty matrix");
    let mut det = one_like(&rows[0][0]);
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !rows[r][col].is_zero()) else {
            return zero_like(&rows[0][0]);
        };
        if pivot != col {
            rows.swap(col, pivot);
            det = -&det;
        }
        det = &det * &rows[col][col];
        let inv = rows[col][col].inverse().expect("nonzero pivot over a field");
        for r in col + 1..n {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] * &inv;
            for c in col..n {
                let delta = &factor * &rows[col][c];
                rows[r][c] = &rows[r][c] - &delta;
            }
        }
    }
    det
}

fn zero_like(s: &Scalar) -> Scalar {
    match s {
        Scalar::Integer(_) => Scalar::Integer(0.into()),
        Scalar::Rational(_) => Scalar::Rational(BigRational::from_integer(0.into())),
        Scalar::Residue { modulus, .. } => Scalar::Residue { value: 0, modulus: *modulus },
    }
}

fn one_like(s: &Scalar) -> Scalar {
    match s {
        Scalar::Integer(_) => Scalar::Integer(1.into()),
        Scalar::Rational(_) => Scalar::Rational(BigRational::from_integer(1.into())),
        Scalar::Residue { modulus, .. } => Scalar::Residue { value: 1 % modulus, modulus: *modulus },
    }
}
