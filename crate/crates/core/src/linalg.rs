//! Dense linear algebra over a [`Field`]: row reduction, rank, null spaces.

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

pub type Matrix = Vec<Vec<Elem>>;

/// Reduced row-echelon form with pivots scaled to one; zero rows dropped.
/// Returns the rows and their pivot columns.
pub fn rref(field: &Field, rows: &[Vec<Elem>]) -> (Matrix, Vec<usize>) {
    let mut a: Matrix = rows.to_vec();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        let Some(pr) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        let inv = field.inv(a[r][c]).expect("pivot is nonzero");
        for x in a[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = field.sub(*x, field.mul(f, y));
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank(field: &Field, rows: &[Vec<Elem>]) -> usize {
    rref(field, rows).1.len()
}

/// Basis of `{x : rows * x = 0}` for vectors of length `ncols`.
pub fn null_space(field: &Field, rows: &[Vec<Elem>], ncols: usize) -> Matrix {
    let (r, pivots) = rref(field, rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Elem::ZERO; ncols];
            v[f] = Elem::ONE;
            for (row, &pc) in r.iter().zip(&pivots) {
                v[pc] = field.neg(row[f]);
            }
            v
        })
        .collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }).collect())
        .collect()
}

pub fn mat_mul(field: &Field, a: &[Vec<Elem>], b: &[Vec<Elem>]) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Elem::ZERO, |acc, t| field.add(acc, field.mul(row[t], b[t][j]))))
                .collect()
        })
        .collect()
}

pub fn transpose(a: &[Vec<Elem>]) -> Matrix {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

/// Entrywise `x -> x^q`.
pub fn conj_matrix(field: &Field, a: &[Vec<Elem>]) -> Matrix {
    a.iter().map(|r| r.iter().map(|&x| field.conj_fast(x)).collect()).collect()
}

pub fn mat_vec(field: &Field, a: &[Vec<Elem>], v: &[Elem]) -> Vec<Elem> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(Elem::ZERO, |acc, (&x, &y)| field.add(acc, field.mul(x, y))))
        .collect()
}

pub fn dot(field: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter().zip(b).fold(Elem::ZERO, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

/// Inverse of a square matrix, `DivisionByZero` when singular.
pub fn inverse(field: &Field, a: &[Vec<Elem>]) -> Result<Matrix> {
    let n = a.len();
    let aug: Matrix = a
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().copied().chain(id).collect())
        .collect();
    let (r, pivots) = rref(field, &aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::DivisionByZero);
    }
    Ok(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_null_space_over_f9() {
        let f = Field::new(3, 2).unwrap();
        let rows = vec![
            vec![Elem(1), Elem(2), Elem(3), Elem(4)],
            vec![Elem(2), Elem(1), Elem(0), Elem(5)],
            vec![Elem(0), Elem(0), Elem(0), Elem(0)],
        ];
        let (r, piv) = rref(&f, &rows);
        assert_eq!(piv.len(), r.len());
        for (row, &c) in r.iter().zip(&piv) {
            assert_eq!(row[c], Elem::ONE);
        }
        let ns = null_space(&f, &rows, 4);
        assert_eq!(ns.len(), 4 - piv.len());
        for v in &ns {
            for row in &rows {
                assert!(dot(&f, row, v).is_zero());
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let f = Field::new(7, 2).unwrap();
        let a = vec![
            vec![Elem(3), Elem(1), Elem(0)],
            vec![Elem(0), Elem(5), Elem(9)],
            vec![Elem(11), Elem(0), Elem(2)],
        ];
        let inv = inverse(&f, &a).unwrap();
        assert_eq!(mat_mul(&f, &a, &inv), identity(3));
        let singular = vec![vec![Elem(1), Elem(2)], vec![Elem(1), Elem(2)]];
        assert_eq!(inverse(&f, &singular), Err(Error::DivisionByZero));
    }
}
