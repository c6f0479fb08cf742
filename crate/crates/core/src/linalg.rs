//! Exact linear algebra over Q.
//!
//! The kernel routine used by the solver is fraction-free (Bareiss) elimination
//! on integer rows. A plain rational Gauss-Jordan elimination is kept as an
//! independent second route.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::exactalg::rational::{common_denominator, primitive, Rational};

/// Row-echelon form produced by fraction-free elimination.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let den = common_denominator(row);
    row.iter().map(|q| (q * &den).to_integer()).collect()
}

/// Bareiss elimination. The pivot in each column is the nonzero entry of
/// smallest magnitude among the remaining rows.
pub fn bareiss(rows: &[Vec<Rational>], ncols: usize) -> Echelon {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), ncols, "ragged matrix");
            integer_row(r)
        })
        .filter(|r| r.iter().any(|v| !v.is_zero()))
        .collect();
    let m = a.len();
    let mut prev = BigInt::from(1);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        let Some(p) = (r..m)
            .filter(|&i| !a[i][c].is_zero())
            .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()))
        else {
            continue;
        };
        a.swap(r, p);
        let (head, tail) = a.split_at_mut(r + 1);
        let prow = &head[r];
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..ncols {
                let num = &prow[c] * &row[j] - &factor * &prow[j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division not exact");
                row[j] = q;
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Echelon {
        rows: a,
        pivots,
        ncols,
    }
}

fn free_columns(pivots: &[usize], ncols: usize) -> Vec<usize> {
    (0..ncols).filter(|c| !pivots.contains(c)).collect()
}

/// Kernel basis via fraction-free elimination and back substitution.
///
/// One basis vector per free column (that coordinate set to one, the other
/// free coordinates zero), then scaled to a primitive integer vector with
/// positive leading entry.
pub fn kernel(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let ech = bareiss(rows, ncols);
    free_columns(&ech.pivots, ncols)
        .into_iter()
        .map(|f| {
            let mut x = vec![Rational::zero(); ncols];
            x[f] = Rational::from_integer(BigInt::from(1));
            for (t, &p) in ech.pivots.iter().enumerate().rev() {
                let row = &ech.rows[t];
                let mut s = Rational::zero();
                for j in p + 1..ncols {
                    if !row[j].is_zero() && !x[j].is_zero() {
                        s += &x[j] * Rational::from_integer(row[j].clone());
                    }
                }
                x[p] = -s / Rational::from_integer(row[p].clone());
            }
            primitive(&x)
        })
        .collect()
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    bareiss(rows, ncols).rank()
}

/// Reduced row-echelon form over Q (plain Gauss-Jordan).
pub fn rref(rows: &[Vec<Rational>], ncols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let m = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        // smallest entry as pivot keeps coefficient growth down
        let Some(p) = (r..m)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| a[i][c].numer().bits() + a[i][c].denom().bits())
        else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..ncols {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Kernel basis via Gauss-Jordan; same normalization as [`kernel`].
pub fn kernel_rref(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(rows, ncols);
    free_columns(&pivots, ncols)
        .into_iter()
        .map(|f| {
            let mut x = vec![Rational::zero(); ncols];
            x[f] = Rational::from_integer(BigInt::from(1));
            for (t, &p) in pivots.iter().enumerate() {
                x[p] = -r[t][f].clone();
            }
            primitive(&x)
        })
        .collect()
}

/// Finds `c` with `sum_i c_i * vectors[i] == target`, if one exists.
pub fn solve_in_span(vectors: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let n = vectors.len();
    let dim = target.len();
    // rows: one equation per coordinate; columns: coefficients then rhs
    let rows: Vec<Vec<Rational>> = (0..dim)
        .map(|i| {
            let mut row: Vec<Rational> = vectors.iter().map(|v| v[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let (r, pivots) = rref(&rows, n + 1);
    if pivots.contains(&n) {
        return None;
    }
    let mut c = vec![Rational::zero(); n];
    for (t, &p) in pivots.iter().enumerate() {
        c[p] = r[t][n].clone();
    }
    Some(c)
}

/// Determinant of a square matrix by Gaussian elimination.
pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::from_integer(BigInt::from(1));
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let d = &f * &a[c][j];
                    a[i][j] -= d;
                }
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{int, rat};
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    fn mul(rows: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
        rows.iter()
            .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    #[test]
    fn kernel_small() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel(&m, 3);
        assert_eq!(k, vec![vec![int(2), int(-1), int(0)], vec![int(3), int(0), int(-1)]]);
        for v in &k {
            assert!(mul(&m, v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn kernel_full_rank_is_empty() {
        let m = mat(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert!(kernel(&m, 2).is_empty());
        assert_eq!(rank(&m, 2), 2);
    }

    #[test]
    fn kernel_of_empty_system_is_identity() {
        let k = kernel(&[], 2);
        assert_eq!(k, vec![vec![int(1), int(0)], vec![int(0), int(1)]]);
    }

    #[test]
    fn rational_entries() {
        let m = vec![vec![rat(1, 2), rat(-1, 3)]];
        assert_eq!(kernel(&m, 2), vec![vec![int(2), int(3)]]);
    }

    #[test]
    fn solve_in_span_basic() {
        let v = vec![vec![int(1), int(0), int(1)], vec![int(0), int(1), int(1)]];
        assert_eq!(
            solve_in_span(&v, &[int(2), int(3), int(5)]),
            Some(vec![int(2), int(3)])
        );
        assert_eq!(solve_in_span(&v, &[int(2), int(3), int(4)]), None);
    }

    #[test]
    fn determinant_basic() {
        assert_eq!(determinant(&mat(&[&[2, 1], &[1, 3]])), int(5));
        assert_eq!(determinant(&mat(&[&[0, 1], &[1, 0]])), int(-1));
        assert_eq!(determinant(&mat(&[&[1, 2], &[2, 4]])), int(0));
    }

    proptest! {
        #[test]
        fn bareiss_and_gauss_jordan_agree(
            entries in proptest::collection::vec(-4i64..=4, 20),
            rows in 1usize..5,
        ) {
            let ncols = 5;
            let m: Vec<Vec<Rational>> = entries
                .chunks(ncols)
                .take(rows)
                .map(|c| c.iter().map(|&v| int(v)).collect())
                .collect();
            let k1 = kernel(&m, ncols);
            let k2 = kernel_rref(&m, ncols);
            prop_assert_eq!(&k1, &k2);
            prop_assert_eq!(k1.len() + rank(&m, ncols), ncols);
            for v in &k1 {
                prop_assert!(mul(&m, v).iter().all(Zero::is_zero));
            }
        }
    }
}
