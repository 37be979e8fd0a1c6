//! Dense exact row reduction.

use crate::scalar::Field;

/// Reduced row-echelon form of a list of row vectors.
#[derive(Debug, Clone)]
pub struct Echelon<F> {
    /// Non-zero rows of the RREF; leading entries are 1.
    pub rows: Vec<Vec<F>>,
    /// Pivot column of each row.
    pub pivots: Vec<usize>,
    /// `transform[i]` expresses `rows[i]` as a combination of the input rows.
    pub transform: Vec<Vec<F>>,
    pub cols: usize,
}

impl<F: Field> Echelon<F> {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Coordinates of `v` with respect to `rows`, or `None` if `v` is outside the row space.
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        assert_eq!(v.len(), self.cols);
        let coords: Vec<F> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (c, row) in coords.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (r, x) in residual.iter_mut().zip(row) {
                if !x.is_zero() {
                    *r = r.clone() - c.clone() * x;
                }
            }
        }
        residual.iter().all(F::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.coordinates(v).is_some()
    }
}

/// Row-reduces `input` (all rows of length `cols`), tracking the row operations.
pub fn rref<F: Field>(input: &[Vec<F>], cols: usize) -> Echelon<F> {
    let n = input.len();
    let mut rows: Vec<Vec<F>> = input.to_vec();
    let mut transform: Vec<Vec<F>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..n).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        transform.swap(r, p);
        let inv = rows[r][c].inv().expect("non-zero pivot");
        for x in rows[r].iter_mut() {
            *x = x.clone() * &inv;
        }
        for x in transform[r].iter_mut() {
            *x = x.clone() * &inv;
        }
        for i in 0..n {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            let (pr, pt) = (rows[r].clone(), transform[r].clone());
            for (x, y) in rows[i].iter_mut().zip(&pr) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y;
                }
            }
            for (x, y) in transform[i].iter_mut().zip(&pt) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == n {
            break;
        }
    }
    rows.truncate(r);
    transform.truncate(r);
    Echelon { rows, pivots, transform, cols }
}

pub fn rank<F: Field>(input: &[Vec<F>], cols: usize) -> usize {
    rref(input, cols).rank()
}

/// Basis of `{x : A x = 0}` for the `rows × cols` matrix `a`.
pub fn kernel<F: Field>(a: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    let e = rref(a, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); cols];
            v[f] = F::one();
            for (row, &p) in e.rows.iter().zip(&e.pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// `a * b` for row-major matrices.
pub fn matmul<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| F::sum((0..inner).filter(|&k| !row[k].is_zero()).map(|k| row[k].clone() * &b[k][j])))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Rational, Ring};

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn rank_and_transform() {
        let rows = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]];
        let e = rref(&rows, 3);
        assert_eq!(e.rank(), 2);
        for (row, t) in e.rows.iter().zip(&e.transform) {
            let combo: Vec<Rational> =
                (0..3).map(|c| Rational::sum((0..3).map(|i| t[i].clone() * &rows[i][c]))).collect();
            assert_eq!(&combo, row);
        }
        assert!(e.contains(&[q(3), q(7), q(10)]));
        assert!(!e.contains(&[q(0), q(0), q(1)]));
    }

    #[test]
    fn kernel_dimension() {
        let a = vec![vec![q(1), q(1), q(0)], vec![q(0), q(0), q(0)]];
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(Rational::sum(a[0].iter().zip(v).map(|(x, y)| x.clone() * y)).is_zero());
        }
    }
}
