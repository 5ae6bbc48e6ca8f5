//! Dense exact linear algebra over `Q`. Matrices are row-major `Vec<Vec<Q>>`.

use num_traits::{One, Zero};

use super::Q;

pub type Matrix = Vec<Vec<Q>>;

pub fn transpose(m: &[Vec<Q>]) -> Matrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_vec(m: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    m.iter().map(|row| super::rational::dot(row, v)).collect()
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Matrix {
    let bt = transpose(b);
    a.iter().map(|row| bt.iter().map(|col| super::rational::dot(row, col)).collect()).collect()
}

/// Reduced row echelon form and pivot columns. Pivots are taken on the
/// first nonzero entry, scanning columns left to right.
pub fn rref(m: &[Vec<Q>]) -> (Matrix, Vec<usize>) {
    let mut a: Matrix = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = Q::one() / &a[r][c];
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &[Vec<Q>]) -> usize {
    rref(m).1.len()
}

pub fn det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a: Matrix = m.to_vec();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Q::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    d
}

/// Kernel basis of `m` (with `cols` columns): one vector per free column of
/// the RREF, in increasing order, with a 1 in that free column and zeros in
/// the other free columns.
pub fn kernel(m: &[Vec<Q>], cols: usize) -> Matrix {
    let (r, pivots) = rref(m);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[row][f].clone();
            }
            v
        })
        .collect()
}

/// The unique solution of a square nonsingular system, or `None`.
pub fn solve(m: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = m.len();
    let aug: Matrix = m.iter().zip(b).map(|(row, bi)| row.iter().cloned().chain([bi.clone()]).collect()).collect();
    let (r, pivots) = rref(&aug);
    if pivots != (0..n).collect::<Vec<_>>() {
        return None;
    }
    Some(r.iter().map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;

    fn mat(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn det_small() {
        assert_eq!(det(&mat(&[&[1, 2], &[3, 4]])), int(-2));
        assert_eq!(det(&mat(&[&[0, 1], &[1, 0]])), int(-1));
        assert_eq!(det(&mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]])), int(0));
        assert_eq!(det(&mat(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]])), int(6));
    }

    #[test]
    fn rank_and_rref() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&m), 2);
        let (r, p) = rref(&m);
        assert_eq!(p, vec![0, 1]);
        assert_eq!(r[0], vec![int(1), int(0), int(1)]);
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = mat(&[&[1, 1, 1, 1], &[0, 1, 2, 3]]);
        let k = kernel(&m, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&m, v).iter().all(Zero::is_zero));
        }
        assert_eq!(k[0], vec![int(1), int(-2), int(1), int(0)]);
    }

    #[test]
    fn solve_square() {
        let m = mat(&[&[2, 1], &[1, 3]]);
        let x = solve(&m, &[int(3), int(5)]).unwrap();
        assert_eq!(mat_vec(&m, &x), vec![int(3), int(5)]);
        assert!(solve(&mat(&[&[1, 2], &[2, 4]]), &[int(1), int(2)]).is_none());
    }

    #[test]
    fn mat_mul_identity() {
        let m = mat(&[&[1, 2], &[3, 4]]);
        let i = mat(&[&[1, 0], &[0, 1]]);
        assert_eq!(mat_mul(&m, &i), m);
        assert_eq!(transpose(&transpose(&m)), m);
    }
}
