//! Small dense linear algebra: generic Gauss–Jordan inversion and a Jacobi
//! eigensolver for symmetric 3×3 float matrices.

use alloc::vec::Vec;

use crate::scalar::{Field, Ring};

/// Inverts a square matrix given row-major; `None` if singular.
///
/// Pivoting picks the first nonzero entry, which is all the exact backend
/// needs. Float callers only use it on well-conditioned Gram matrices.
pub fn invert<T: Field>(m: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let n = m.len();
    let mut a: Vec<Vec<T>> = m.to_vec();
    let mut inv: Vec<Vec<T>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { T::one() } else { T::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col].recip().is_some())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let s = a[col][col].recip()?;
        for j in 0..n {
            a[col][j] = a[col][j].clone() * s.clone();
            inv[col][j] = inv[col][j].clone() * s.clone();
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r][col].clone();
            if f == T::zero() {
                continue;
            }
            for j in 0..n {
                a[r][j] = a[r][j].clone() - f.clone() * a[col][j].clone();
                inv[r][j] = inv[r][j].clone() - f.clone() * inv[col][j].clone();
            }
        }
    }
    Some(inv)
}

pub type Mat3 = [[f64; 3]; 3];

pub fn mat3_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

pub fn transpose(a: &Mat3) -> Mat3 {
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = a[j][i];
        }
    }
    t
}

pub fn det3<T: Ring>(m: &[[T; 3]; 3]) -> T {
    m[0][0].clone() * (m[1][1].clone() * m[2][2].clone() - m[1][2].clone() * m[2][1].clone())
        - m[0][1].clone() * (m[1][0].clone() * m[2][2].clone() - m[1][2].clone() * m[2][0].clone())
        + m[0][2].clone() * (m[1][0].clone() * m[2][1].clone() - m[1][1].clone() * m[2][0].clone())
}

/// Inverse of a 3×3 matrix through the adjugate; works for jets too.
pub fn inv3<T: Field>(m: &[[T; 3]; 3]) -> Option<[[T; 3]; 3]> {
    let d = det3(m).recip()?;
    let c = |i: usize, j: usize| {
        let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
        let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
        m[r0][c0].clone() * m[r1][c1].clone() - m[r0][c1].clone() * m[r1][c0].clone()
    };
    // adjugate is the transpose of the cofactor matrix
    Some(core::array::from_fn(|i| {
        core::array::from_fn(|j| c(j, i) * d.clone())
    }))
}

/// Eigen-decomposition of a symmetric 3×3 matrix by cyclic Jacobi sweeps.
///
/// Returns eigenvalues and a matrix whose rows are the matching unit
/// eigenvectors, sorted by ascending eigenvalue.
pub fn symmetric_eigen3(m: &Mat3) -> ([f64; 3], Mat3) {
    let mut a = *m;
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for _sweep in 0..64 {
        let off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        let scale = a[0][0] * a[0][0] + a[1][1] * a[1][1] + a[2][2] * a[2][2] + off;
        if off <= 1e-32 * scale.max(1e-300) {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            if a[p][q] == 0.0 {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / libm::sqrt(t * t + 1.0);
            let s = t * c;
            // rotate rows/cols p,q
            for k in 0..3 {
                let akp = a[k][p];
                let akq = a[k][q];
                a[k][p] = c * akp - s * akq;
                a[k][q] = s * akp + c * akq;
            }
            for k in 0..3 {
                let apk = a[p][k];
                let aqk = a[q][k];
                a[p][k] = c * apk - s * aqk;
                a[q][k] = s * apk + c * aqk;
            }
            for row in v.iter_mut() {
                let vp = row[p];
                let vq = row[q];
                row[p] = c * vp - s * vq;
                row[q] = s * vp + c * vq;
            }
        }
    }
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&i, &j| a[i][i].partial_cmp(&a[j][j]).unwrap_or(core::cmp::Ordering::Equal));
    let vals = [a[idx[0]][idx[0]], a[idx[1]][idx[1]], a[idx[2]][idx[2]]];
    // columns of v are eigenvectors
    let vecs = core::array::from_fn(|r| core::array::from_fn(|c| v[c][idx[r]]));
    (vals, vecs)
}

/// Eigen-decomposition of a symmetric 2×2 matrix; rows of the second value
/// are eigenvectors, ascending eigenvalues.
pub fn symmetric_eigen2(m: [[f64; 2]; 2]) -> ([f64; 2], [[f64; 2]; 2]) {
    let (a, b, d) = (m[0][0], m[0][1], m[1][1]);
    // rotation angle of the larger eigenvector; orthonormal even for m ∝ I
    let phi = 0.5 * libm::atan2(2.0 * b, a - d);
    let (s, c) = (libm::sin(phi), libm::cos(phi));
    let half_tr = 0.5 * (a + d);
    let r = libm::sqrt(0.25 * (a - d) * (a - d) + b * b);
    ([half_tr - r, half_tr + r], [[-s, c], [c, s]])
}

/// Solves a small dense float system by Gaussian elimination with partial
/// pivoting. Returns `None` when the matrix is numerically singular.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let (piv, best) = (col..n)
            .map(|r| (r, a[r][col].abs()))
            .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                a[r][j] -= f * a[col][j];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = alloc::vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QSqrt3;
    use alloc::vec;

    #[test]
    fn exact_inverse() {
        let m = vec![
            vec![QSqrt3::ratio(4, 3), QSqrt3::ratio(-2, 3)],
            vec![QSqrt3::ratio(-2, 3), QSqrt3::ratio(4, 3)],
        ];
        let inv = invert(&m).unwrap();
        assert_eq!(inv[0][0], QSqrt3::ratio(1, 1));
        assert_eq!(inv[0][1], QSqrt3::ratio(1, 2));
    }

    #[test]
    fn jacobi_reconstructs() {
        let m = [[2.0, 1.0, 0.5], [1.0, -1.0, 0.25], [0.5, 0.25, 3.0]];
        let (vals, vecs) = symmetric_eigen3(&m);
        for r in 0..3 {
            for i in 0..3 {
                let mv: f64 = (0..3).map(|k| m[i][k] * vecs[r][k]).sum();
                assert!((mv - vals[r] * vecs[r][i]).abs() < 1e-12);
            }
        }
        assert!(vals[0] <= vals[1] && vals[1] <= vals[2]);
    }

    #[test]
    fn jacobi_repeated_eigenvalue() {
        let m = [[1.0, 0.0, 0.0], [0.0, -0.5, 0.0], [0.0, 0.0, -0.5]];
        let (vals, _) = symmetric_eigen3(&m);
        assert_eq!(vals, [-0.5, -0.5, 1.0]);
    }

    #[test]
    fn inv3_matches() {
        let m = [[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]];
        let i = inv3(&m).unwrap();
        let p = mat3_mul(&m, &i);
        for r in 0..3 {
            for c in 0..3 {
                let e = if r == c { 1.0 } else { 0.0 };
                assert!((p[r][c] - e).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn solve_small_system() {
        let x = solve(vec![vec![0.0, 2.0], vec![1.0, 1.0]], vec![4.0, 3.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 2.0).abs() < 1e-15);
    }
}
