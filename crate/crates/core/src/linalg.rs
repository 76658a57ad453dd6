//! Small fixed-size linear algebra used by the Kalman filter and the
//! plane-fit residual: 3x3 matrices, a symmetric Jacobi eigensolver, and a
//! Cholesky-based SPD check.

use crate::geometry::Vec3;

#[cfg(not(feature = "std"))]
use num_traits::Float;

/// Row-major 3x3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const ZERO: Mat3 = Mat3([[0.0; 3]; 3]);

    pub fn identity() -> Mat3 {
        Mat3::diag(1.0)
    }

    pub fn diag(d: f64) -> Mat3 {
        let mut m = [[0.0; 3]; 3];
        m[0][0] = d;
        m[1][1] = d;
        m[2][2] = d;
        Mat3(m)
    }

    /// Outer product `a bᵀ`.
    pub fn outer(a: Vec3, b: Vec3) -> Mat3 {
        let a = [a.x, a.y, a.z];
        let b = [b.x, b.y, b.z];
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = a[i] * b[j];
            }
        }
        Mat3(m)
    }

    pub fn transpose(self) -> Mat3 {
        let m = self.0;
        Mat3([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn add(self, o: Mat3) -> Mat3 {
        let mut m = self.0;
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += o.0[i][j];
            }
        }
        Mat3(m)
    }

    pub fn sub(self, o: Mat3) -> Mat3 {
        let mut m = self.0;
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] -= o.0[i][j];
            }
        }
        Mat3(m)
    }

    pub fn scale(self, s: f64) -> Mat3 {
        let mut m = self.0;
        for row in m.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        Mat3(m)
    }

    pub fn mul(self, o: Mat3) -> Mat3 {
        let a = self.0;
        let b = o.0;
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
            }
        }
        Mat3(m)
    }

    pub fn mul_vec(self, v: Vec3) -> Vec3 {
        let m = self.0;
        Vec3::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }

    pub fn trace(self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn determinant(self) -> f64 {
        let m = self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Inverse via the adjugate; `None` when the determinant is ~0.
    pub fn inverse(self) -> Option<Mat3> {
        let m = self.0;
        let det = self.determinant();
        if det.abs() < 1e-300 {
            return None;
        }
        let inv_det = 1.0 / det;
        let mut r = [[0.0; 3]; 3];
        r[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) * inv_det;
        r[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * inv_det;
        r[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * inv_det;
        r[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) * inv_det;
        r[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * inv_det;
        r[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * inv_det;
        r[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) * inv_det;
        r[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * inv_det;
        r[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * inv_det;
        Some(Mat3(r))
    }

    /// Force exact symmetry: `(M + Mᵀ) / 2`.
    pub fn symmetrized(self) -> Mat3 {
        self.add(self.transpose()).scale(0.5)
    }
}

/// Eigen-decomposition of a symmetric 3x3 matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order with matching unit eigenvectors.
pub fn sym_eigen3(m: Mat3) -> ([f64; 3], [Vec3; 3]) {
    let mut a = m.symmetrized().0;
    let mut v = Mat3::identity().0;

    for _ in 0..64 {
        let off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if off < 1e-30 {
            break;
        }
        for p in 0..2 {
            for q in (p + 1)..3 {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
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
                for k in 0..3 {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| a[i][i].partial_cmp(&a[j][j]).unwrap());
    let vals = [a[order[0]][order[0]], a[order[1]][order[1]], a[order[2]][order[2]]];
    let vecs = [
        Vec3::new(v[0][order[0]], v[1][order[0]], v[2][order[0]]),
        Vec3::new(v[0][order[1]], v[1][order[1]], v[2][order[1]]),
        Vec3::new(v[0][order[2]], v[1][order[2]], v[2][order[2]]),
    ];
    (vals, vecs)
}

/// Cholesky factorization check for a symmetric matrix given as `n` rows of
/// `n` values. Returns false if any pivot drops below `-tol` (the matrix is
/// then not positive definite to within `tol`).
pub fn is_positive_definite(rows: &[&[f64]], tol: f64) -> bool {
    let n = rows.len();
    let mut l = alloc::vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = rows[i][j];
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if sum <= -tol {
                    return false;
                }
                l[i * n + i] = sum.max(tol).sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn inverse_round_trip() {
        let m = Mat3([[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]]);
        let inv = m.inverse().unwrap();
        let id = m.mul(inv);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_relative_eq!(id.0[i][j], expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = Mat3([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 0.0, 1.0]]);
        assert!(m.inverse().is_none());
    }

    #[test]
    fn eigen_of_diagonal() {
        let (vals, vecs) = sym_eigen3(Mat3([[3.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 2.0]]));
        assert_relative_eq!(vals[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(vals[1], 2.0, epsilon = 1e-12);
        assert_relative_eq!(vals[2], 3.0, epsilon = 1e-12);
        assert_relative_eq!(vecs[0].y.abs(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn eigen_reconstructs_matrix() {
        let m = Mat3([[2.0, 0.4, -0.3], [0.4, 1.5, 0.6], [-0.3, 0.6, 3.1]]);
        let (vals, vecs) = sym_eigen3(m);
        let mut recon = Mat3::ZERO;
        for k in 0..3 {
            recon = recon.add(Mat3::outer(vecs[k], vecs[k]).scale(vals[k]));
        }
        for i in 0..3 {
            for j in 0..3 {
                assert_relative_eq!(recon.0[i][j], m.0[i][j], epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn spd_check() {
        let good = [[2.0, 0.5], [0.5, 1.0]];
        let rows: alloc::vec::Vec<&[f64]> = good.iter().map(|r| &r[..]).collect();
        assert!(is_positive_definite(&rows, 1e-12));

        let bad = [[1.0, 2.0], [2.0, 1.0]];
        let rows: alloc::vec::Vec<&[f64]> = bad.iter().map(|r| &r[..]).collect();
        assert!(!is_positive_definite(&rows, 1e-12));
    }
}
