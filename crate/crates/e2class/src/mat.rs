//! Small fixed-size dense matrices: 2x2 group elements and 3x3 Lorentz matrices.

// Index loops over fixed 2x2/3x3 shapes read better than iterator chains here.
#![allow(clippy::needless_range_loop)]

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A real 2x2 matrix, row-major. Used both for group elements of GL(2,R)
/// and for Lie-algebra elements of gl(2,R).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub m: [[f64; 2]; 2],
}

impl Mat2 {
    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self {
            m: [[a, b], [c, d]],
        }
    }

    pub const fn identity() -> Self {
        Self::new(1.0, 0.0, 0.0, 1.0)
    }

    pub const fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0)
    }

    pub const fn diag(a: f64, d: f64) -> Self {
        Self::new(a, 0.0, 0.0, d)
    }

    /// Rotation by `theta`: [[cos, -sin], [sin, cos]].
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, -s, s, c)
    }

    /// The rotation generator [[0, 1], [-1, 0]]; exp(tJ) = rotation(-t).
    pub const fn j_gen() -> Self {
        Self::new(0.0, 1.0, -1.0, 0.0)
    }

    /// Lower shear generator [[0, 0], [1, 0]].
    pub const fn x_gen() -> Self {
        Self::new(0.0, 0.0, 1.0, 0.0)
    }

    /// Lower-right projector [[0, 0], [0, 1]].
    pub const fn y_gen() -> Self {
        Self::new(0.0, 0.0, 0.0, 1.0)
    }

    /// Upper-left projector [[1, 0], [0, 0]].
    pub const fn z_gen() -> Self {
        Self::new(1.0, 0.0, 0.0, 0.0)
    }

    /// The reflection diag(1, -1), representing the non-identity component of GL(2,R).
    pub const fn lambda_reflect() -> Self {
        Self::new(1.0, 0.0, 0.0, -1.0)
    }

    /// Determinant with compensated rounding (Kahan's fma trick), accurate to
    /// a couple of ulps even when ad and bc nearly cancel. The accuracy here
    /// is what keeps the Lorentz image of ill-conditioned products tight.
    pub fn det(&self) -> f64 {
        let [a, b] = self.m[0];
        let [c, d] = self.m[1];
        let w = b * c;
        let err = f64::mul_add(b, c, -w);
        let main = f64::mul_add(a, d, -w);
        main - err
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.m[0][0], self.m[1][0], self.m[0][1], self.m[1][1])
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(
            self.m[0][0] * s,
            self.m[0][1] * s,
            self.m[1][0] * s,
            self.m[1][1] * s,
        )
    }

    pub fn norm(&self) -> f64 {
        self.m.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Entrywise (Frobenius) inner product, tr(At B).
    pub fn dot(&self, other: &Self) -> f64 {
        self.m
            .iter()
            .flatten()
            .zip(other.m.iter().flatten())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn inverse(&self, det_floor: f64) -> Result<Self> {
        let d = self.det();
        if d.abs() <= det_floor {
            return Err(Error::SingularMatrix { det: d });
        }
        Ok(Self::new(
            self.m[1][1] / d,
            -self.m[0][1] / d,
            -self.m[1][0] / d,
            self.m[0][0] / d,
        ))
    }

    /// Singular values (largest, smallest), both nonnegative.
    pub fn singular_values(&self) -> (f64, f64) {
        // The largest value comes from the eigenvalues of At A; the smallest
        // from |det| / s_max, which dodges the cancellation that wipes out
        // tiny singular values in the direct formula.
        let [a, b] = self.m[0];
        let [c, d] = self.m[1];
        let p = a * a + c * c;
        let q = a * b + c * d;
        let r = b * b + d * d;
        let mean = 0.5 * (p + r);
        let disc = (0.25 * (p - r) * (p - r) + q * q).sqrt();
        let hi = (mean + disc).max(0.0).sqrt();
        let lo = if hi > 0.0 { self.det().abs() / hi } else { 0.0 };
        (hi, lo)
    }

    /// 2-norm condition number; infinite for singular matrices.
    pub fn cond(&self) -> f64 {
        let (hi, lo) = self.singular_values();
        if lo == 0.0 {
            f64::INFINITY
        } else {
            hi / lo
        }
    }

    pub fn row_major(&self) -> [[f64; 2]; 2] {
        self.m
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.m[0][0] + rhs.m[0][0],
            self.m[0][1] + rhs.m[0][1],
            self.m[1][0] + rhs.m[1][0],
            self.m[1][1] + rhs.m[1][1],
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.m[0][0] - rhs.m[0][0],
            self.m[0][1] - rhs.m[0][1],
            self.m[1][0] - rhs.m[1][0],
            self.m[1][1] - rhs.m[1][1],
        )
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = self.m[i][0] * rhs.m[0][j] + self.m[i][1] * rhs.m[1][j];
            }
        }
        Mat2 { m: out }
    }
}

/// A real 3x3 matrix, row-major, acting on Lorentz coordinates (x, y, t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3 {
    pub m: [[f64; 3]; 3],
}

impl Mat3 {
    pub const fn from_rows(m: [[f64; 3]; 3]) -> Self {
        Self { m }
    }

    pub const fn identity() -> Self {
        Self::from_rows([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    pub const fn diag(a: f64, b: f64, c: f64) -> Self {
        Self::from_rows([[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]])
    }

    /// The Lorentz form diag(-1, -1, 1) in (x, y, t) order.
    pub const fn lorentz_form() -> Self {
        Self::diag(-1.0, -1.0, 1.0)
    }

    pub fn transpose(&self) -> Self {
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = self.m[j][i];
            }
        }
        Self { m: out }
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.m;
        for row in &mut out {
            for v in row {
                *v *= s;
            }
        }
        Self { m: out }
    }

    pub fn norm_inf(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    pub fn norm(&self) -> f64 {
        self.m.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[i] = self.m[i][0] * v[0] + self.m[i][1] * v[1] + self.m[i][2] * v[2];
        }
        out
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, rhs: Mat3) -> Mat3 {
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = self.m[i][j] + rhs.m[i][j];
            }
        }
        Mat3 { m: out }
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, rhs: Mat3) -> Mat3 {
        self + rhs.scale(-1.0)
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, rhs: Mat3) -> Mat3 {
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for (k, rhs_row) in rhs.m.iter().enumerate() {
                    out[i][j] += self.m[i][k] * rhs_row[j];
                }
            }
        }
        Mat3 { m: out }
    }
}

/// Jacobi eigendecomposition of a small symmetric matrix.
///
/// Returns (eigenvalues, eigenvectors-as-columns) sorted by descending
/// eigenvalue. Plenty for the Gram matrices of generator lists (n <= 4).
pub fn sym_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut a: Vec<Vec<f64>> = a.to_vec();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    for _sweep in 0..30 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
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
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i][i]).collect();
    let eigenvectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&col| (0..n).map(|row| v[row][col]).collect())
        .collect();
    (eigenvalues, eigenvectors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mat2_inverse_roundtrip() {
        let g = Mat2::new(1.0, 2.0, 3.0, 5.0);
        let inv = g.inverse(1e-12).unwrap();
        let id = g * inv;
        assert!((id - Mat2::identity()).norm() < 1e-12);
    }

    #[test]
    fn mat2_singular_inverse_fails() {
        let g = Mat2::new(1.0, 2.0, 2.0, 4.0);
        assert!(matches!(
            g.inverse(1e-12),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn singular_values_of_diagonal() {
        let g = Mat2::diag(3.0, -0.5);
        let (hi, lo) = g.singular_values();
        assert!((hi - 3.0).abs() < 1e-12);
        assert!((lo - 0.5).abs() < 1e-12);
        assert!((g.cond() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_is_orthogonal() {
        let r = Mat2::rotation(0.7);
        assert!((r * r.transpose() - Mat2::identity()).norm() < 1e-14);
        assert!((r.det() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn mat3_mul_identity() {
        let a = Mat3::from_rows([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 10.0]]);
        assert_eq!(a * Mat3::identity(), a);
    }

    #[test]
    fn jacobi_recovers_known_spectrum() {
        // [[2,1],[1,2]] has eigenvalues 3 and 1.
        let (vals, vecs) = sym_eigen(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        assert!((vals[0] - 3.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        // eigenvector for 3 is (1,1)/sqrt(2) up to sign
        let v = &vecs[0];
        assert!((v[0].abs() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((v[0] - v[1]).abs() < 1e-12);
    }

    #[test]
    fn jacobi_handles_4x4() {
        // diag(4,3,2,1) conjugated by a permutation stays the same spectrum.
        let a = vec![
            vec![3.0, 0.5, 0.0, 0.1],
            vec![0.5, 2.0, 0.3, 0.0],
            vec![0.0, 0.3, 1.0, 0.2],
            vec![0.1, 0.0, 0.2, 4.0],
        ];
        let (vals, vecs) = sym_eigen(&a);
        // residual check: A v = lambda v
        for (lambda, v) in vals.iter().zip(&vecs) {
            for i in 0..4 {
                let av: f64 = (0..4).map(|j| a[i][j] * v[j]).sum();
                assert!((av - lambda * v[i]).abs() < 1e-10);
            }
        }
    }
}
