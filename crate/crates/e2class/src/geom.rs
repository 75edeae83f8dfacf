//! Core geometry: the isometry between symmetric 2x2 matrices and Lorentz
//! 3-space, the dagger action of GL(2,R), brackets, closed-form exponentials
//! and the Langlands scalar factorization.

use crate::error::{Error, Result};
use crate::mat::Mat2;

/// A point of R^3 in Lorentz coordinates; `t` is the time-like coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, t: f64) -> Self {
        Self { x, y, t }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.t * self.t).sqrt()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.t]
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }
}

/// A symmetric 2x2 matrix [[p, q], [q, r]]; symmetry is structural.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sym2 {
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl Sym2 {
    pub const fn new(p: f64, q: f64, r: f64) -> Self {
        Self { p, q, r }
    }

    pub const fn identity() -> Self {
        Self::new(1.0, 0.0, 1.0)
    }

    /// sigma_1 = I, the positive (eta = 1) orbit representative.
    pub const fn sigma_pos() -> Self {
        Self::identity()
    }

    /// sigma_0 = `[[1,0],[0,0]]`, the light-cone (eta = 0) representative.
    pub const fn sigma_null() -> Self {
        Self::new(1.0, 0.0, 0.0)
    }

    /// sigma_{-1} = `[[0,1],[1,0]]`, the eta = -1 representative.
    pub const fn sigma_neg() -> Self {
        Self::new(0.0, 1.0, 0.0)
    }

    pub fn det(&self) -> f64 {
        self.p * self.r - self.q * self.q
    }

    pub fn trace(&self) -> f64 {
        self.p + self.r
    }

    pub fn to_mat2(&self) -> Mat2 {
        Mat2::new(self.p, self.q, self.q, self.r)
    }

    /// Symmetrizes an (almost) symmetric Mat2; callers check the defect.
    pub fn from_mat2(m: &Mat2) -> Self {
        Self::new(m.m[0][0], 0.5 * (m.m[0][1] + m.m[1][0]), m.m[1][1])
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.p + other.p, self.q + other.q, self.r + other.r)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.p - other.p, self.q - other.q, self.r - other.r)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.p * s, self.q * s, self.r * s)
    }

    /// Norm induced by the half-trace inner product; equals the Euclidean
    /// norm of `phi_inv(self)`.
    pub fn norm(&self) -> f64 {
        inner(self, self).sqrt()
    }

    /// Eigenvalues (hi, lo) with hi >= lo, by the closed 2x2 form.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.p + self.r);
        let disc = (0.25 * (self.p - self.r) * (self.p - self.r) + self.q * self.q).sqrt();
        (mean + disc, mean - disc)
    }

    /// Unit eigenvector for the given eigenvalue, sign-normalized so its
    /// first nonzero component is positive.
    pub fn eigenvector(&self, lambda: f64) -> [f64; 2] {
        // (p - lambda) v0 + q v1 = 0 and q v0 + (r - lambda) v1 = 0;
        // pick the better-conditioned row.
        let r0 = [self.p - lambda, self.q];
        let r1 = [self.q, self.r - lambda];
        let n0 = r0[0].abs() + r0[1].abs();
        let n1 = r1[0].abs() + r1[1].abs();
        let row = if n0 >= n1 { r0 } else { r1 };
        let mut v = if row[0].abs() + row[1].abs() == 0.0 {
            [1.0, 0.0]
        } else {
            [row[1], -row[0]]
        };
        let n = (v[0] * v[0] + v[1] * v[1]).sqrt();
        v = [v[0] / n, v[1] / n];
        let lead = if v[0].abs() > 1e-14 { v[0] } else { v[1] };
        if lead < 0.0 {
            v = [-v[0], -v[1]];
        }
        v
    }

    /// Symmetric square root of a positive-definite matrix.
    pub fn sqrt_pd(&self) -> Result<Mat2> {
        let (hi, lo) = self.eigenvalues();
        if lo <= 0.0 {
            return Err(Error::IllConditioned {
                detail: format!(
                    "square root needs a positive-definite matrix (eigenvalues {hi:.3e}, {lo:.3e})"
                ),
            });
        }
        let v_hi = self.eigenvector(hi);
        let v_lo = self.eigenvector(lo);
        let (sh, sl) = (hi.sqrt(), lo.sqrt());
        let mut out = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.m[i][j] = sh * v_hi[i] * v_hi[j] + sl * v_lo[i] * v_lo[j];
            }
        }
        Ok(out)
    }
}

/// The linear isometry of R^3 onto Sym(2,R): (x, y, t) -> [[t+x, y], [y, t-x]].
pub fn phi(v: &Vec3) -> Sym2 {
    Sym2::new(v.t + v.x, v.y, v.t - v.x)
}

/// Inverse of [`phi`]: x = (p-r)/2, y = q, t = (p+r)/2.
pub fn phi_inv(sigma: &Sym2) -> Vec3 {
    Vec3::new(
        0.5 * (sigma.p - sigma.r),
        sigma.q,
        0.5 * (sigma.p + sigma.r),
    )
}

/// Half-trace inner product on Sym(2,R); pulls back to the Euclidean
/// inner product of R^3 under [`phi`].
pub fn inner(a: &Sym2, b: &Sym2) -> f64 {
    0.5 * (a.p * b.p + 2.0 * a.q * b.q + a.r * b.r)
}

/// The Lorentz quadratic form t^2 - x^2 - y^2 = det(phi(v)).
pub fn eta(v: &Vec3) -> f64 {
    v.t * v.t - v.x * v.x - v.y * v.y
}

/// The dagger action of GL(2,R) on symmetric matrices: h . sigma = th^-1 sigma h^-1.
pub fn dagger(h: &Mat2, sigma: &Sym2, det_floor: f64) -> Result<Sym2> {
    let inv = h.inverse(det_floor)?;
    let out = inv.transpose() * sigma.to_mat2() * inv;
    Ok(Sym2::from_mat2(&out))
}

/// Derivative at the identity of the dagger action: -(tA sigma + sigma A).
pub fn dagger_derivative(a: &Mat2, sigma: &Sym2) -> Sym2 {
    let s = sigma.to_mat2();
    let out = (a.transpose() * s + s * *a).scale(-1.0);
    Sym2::from_mat2(&out)
}

/// Lie bracket AB - BA.
pub fn bracket(a: &Mat2, b: &Mat2) -> Mat2 {
    *a * *b - *b * *a
}

/// Closed-form 2x2 matrix exponential of s*A.
///
/// Splits s*A = tau*I + B with B traceless; B^2 = -det(B) I, so the series
/// collapses to C(B)*I + S(B)*B with cosh/cos/polynomial coefficient pairs
/// depending on the sign of det(B). A short Taylor expansion covers the
/// branch point |det B| < 1e-12 without a 0/0.
pub fn expm2(a: &Mat2, s: f64) -> Mat2 {
    let m = a.scale(s);
    let tau = 0.5 * m.trace();
    let b = m - Mat2::identity().scale(tau);
    let det_b = b.det();
    // delta = -det(B) satisfies B^2 = delta I.
    let delta = -det_b;
    let (c, sc) = if det_b.abs() < 1e-12 {
        (
            1.0 + delta / 2.0 + delta * delta / 24.0,
            1.0 + delta / 6.0 + delta * delta / 120.0,
        )
    } else if delta > 0.0 {
        let w = delta.sqrt();
        (w.cosh(), w.sinh() / w)
    } else {
        let w = (-delta).sqrt();
        (w.cos(), w.sin() / w)
    };
    let et = tau.exp();
    (Mat2::identity().scale(c) + b.scale(sc)).scale(et)
}

/// Factors h = m * (a I) with det(m) = 1 and a > 0, the scalar Langlands split
/// of the general-linear factor of the parabolic. The symmetric part of the
/// parabolic element passes through unchanged.
pub fn langlands_factor(sigma: &Sym2, h: &Mat2, det_floor: f64) -> Result<(Sym2, Mat2, f64)> {
    let d = h.det();
    if d < 0.0 {
        return Err(Error::NegativeDeterminant { det: d });
    }
    if d <= det_floor {
        return Err(Error::SingularMatrix { det: d });
    }
    let a = d.sqrt();
    Ok((*sigma, h.scale(1.0 / a), a))
}
