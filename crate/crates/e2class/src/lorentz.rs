//! The projective Lorentz representation of GL(2,R) on R^3 and the Iwasawa
//! decomposition of SL(2,R).
//!
//! `lorentz_of` carries the dagger action over to Lorentz coordinates
//! (x, y, t). On SL(2,R) the image lands in the proper orthochronous group
//! SO_0(2,1); scalars map to positive dilations, so the full image is
//! R+ x O+(2,1). The kernel is {+-I}.

use crate::error::{Error, Result};
use crate::geom::{dagger, phi, phi_inv, Vec3};
use crate::mat::{Mat2, Mat3};

/// Iwasawa parameters of a unimodular matrix: g = N(t) A(s) K(theta) with
/// N(t) the lower shear, A(s) = diag(e^{s/2}, e^{-s/2}) and
/// K(theta) the rotation by theta/2.
///
/// `theta` lives in [0, 4*pi): the halved-angle convention means the K factor
/// only sweeps the full circle once theta does two turns. Restricting theta to
/// one turn would parametrize PSL(2,R) instead and lose the matrices whose
/// rotation factor has angle >= pi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IwasawaSL2 {
    pub t: f64,
    pub s: f64,
    pub theta: f64,
}

/// Which one-parameter Iwasawa family of SO_0(2,1) to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IwasawaKind {
    /// Parabolic factor, image of the lower shears.
    N,
    /// Boost factor, image of the unimodular dilations.
    A,
    /// Rotation factor, image of SO(2); the angle doubles under the map.
    K,
}

/// The SL(2,R) Iwasawa factors in the fixed parametrization.
pub fn sl2_factor(kind: IwasawaKind, param: f64) -> Mat2 {
    match kind {
        IwasawaKind::N => Mat2::new(1.0, 0.0, param, 1.0),
        IwasawaKind::A => Mat2::diag((0.5 * param).exp(), (-0.5 * param).exp()),
        IwasawaKind::K => Mat2::rotation(0.5 * param),
    }
}

impl IwasawaSL2 {
    pub fn compose(&self) -> Mat2 {
        sl2_factor(IwasawaKind::N, self.t)
            * sl2_factor(IwasawaKind::A, self.s)
            * sl2_factor(IwasawaKind::K, self.theta)
    }
}

/// The 3x3 matrix of v -> phi_inv(dagger(g, phi(v))) in coordinates (x, y, t).
pub fn lorentz_of(g: &Mat2, det_floor: f64) -> Result<Mat3> {
    let d = g.det();
    if d.abs() <= det_floor {
        return Err(Error::SingularMatrix { det: d });
    }
    let mut out = [[0.0; 3]; 3];
    let basis = [
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(0.0, 1.0, 0.0),
        Vec3::new(0.0, 0.0, 1.0),
    ];
    for (col, e) in basis.iter().enumerate() {
        let image = phi_inv(&dagger(g, &phi(e), det_floor)?);
        out[0][col] = image.x;
        out[1][col] = image.y;
        out[2][col] = image.t;
    }
    Ok(Mat3::from_rows(out))
}

/// Iwasawa decomposition of a unimodular 2x2 matrix.
///
/// The K factor is peeled off by an orthogonal-triangular split with positive
/// diagonal on the triangular part, which makes the three factors unique.
pub fn iwasawa_sl2(g: &Mat2, tol_residual: f64) -> Result<IwasawaSL2> {
    let d = g.det();
    if (d - 1.0).abs() > tol_residual {
        return Err(Error::NotUnimodular { det: d });
    }
    let a = g.m[0][0];
    let b = g.m[0][1];
    // Rotation angle phi of the K factor: g R_{-phi} must kill the (1,2)
    // entry and leave a positive (1,1) entry.
    let phi_angle = f64::atan2(-b, a);
    let lower = *g * Mat2::rotation(-phi_angle);
    let l11 = lower.m[0][0];
    let s = 2.0 * l11.ln();
    let t = lower.m[1][0] / l11;
    let mut theta = 2.0 * phi_angle;
    let turn = 4.0 * std::f64::consts::PI;
    theta = theta.rem_euclid(turn);
    Ok(IwasawaSL2 { t, s, theta })
}

/// The Lorentz image of the corresponding SL(2,R) Iwasawa factor, in closed
/// form (matches `lorentz_of(sl2_factor(...))` to rounding).
///
/// The N and A images are sometimes tabulated at the inverse parameter
/// (t -> -t, s -> -s); the generated one-parameter groups are the same
/// either way. The A image is a genuine boost, so its (3,3) entry is
/// cosh(s).
pub fn lorentz_iwasawa(kind: IwasawaKind, param: f64) -> Mat3 {
    match kind {
        IwasawaKind::N => {
            let t = param;
            let h = 0.5 * t * t;
            Mat3::from_rows([[1.0 - h, -t, h], [t, 1.0, -t], [-h, -t, 1.0 + h]])
        }
        IwasawaKind::A => {
            let (ch, sh) = (param.cosh(), param.sinh());
            Mat3::from_rows([[ch, 0.0, -sh], [0.0, 1.0, 0.0], [-sh, 0.0, ch]])
        }
        IwasawaKind::K => {
            let (sn, cs) = param.sin_cos();
            Mat3::from_rows([[cs, -sn, 0.0], [sn, cs, 0.0], [0.0, 0.0, 1.0]])
        }
    }
}

/// True iff M = rho * M0 with rho > 0 and M0 in the orthochronous group
/// O+(2,1): the congruence tM eta M must be a positive multiple of eta and
/// the (3,3) entry must be positive.
pub fn is_orthochronous_scaled(m: &Mat3, tol_residual: f64) -> bool {
    let eta = Mat3::lorentz_form();
    let g = m.transpose() * eta * *m;
    let rho2 = g.m[2][2];
    if rho2 <= 0.0 || m.m[2][2] <= 0.0 {
        return false;
    }
    let defect = (g - eta.scale(rho2)).norm();
    defect <= tol_residual * (1.0 + g.norm())
}
