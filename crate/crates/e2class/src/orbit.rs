//! Orbit classification under R+ x O+(2,1) and explicit conjugators carrying
//! lines and planes of symmetric matrices onto the fixed representatives.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::error::{Error, Result};
use crate::geom::{dagger, phi_inv, Sym2, Vec3};
use crate::mat::Mat2;
use crate::span::Subspace;
use crate::tol::Tolerances;

/// The six orbits of R+ x O+(2,1) on R^3, in the physical naming.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrbitClass {
    /// The origin.
    Present,
    /// eta > 0, t > 0: upper sheet of the two-sheet hyperboloid.
    Future,
    /// eta > 0, t < 0.
    Past,
    /// eta = 0, t > 0.
    FutureCone,
    /// eta = 0, t < 0.
    PastCone,
    /// eta < 0: the one-sheet hyperboloid.
    Elsewhere,
}

impl OrbitClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            OrbitClass::Present => "Present",
            OrbitClass::Future => "Future",
            OrbitClass::Past => "Past",
            OrbitClass::FutureCone => "FutureCone",
            OrbitClass::PastCone => "PastCone",
            OrbitClass::Elsewhere => "Elsewhere",
        }
    }
}

/// Sign class of a projective line of symmetric matrices, i.e. of det(sigma).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EtaType {
    Pos,
    Null,
    Neg,
}

impl EtaType {
    /// The orbit representative sigma_eta.
    pub fn representative(&self) -> Sym2 {
        match self {
            EtaType::Pos => Sym2::sigma_pos(),
            EtaType::Null => Sym2::sigma_null(),
            EtaType::Neg => Sym2::sigma_neg(),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            EtaType::Pos => "Pos",
            EtaType::Null => "Null",
            EtaType::Neg => "Neg",
        }
    }
}

/// Result of canonicalizing a line (or plane, via duality): a conjugator g
/// with dagger(g, generator) = scale * sigma_eta, and the recomputed residual.
#[derive(Debug, Clone, PartialEq)]
pub struct LineCanon {
    pub eta_type: EtaType,
    pub conjugator: Mat2,
    pub scale: f64,
    pub residual: f64,
}

/// Orbit of a vector by the signs of (eta, t), with a relative zero band.
pub fn classify_vector(u: &Vec3, tol: &Tolerances) -> OrbitClass {
    let e = crate::geom::eta(u);
    let n2 = u.x * u.x + u.y * u.y + u.t * u.t;
    let eta_band = tol.residual * (1.0 + n2);
    let t_band = tol.residual * (1.0 + n2.sqrt());
    if e.abs() <= eta_band {
        if u.t > t_band {
            OrbitClass::FutureCone
        } else if u.t < -t_band {
            OrbitClass::PastCone
        } else {
            OrbitClass::Present
        }
    } else if e > 0.0 {
        if u.t > 0.0 {
            OrbitClass::Future
        } else {
            OrbitClass::Past
        }
    } else {
        OrbitClass::Elsewhere
    }
}

/// Sign class of det for a unit-norm line generator, with the crate-wide
/// singular-value rank rule deciding the Null band.
fn eta_type_of_unit(sigma: &Sym2, tol: &Tolerances) -> Result<EtaType> {
    let (s_hi, s_lo) = sigma.to_mat2().singular_values();
    let cutoff = tol.rank_cutoff(s_hi);
    if s_lo <= 10.0 * cutoff && s_lo > 0.1 * cutoff {
        return Err(Error::IllConditioned {
            detail: format!(
                "smallest singular value {s_lo:.3e} sits on the rank boundary {cutoff:.3e}"
            ),
        });
    }
    if s_lo <= cutoff {
        Ok(EtaType::Null)
    } else if sigma.det() > 0.0 {
        Ok(EtaType::Pos)
    } else {
        Ok(EtaType::Neg)
    }
}

/// Sign class of a line generator of any scale.
pub fn eta_type_of(sigma: &Sym2, tol: &Tolerances) -> Result<EtaType> {
    let n = sigma.norm();
    if n <= tol.rank {
        return Err(Error::ZeroSubspace);
    }
    eta_type_of_unit(&sigma.scale(1.0 / n), tol)
}

/// Sign-normalization factor: first coordinate of (t, x, y) above the noise
/// floor is made positive. Deterministic for unit generators.
fn sign_factor(sigma: &Sym2, tol: &Tolerances) -> f64 {
    let u = phi_inv(sigma);
    for c in [u.t, u.x, u.y] {
        if c.abs() > tol.rank {
            return c.signum();
        }
    }
    1.0
}

fn canon_residual(g: &Mat2, sigma: &Sym2, scale: f64, target: &Sym2, tol: &Tolerances) -> f64 {
    match dagger(g, sigma, tol.det_floor) {
        Ok(image) => image.sub(&target.scale(scale)).norm() / target.scale(scale).norm(),
        Err(_) => f64::INFINITY,
    }
}

/// Builds a conjugator carrying the line onto its representative sigma_eta.
///
/// Representatives already in canonical position get the identity conjugator.
/// Otherwise: positive lines map by the symmetric square root, null lines by
/// the rotation taking the kernel onto the second coordinate axis followed by
/// a dilation, negative lines by orthogonal diagonalization, scaling to
/// diag(1,-1), and the fixed pi/4 rotation onto sigma_{-1}.
pub fn canonicalize_line(line: &Subspace, tol: &Tolerances) -> Result<LineCanon> {
    if line.dim() != 1 {
        return Err(Error::BadDimension {
            expected: "1",
            got: line.dim(),
        });
    }
    let sigma = line.generators()[0];

    // Already canonical: keep the identity conjugator.
    for eta in [EtaType::Pos, EtaType::Null, EtaType::Neg] {
        let rep = eta.representative();
        let rep_line = Subspace::line(&rep, tol)?;
        if line.distance(&rep_line) <= tol.residual {
            let scale = crate::geom::inner(&sigma, &rep) / crate::geom::inner(&rep, &rep);
            return Ok(LineCanon {
                eta_type: eta,
                conjugator: Mat2::identity(),
                scale,
                residual: canon_residual(&Mat2::identity(), &sigma, scale, &rep, tol),
            });
        }
    }

    let sign = sign_factor(&sigma, tol);
    let sn = sigma.scale(sign);
    let eta = eta_type_of_unit(&sn, tol)?;

    let conjugator = match eta {
        EtaType::Pos => sn.sqrt_pd()?,
        EtaType::Null => {
            let (hi, lo) = sn.eigenvalues();
            // Unit generator with trace > 0: hi is the nonzero eigenvalue.
            let kernel = sn.eigenvector(lo);
            let kappa = f64::atan2(kernel[1], kernel[0]);
            Mat2::rotation(FRAC_PI_2 - kappa).scale(hi.sqrt())
        }
        EtaType::Neg => {
            let (mu1, mu2) = sn.eigenvalues();
            let v1 = sn.eigenvector(mu1);
            let v2 = sn.eigenvector(mu2);
            let vt = Mat2::new(v1[0], v1[1], v2[0], v2[1]);
            Mat2::rotation(FRAC_PI_4) * Mat2::diag(mu1.sqrt(), (-mu2).sqrt()) * vt
        }
    };

    let rep = eta.representative();
    Ok(LineCanon {
        eta_type: eta,
        conjugator,
        scale: sign,
        residual: canon_residual(&conjugator, &sigma, sign, &rep, tol),
    })
}

/// Canonicalizes a plane through the complement line: if g0 carries the
/// orthocomplement onto sigma_eta, then t(g0)^-1 carries the plane onto
/// sigma_eta-perp as spans. The `scale` field is 1 (spans carry no scale).
pub fn canonicalize_plane(plane: &Subspace, tol: &Tolerances) -> Result<LineCanon> {
    if plane.dim() != 2 {
        return Err(Error::BadDimension {
            expected: "2",
            got: plane.dim(),
        });
    }

    for eta in [EtaType::Pos, EtaType::Null, EtaType::Neg] {
        let rep = representative_plane(eta, tol)?;
        if plane.distance(&rep) <= tol.residual {
            return Ok(LineCanon {
                eta_type: eta,
                conjugator: Mat2::identity(),
                scale: 1.0,
                residual: plane.distance(&rep),
            });
        }
    }

    let complement = plane.ortho_complement(tol)?;
    let base = canonicalize_line(&complement, tol)?;
    let conjugator = base.conjugator.inverse(tol.det_floor)?.transpose();
    let target = representative_plane(base.eta_type, tol)?;
    let image = plane.apply_dagger(&conjugator, tol)?;
    Ok(LineCanon {
        eta_type: base.eta_type,
        conjugator,
        scale: 1.0,
        residual: image.distance(&target),
    })
}

/// The plane representative sigma_eta-perp.
pub fn representative_plane(eta: EtaType, tol: &Tolerances) -> Result<Subspace> {
    Subspace::line(&eta.representative(), tol)?.ortho_complement(tol)
}

/// Membership in the full span-stabilizer of sigma_eta: dagger(g, sigma_eta)
/// must stay on the line. Returns the out-of-span residual alongside.
pub fn stabilizer_residual(eta: EtaType, g: &Mat2, tol: &Tolerances) -> Result<f64> {
    let rep = eta.representative();
    let image = dagger(g, &rep, tol.det_floor)?;
    let line = Subspace::line(&rep, tol)?;
    Ok(crate::span::out_of_span(
        &line.coords(),
        &crate::span::sym_coords(&image),
    ))
}

pub fn stabilizer_membership(eta: EtaType, g: &Mat2, tol: &Tolerances) -> Result<bool> {
    Ok(stabilizer_residual(eta, g, tol)? <= tol.residual)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn classify_vector_representatives() {
        let t = tol();
        assert_eq!(
            classify_vector(&Vec3::new(0.0, 0.0, 1.0), &t),
            OrbitClass::Future
        );
        assert_eq!(
            classify_vector(&Vec3::new(1.0, 0.0, 1.0), &t),
            OrbitClass::FutureCone
        );
        assert_eq!(
            classify_vector(&Vec3::new(0.0, 1.0, 0.0), &t),
            OrbitClass::Elsewhere
        );
        assert_eq!(
            classify_vector(&Vec3::new(0.0, 0.0, 0.0), &t),
            OrbitClass::Present
        );
        assert_eq!(
            classify_vector(&Vec3::new(0.3, 0.1, -2.0), &t),
            OrbitClass::Past
        );
        assert_eq!(
            classify_vector(&Vec3::new(3.0, 4.0, -5.0), &t),
            OrbitClass::PastCone
        );
    }

    #[test]
    fn eta_type_examples() {
        let t = tol();
        assert_eq!(eta_type_of(&Sym2::identity(), &t).unwrap(), EtaType::Pos);
        assert_eq!(eta_type_of(&Sym2::sigma_null(), &t).unwrap(), EtaType::Null);
        assert_eq!(eta_type_of(&Sym2::sigma_neg(), &t).unwrap(), EtaType::Neg);
        // Negative-definite generators are still Pos lines.
        assert_eq!(
            eta_type_of(&Sym2::new(-2.0, 0.0, -1.0), &t).unwrap(),
            EtaType::Pos
        );
    }

    #[test]
    fn canonical_lines_get_identity_conjugators() {
        let t = tol();
        for (gen, eta) in [
            (Sym2::identity(), EtaType::Pos),
            (Sym2::sigma_null(), EtaType::Null),
            (Sym2::sigma_neg(), EtaType::Neg),
        ] {
            let canon = canonicalize_line(&Subspace::line(&gen, &t).unwrap(), &t).unwrap();
            assert_eq!(canon.eta_type, eta);
            assert!((canon.conjugator - Mat2::identity()).norm() < 1e-14);
            assert!(canon.residual < 1e-12);
        }
    }

    #[test]
    fn null_line_example_rotates_kernel() {
        let t = tol();
        // span [[0,0],[0,1]]: kernel is e_1, rotated to e_2 by R_{pi/2}
        // (times the dilation that absorbs the eigenvalue).
        let line = Subspace::line(&Sym2::new(0.0, 0.0, 1.0), &t).unwrap();
        let canon = canonicalize_line(&line, &t).unwrap();
        assert_eq!(canon.eta_type, EtaType::Null);
        let c = canon.conjugator.norm() / Mat2::rotation(FRAC_PI_2).norm();
        assert!(c > 0.0);
        assert!((canon.conjugator - Mat2::rotation(FRAC_PI_2).scale(c)).norm() < 1e-13);
        // The raw generator maps onto sigma_0 under the plain quarter turn.
        let image = dagger(&Mat2::rotation(FRAC_PI_2), &Sym2::new(0.0, 0.0, 1.0), 1e-12).unwrap();
        assert!(image.sub(&Sym2::sigma_null()).norm() < 1e-14);
        // And the stored unit generator maps onto sigma_0 exactly.
        let image = dagger(&canon.conjugator, line.generators().first().unwrap(), 1e-12).unwrap();
        assert!(image.sub(&Sym2::sigma_null().scale(canon.scale)).norm() < 1e-12);
    }

    #[test]
    fn positive_line_uses_matrix_square_root() {
        let t = tol();
        let sigma = Sym2::new(5.0, 3.0, 5.0);
        let line = Subspace::line(&sigma, &t).unwrap();
        let canon = canonicalize_line(&line, &t).unwrap();
        assert_eq!(canon.eta_type, EtaType::Pos);
        assert!(canon.residual < 1e-12);
        // The conjugator is the square root of the unit-norm generator and
        // carries it onto the identity.
        let gen = line.generators()[0];
        let image = dagger(&canon.conjugator, &gen, 1e-12).unwrap();
        assert!(image.sub(&Sym2::identity().scale(canon.scale)).norm() < 1e-12);
        let sq = canon.conjugator * canon.conjugator;
        assert!((sq - gen.scale(canon.scale).to_mat2()).norm() < 1e-12);
    }

    #[test]
    fn negative_line_lands_on_sigma_neg() {
        let t = tol();
        let sigma = Sym2::new(1.0, 0.4, -2.0);
        let line = Subspace::line(&sigma, &t).unwrap();
        let canon = canonicalize_line(&line, &t).unwrap();
        assert_eq!(canon.eta_type, EtaType::Neg);
        assert!(canon.residual < 1e-12, "residual {}", canon.residual);
    }

    #[test]
    fn sign_flipped_generators_report_negative_scale() {
        let t = tol();
        // -sigma_0 spans the same line; the invariant holds with scale < 0.
        let line = Subspace::new(&[Sym2::new(-1.0, 0.0, -0.25)], &t).unwrap();
        let canon = canonicalize_line(&line, &t).unwrap();
        let gen = line.generators()[0];
        let image = dagger(&canon.conjugator, &gen, 1e-12).unwrap();
        let target = canon.eta_type.representative().scale(canon.scale);
        assert!(image.sub(&target).norm() < 1e-10);
    }

    #[test]
    fn plane_duality_roundtrip() {
        let t = tol();
        // Random-ish h applied to sigma_0-perp, recovered by the plane canonicalizer.
        let h = Mat2::new(1.3, -0.7, 0.4, 0.9);
        let base = representative_plane(EtaType::Null, &t).unwrap();
        let moved = base.apply_dagger(&h, &t).unwrap();
        let canon = canonicalize_plane(&moved, &t).unwrap();
        assert_eq!(canon.eta_type, EtaType::Null);
        assert!(canon.residual < 1e-8, "residual {}", canon.residual);
        let image = moved.apply_dagger(&canon.conjugator, &t).unwrap();
        assert!(image.distance(&base) < 1e-8);
    }

    #[test]
    fn plane_example_diagonal() {
        let t = tol();
        // span{I, diag(1,-1)} is the diagonal plane sigma_{-1}-perp.
        let plane = Subspace::new(&[Sym2::identity(), Sym2::new(1.0, 0.0, -1.0)], &t).unwrap();
        let canon = canonicalize_plane(&plane, &t).unwrap();
        assert_eq!(canon.eta_type, EtaType::Neg);
        assert!((canon.conjugator - Mat2::identity()).norm() < 1e-13);
    }

    #[test]
    fn stabilizer_examples() {
        let t = tol();
        // eta = 1: e^t R_theta.
        let g = Mat2::rotation(0.8).scale(1.7);
        assert!(stabilizer_membership(EtaType::Pos, &g, &t).unwrap());
        // eta = 0: lower triangular with positive diagonal.
        let g = Mat2::new(1.4, 0.0, -2.0, 0.3);
        assert!(stabilizer_membership(EtaType::Null, &g, &t).unwrap());
        // eta = -1: R_{pi/2} maps sigma_{-1} to -sigma_{-1}, same span.
        let g = Mat2::rotation(FRAC_PI_2);
        assert!(stabilizer_membership(EtaType::Neg, &g, &t).unwrap());
        // Non-members.
        assert!(!stabilizer_membership(EtaType::Pos, &Mat2::new(1.0, 0.4, 0.0, 1.0), &t).unwrap());
        assert!(!stabilizer_membership(EtaType::Null, &Mat2::rotation(0.4), &t).unwrap());
        assert!(!stabilizer_membership(EtaType::Neg, &Mat2::rotation(0.4), &t).unwrap());
    }

    #[test]
    fn ill_conditioned_band_is_reported() {
        let t = tol();
        // Unit-norm generator with smallest singular value right at the cutoff.
        let eps = 3e-9;
        let sigma = Sym2::new(1.0, 0.0, eps);
        assert!(matches!(
            eta_type_of(&sigma, &t),
            Err(Error::IllConditioned { .. })
        ));
    }
}
