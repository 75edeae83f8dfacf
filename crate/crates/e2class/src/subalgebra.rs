//! Validation of Lie subalgebras, the sigma-invariance check, and
//! canonicalization inside the three stabilizer algebras (rotation-dilation,
//! lower-triangular, diagonal), extracting the continuous parameters
//! alpha, lambda and beta.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::geom::{bracket, dagger_derivative};
use crate::mat::Mat2;
use crate::orbit::EtaType;
use crate::span::{mat_coords, out_of_span, Subalgebra, Subspace};
use crate::tol::Tolerances;

/// Normal-form families of subalgebras of the three stabilizer algebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// All of h_1 = span{I, J}.
    FullH1,
    /// span{I + alpha J}, alpha >= 0.
    RotDil,
    /// span{J}: infinitesimal rotations.
    So2,
    /// All of h_0 = span{I, X, Y}.
    FullH0,
    /// span{lambda I + Y}.
    DiagLambda,
    /// span{X}.
    Shear,
    /// span{I + X}.
    DilShear,
    /// span{I}.
    Scalar,
    /// span{X, lambda I + Y}: the non-abelian planes.
    PlaneLambda,
    /// span{I, Y}.
    PlaneIY,
    /// span{I, X}.
    PlaneIX,
    /// All of h_{-1} = span{Z, Y}.
    FullHneg1,
    /// span{diag(1, beta)}, beta in [-1, 1].
    DiagBeta,
}

impl Family {
    pub fn param_name(&self) -> Option<&'static str> {
        match self {
            Family::RotDil => Some("alpha"),
            Family::DiagLambda | Family::PlaneLambda => Some("lambda"),
            Family::DiagBeta => Some("beta"),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::FullH1 => "FullH1",
            Family::RotDil => "RotDil",
            Family::So2 => "So2",
            Family::FullH0 => "FullH0",
            Family::DiagLambda => "DiagLambda",
            Family::Shear => "Shear",
            Family::DilShear => "DilShear",
            Family::Scalar => "Scalar",
            Family::PlaneLambda => "PlaneLambda",
            Family::PlaneIY => "PlaneIY",
            Family::PlaneIX => "PlaneIX",
            Family::FullHneg1 => "FullHneg1",
            Family::DiagBeta => "DiagBeta",
        }
    }
}

/// A subalgebra reduced to its normal form: Ad(conjugator) carries the input
/// span onto the family representative at `param`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm {
    pub eta_type: EtaType,
    pub family: Family,
    pub param: Option<f64>,
    pub conjugator: Mat2,
    pub residual: f64,
}

/// Generators of the family representative (the span Ad(conjugator) maps onto).
pub fn normal_form_generators(family: Family, param: Option<f64>) -> Result<Vec<Mat2>> {
    let need = |name: &str| -> Result<f64> {
        param.ok_or_else(|| Error::BadParams(format!("family needs parameter {name}")))
    };
    let id = Mat2::identity();
    Ok(match family {
        Family::FullH1 => vec![id, Mat2::j_gen()],
        Family::RotDil => {
            let alpha = need("alpha")?;
            if alpha < 0.0 {
                return Err(Error::BadParams(format!("alpha must be >= 0, got {alpha}")));
            }
            vec![id + Mat2::j_gen().scale(alpha)]
        }
        Family::So2 => vec![Mat2::j_gen()],
        Family::FullH0 => vec![id, Mat2::x_gen(), Mat2::y_gen()],
        Family::DiagLambda => vec![id.scale(need("lambda")?) + Mat2::y_gen()],
        Family::Shear => vec![Mat2::x_gen()],
        Family::DilShear => vec![id + Mat2::x_gen()],
        Family::Scalar => vec![id],
        Family::PlaneLambda => vec![Mat2::x_gen(), id.scale(need("lambda")?) + Mat2::y_gen()],
        Family::PlaneIY => vec![id, Mat2::y_gen()],
        Family::PlaneIX => vec![id, Mat2::x_gen()],
        Family::FullHneg1 => vec![Mat2::z_gen(), Mat2::y_gen()],
        Family::DiagBeta => {
            let beta = need("beta")?;
            if !(-1.0..=1.0).contains(&beta) {
                return Err(Error::BadParams(format!(
                    "beta must lie in [-1, 1], got {beta}"
                )));
            }
            vec![Mat2::diag(1.0, beta)]
        }
    })
}

/// The stabilizer algebra of the eta representative line (or, transposed,
/// of the dual plane): {I, J}, {I, X, Y} or {Z, Y}.
pub fn stabilizer_algebra(eta: EtaType, transposed: bool, tol: &Tolerances) -> Subalgebra {
    let gens: Vec<Mat2> = match eta {
        EtaType::Pos => vec![Mat2::identity(), Mat2::j_gen()],
        EtaType::Null => vec![Mat2::identity(), Mat2::x_gen(), Mat2::y_gen()],
        EtaType::Neg => vec![Mat2::z_gen(), Mat2::y_gen()],
    };
    let gens: Vec<Mat2> = if transposed {
        gens.iter().map(Mat2::transpose).collect()
    } else {
        gens
    };
    Subalgebra::reduce(&gens, tol).expect("stabilizer generators are nonzero")
}

/// Reduces the generators and checks bracket closure.
///
/// The closure defect of a pair is the out-of-span fraction of their bracket;
/// brackets below the residual floor count as zero (commuting pairs).
pub fn validate_subalgebra(gens: &[Mat2], tol: &Tolerances) -> Result<Subalgebra> {
    let alg = Subalgebra::reduce(gens, tol)?;
    let coords = alg.coords();
    let basis = alg.generators();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let br = bracket(&basis[i], &basis[j]);
            if br.norm() <= tol.residual {
                continue;
            }
            let defect = out_of_span(&coords, &mat_coords(&br));
            if defect > tol.residual {
                return Err(Error::NotClosed {
                    i,
                    j,
                    residual: defect,
                });
            }
        }
    }
    Ok(alg)
}

/// Largest invariance defect: how far the infinitesimal action of `h` moves
/// `sigma` out of its own span, relative to the size of the derivative input.
pub fn invariance_residual(sigma: &Subspace, h: &Subalgebra, tol: &Tolerances) -> f64 {
    let span = sigma.coords();
    let mut worst: f64 = 0.0;
    for a in h.generators() {
        for s in sigma.generators() {
            let d = dagger_derivative(a, s);
            let w = crate::span::sym_coords(&d);
            let norm: f64 = w.iter().map(|v| v * v).sum::<f64>().sqrt();
            let mut res = w.clone();
            for v in &span {
                let dot: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
                for (r, vi) in res.iter_mut().zip(v) {
                    *r -= dot * vi;
                }
            }
            let out = res.iter().map(|v| v * v).sum::<f64>().sqrt();
            worst = worst.max(out / (1.0 + norm));
        }
    }
    let _ = tol;
    worst
}

/// True iff every generator of `h` leaves `sigma` invariant infinitesimally.
pub fn check_invariance(sigma: &Subspace, h: &Subalgebra, tol: &Tolerances) -> bool {
    invariance_residual(sigma, h, tol) <= tol.residual
}

fn check_contained(alg: &Subalgebra, ambient: &Subalgebra, tol: &Tolerances) -> Result<()> {
    let span = ambient.coords();
    for (index, g) in alg.generators().iter().enumerate() {
        let residual = out_of_span(&span, &mat_coords(g));
        if residual > tol.residual {
            return Err(Error::NotContained { index, residual });
        }
    }
    Ok(())
}

fn finish(
    alg: &Subalgebra,
    eta: EtaType,
    family: Family,
    param: Option<f64>,
    conjugator: Mat2,
    tol: &Tolerances,
) -> Result<NormalForm> {
    let target = Subalgebra::reduce(&normal_form_generators(family, param)?, tol)?;
    let image = alg.conjugate(&conjugator, tol)?;
    Ok(NormalForm {
        eta_type: eta,
        family,
        param,
        conjugator,
        residual: image.distance(&target),
    })
}

/// Homogeneous coordinates of a one-dimensional subalgebra with respect to
/// the standard basis of its stabilizer algebra: {I, J} for the
/// rotation-dilation algebra, (I, X, Y) for the lower-triangular one, and
/// (Z, Y) for the diagonal one. Equality is projective.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjPoint {
    coords: Vec<f64>,
}

impl ProjPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().all(|c| *c == 0.0) {
            return Err(Error::ZeroAlgebra);
        }
        Ok(Self { coords })
    }

    /// [x : alpha] of x I + alpha J.
    pub fn in_h1(a: &Mat2) -> Self {
        Self {
            coords: vec![0.5 * (a.m[0][0] + a.m[1][1]), 0.5 * (a.m[0][1] - a.m[1][0])],
        }
    }

    /// [c_I : c_X : c_Y] of c_I I + c_X X + c_Y Y.
    pub fn in_h0(a: &Mat2) -> Self {
        Self {
            coords: vec![a.m[0][0], a.m[1][0], a.m[1][1] - a.m[0][0]],
        }
    }

    /// [p : q] of p Z + q Y = diag(p, q).
    pub fn in_hneg1(a: &Mat2) -> Self {
        Self {
            coords: vec![a.m[0][0], a.m[1][1]],
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Equality up to a nonzero scale factor.
    pub fn projectively_equal(&self, other: &ProjPoint, tol: &Tolerances) -> bool {
        if self.coords.len() != other.coords.len() {
            return false;
        }
        let na: f64 = self.coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        let nb: f64 = other.coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if na == 0.0 || nb == 0.0 {
            return false;
        }
        let dot: f64 = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum();
        let cross2 = 1.0 - (dot / (na * nb)).powi(2);
        cross2.max(0.0).sqrt() <= tol.residual
    }
}

/// Normal form inside h_1 = span{I, J}.
pub fn normalize_in_h1(alg: &Subalgebra, tol: &Tolerances) -> Result<NormalForm> {
    check_contained(alg, &stabilizer_algebra(EtaType::Pos, false, tol), tol)?;
    match alg.dim() {
        2 => finish(
            alg,
            EtaType::Pos,
            Family::FullH1,
            None,
            Mat2::identity(),
            tol,
        ),
        1 => {
            let point = ProjPoint::in_h1(&alg.generators()[0]);
            let [x, alpha_raw] = [point.coords()[0], point.coords()[1]];
            if x.abs() <= tol.rank {
                finish(alg, EtaType::Pos, Family::So2, None, Mat2::identity(), tol)
            } else {
                let slope = alpha_raw / x;
                let conjugator = if slope < 0.0 {
                    Mat2::lambda_reflect()
                } else {
                    Mat2::identity()
                };
                finish(
                    alg,
                    EtaType::Pos,
                    Family::RotDil,
                    Some(slope.abs()),
                    conjugator,
                    tol,
                )
            }
        }
        d => Err(Error::BadDimension {
            expected: "1..=2",
            got: d,
        }),
    }
}

/// Normal form inside h_0 (lower-triangular matrices), following the
/// projective cell decomposition in the (I, X, Y) coordinates.
pub fn normalize_in_h0(alg: &Subalgebra, tol: &Tolerances) -> Result<NormalForm> {
    check_contained(alg, &stabilizer_algebra(EtaType::Null, false, tol), tol)?;
    match alg.dim() {
        3 => finish(
            alg,
            EtaType::Null,
            Family::FullH0,
            None,
            Mat2::identity(),
            tol,
        ),
        1 => {
            let point = ProjPoint::in_h0(&alg.generators()[0]);
            let [ci, cx, cy] = [point.coords()[0], point.coords()[1], point.coords()[2]];
            let scale = (ci * ci + cx * cx + cy * cy).sqrt();
            let small = |v: f64| v.abs() <= tol.rank * scale.max(1.0);
            if !small(cy) {
                // Fat cell [lambda : mu : 1]: a unit lower shear kills mu.
                let lambda = ci / cy;
                let b = cx / cy;
                finish(
                    alg,
                    EtaType::Null,
                    Family::DiagLambda,
                    Some(lambda),
                    Mat2::new(1.0, 0.0, b, 1.0),
                    tol,
                )
            } else if small(cx) {
                finish(
                    alg,
                    EtaType::Null,
                    Family::Scalar,
                    None,
                    Mat2::identity(),
                    tol,
                )
            } else if small(ci) {
                finish(
                    alg,
                    EtaType::Null,
                    Family::Shear,
                    None,
                    Mat2::identity(),
                    tol,
                )
            } else {
                // Dilating shear: scale |c_X/c_I| to 1 with a diagonal
                // conjugation, fix the sign with the reflection.
                let gamma = cx / ci;
                let diag = Mat2::diag(1.0, 1.0 / gamma.abs());
                let conjugator = if gamma < 0.0 {
                    Mat2::lambda_reflect() * diag
                } else {
                    diag
                };
                finish(alg, EtaType::Null, Family::DilShear, None, conjugator, tol)
            }
        }
        2 => {
            let a = alg.generators()[0];
            let b = alg.generators()[1];
            let br = bracket(&a, &b);
            if br.norm() > tol.residual {
                // Non-abelian: the plane is span{X, lambda I + Y}. Pick the
                // element with unit Y-coordinate; lambda is its I-coordinate
                // and the X-component dies under a unit lower shear.
                let pa = ProjPoint::in_h0(&a);
                let pb = ProjPoint::in_h0(&b);
                let [ai, ax, ay] = [pa.coords()[0], pa.coords()[1], pa.coords()[2]];
                let [bi, bx, by] = [pb.coords()[0], pb.coords()[1], pb.coords()[2]];
                let denom = ay * ay + by * by;
                if denom <= tol.rank {
                    return Err(Error::UnrecognizedSubalgebra);
                }
                let (wa, wb) = (ay / denom, by / denom);
                let lambda = wa * ai + wb * bi;
                let mu = wa * ax + wb * bx;
                finish(
                    alg,
                    EtaType::Null,
                    Family::PlaneLambda,
                    Some(lambda),
                    Mat2::new(1.0, 0.0, mu, 1.0),
                    tol,
                )
            } else {
                // Abelian closed planes contain the identity.
                if !alg.contains(&Mat2::identity(), tol) {
                    return Err(Error::UnrecognizedSubalgebra);
                }
                let pa = ProjPoint::in_h0(&alg.generators()[0]);
                let pb = ProjPoint::in_h0(&alg.generators()[1]);
                let [ai, ax, ay] = [pa.coords()[0], pa.coords()[1], pa.coords()[2]];
                let [bi, bx, by] = [pb.coords()[0], pb.coords()[1], pb.coords()[2]];
                // Eliminate the I-coordinate to expose the complement direction.
                let (vx, vy) = if ai.abs() >= bi.abs() {
                    (bx - bi / ai * ax, by - bi / ai * ay)
                } else {
                    (ax - ai / bi * bx, ay - ai / bi * by)
                };
                let vnorm = (vx * vx + vy * vy).sqrt();
                if vnorm <= tol.rank {
                    return Err(Error::UnrecognizedSubalgebra);
                }
                if vy.abs() > tol.rank * vnorm.max(1.0) {
                    // Conjugate lambda' X + Y to Y with the unit lower shear.
                    let shear = vx / vy;
                    finish(
                        alg,
                        EtaType::Null,
                        Family::PlaneIY,
                        None,
                        Mat2::new(1.0, 0.0, shear, 1.0),
                        tol,
                    )
                } else {
                    finish(
                        alg,
                        EtaType::Null,
                        Family::PlaneIX,
                        None,
                        Mat2::identity(),
                        tol,
                    )
                }
            }
        }
        d => Err(Error::BadDimension {
            expected: "1..=3",
            got: d,
        }),
    }
}

/// Normal form inside h_{-1} (diagonal matrices).
pub fn normalize_in_hneg1(alg: &Subalgebra, tol: &Tolerances) -> Result<NormalForm> {
    check_contained(alg, &stabilizer_algebra(EtaType::Neg, false, tol), tol)?;
    match alg.dim() {
        2 => finish(
            alg,
            EtaType::Neg,
            Family::FullHneg1,
            None,
            Mat2::identity(),
            tol,
        ),
        1 => {
            let point = ProjPoint::in_hneg1(&alg.generators()[0]);
            let (mut p, mut q) = (point.coords()[0], point.coords()[1]);
            let mut conjugator = Mat2::identity();
            if q.abs() > p.abs() {
                // The quarter rotation exchanges the diagonal coordinates.
                conjugator = Mat2::rotation(FRAC_PI_2);
                std::mem::swap(&mut p, &mut q);
            }
            if p.abs() <= tol.rank {
                return Err(Error::ZeroAlgebra);
            }
            let beta = (q / p).clamp(-1.0, 1.0);
            finish(
                alg,
                EtaType::Neg,
                Family::DiagBeta,
                Some(beta),
                conjugator,
                tol,
            )
        }
        d => Err(Error::BadDimension {
            expected: "1..=2",
            got: d,
        }),
    }
}

/// Dispatches to the per-eta normalizer.
pub fn normalize(alg: &Subalgebra, eta: EtaType, tol: &Tolerances) -> Result<NormalForm> {
    match eta {
        EtaType::Pos => normalize_in_h1(alg, tol),
        EtaType::Null => normalize_in_h0(alg, tol),
        EtaType::Neg => normalize_in_hneg1(alg, tol),
    }
}
