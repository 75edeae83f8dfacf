//! End-to-end classification: a group spec goes in, a table label, its
//! continuous parameters, an explicit conjugator and a recomputable
//! certificate come out.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::catalog::{self, CatalogEntry, LabelId};
use crate::error::{Error, Result};
use crate::geom::{dagger, expm2, Sym2};
use crate::mat::{sym_eigen, Mat2};
use crate::orbit::{canonicalize_line, canonicalize_plane};
use crate::span::{Subalgebra, Subspace};
use crate::subalgebra::{invariance_residual, normalize, stabilizer_algebra, validate_subalgebra};
use crate::tol::Tolerances;

/// A class-E group presented by generators: a nonzero subspace of symmetric
/// matrices and a Lie subalgebra of gl(2,R) that leaves it invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSpec {
    pub sigma: Subspace,
    pub h: Subalgebra,
}

impl GroupSpec {
    /// Validates shape, bracket closure and invariance.
    pub fn new(sigma_gens: &[Sym2], h_gens: &[Mat2], tol: &Tolerances) -> Result<Self> {
        let sigma = Subspace::new(sigma_gens, tol)?;
        let h = validate_subalgebra(h_gens, tol)?;
        let residual = invariance_residual(&sigma, &h, tol);
        if residual > tol.residual {
            return Err(Error::NotInvariant { residual });
        }
        Ok(Self { sigma, h })
    }

    /// The conjugated spec g . (sigma, h): dagger on the normal factor and
    /// ordinary conjugation on the algebra.
    pub fn conjugate(&self, g: &Mat2, tol: &Tolerances) -> Result<GroupSpec> {
        Ok(GroupSpec {
            sigma: self.sigma.apply_dagger(g, tol)?,
            h: self.h.conjugate(g, tol)?,
        })
    }

    /// The transpose-dual spec (sigma-perp, th), the twin produced by
    /// orthogonal complementation.
    pub fn transpose_dual(&self, tol: &Tolerances) -> Result<GroupSpec> {
        Ok(GroupSpec {
            sigma: self.sigma.ortho_complement(tol)?,
            h: self.h.transpose(tol)?,
        })
    }
}

/// A table entry with its continuous parameters filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalLabel {
    pub id: LabelId,
    pub dim_total: usize,
    pub params: BTreeMap<String, f64>,
}

impl CanonicalLabel {
    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.get(name).copied()
    }
}

/// The conjugator witnessing a classification, with the two span residuals
/// it achieves. `verify` recomputes both from scratch.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub conjugator: Mat2,
    pub residual_sigma: f64,
    pub residual_h: f64,
}

/// Conjugation-invariant data of a spec, the executable separation witness.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantVector {
    pub dim_sigma: usize,
    /// Inertia (n_plus, n_minus, n_zero) of the Lorentz form on phi^-1(sigma).
    pub eta_inertia: (usize, usize, usize),
    pub dim_h: usize,
    /// Dimension of the derived algebra [h, h].
    pub dim_derived: usize,
    /// Dimension of h intersected with the traceless matrices.
    pub dim_traceless: usize,
    pub label: LabelId,
    pub params: BTreeMap<String, f64>,
}

impl InvariantVector {
    /// Equality of the discrete part plus parameter agreement within `param_tol`.
    pub fn matches(&self, other: &InvariantVector, param_tol: f64) -> bool {
        if self.dim_sigma != other.dim_sigma
            || self.eta_inertia != other.eta_inertia
            || self.dim_h != other.dim_h
            || self.dim_derived != other.dim_derived
            || self.dim_traceless != other.dim_traceless
            || self.label != other.label
            || self.params.len() != other.params.len()
        {
            return false;
        }
        self.params.iter().all(|(k, v)| {
            other
                .params
                .get(k)
                .is_some_and(|w| (v - w).abs() <= param_tol * (1.0 + v.abs()))
        })
    }
}

fn params_map(entry: &CatalogEntry, param: Option<f64>) -> BTreeMap<String, f64> {
    let mut map = BTreeMap::new();
    if let (Some(spec), Some(v)) = (&entry.param, param) {
        map.insert(spec.name.to_string(), v);
    }
    map
}

/// Canonical target spans for a table entry at the given parameter value.
fn targets(
    entry: &CatalogEntry,
    param: Option<f64>,
    tol: &Tolerances,
) -> Result<(Subspace, Subalgebra)> {
    let sigma = Subspace::new(&entry.sigma_generators(), tol)?;
    let h = Subalgebra::reduce(&entry.h_generators(param)?, tol)?;
    Ok((sigma, h))
}

/// Classifies a spec: canonicalize sigma, push h into the stabilizer algebra,
/// normalize there (through the transpose for planes), and look the label up.
pub fn classify(spec: &GroupSpec, tol: &Tolerances) -> Result<(CanonicalLabel, Certificate)> {
    let dim_sigma = spec.sigma.dim();
    if dim_sigma == 3 {
        return Err(Error::DimensionOutOfScope { dim: 3 });
    }
    let inv = invariance_residual(&spec.sigma, &spec.h, tol);
    if inv > tol.residual {
        return Err(Error::NotInvariant { residual: inv });
    }

    let canon = if dim_sigma == 1 {
        canonicalize_line(&spec.sigma, tol)?
    } else {
        canonicalize_plane(&spec.sigma, tol)?
    };
    let eta = canon.eta_type;
    let g1 = canon.conjugator;

    let pushed = spec.h.conjugate(&g1, tol)?;
    let ambient = stabilizer_algebra(eta, dim_sigma == 2, tol);
    for (index, gen) in pushed.generators().iter().enumerate() {
        let residual = crate::span::out_of_span(&ambient.coords(), &crate::span::mat_coords(gen));
        if residual > tol.residual {
            return Err(Error::NotContained { index, residual });
        }
    }

    let working = if dim_sigma == 2 {
        pushed.transpose(tol)?
    } else {
        pushed.clone()
    };
    let nf = normalize(&working, eta, tol)?;
    let g2 = if dim_sigma == 2 {
        nf.conjugator.inverse(tol.det_floor)?.transpose()
    } else {
        nf.conjugator
    };
    let conjugator = g2 * g1;

    let entry = catalog::lookup(eta, dim_sigma, nf.family).ok_or(Error::UnrecognizedSubalgebra)?;
    let (target_sigma, target_h) = targets(entry, nf.param, tol)?;
    let residual_sigma = spec
        .sigma
        .apply_dagger(&conjugator, tol)?
        .distance(&target_sigma);
    let residual_h = spec.h.conjugate(&conjugator, tol)?.distance(&target_h);

    Ok((
        CanonicalLabel {
            id: entry.id,
            dim_total: entry.dim_total(),
            params: params_map(entry, nf.param),
        },
        Certificate {
            conjugator,
            residual_sigma,
            residual_h,
        },
    ))
}

/// Outcome of re-checking a certificate from scratch.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub pass: bool,
    pub label_known: bool,
    pub params_ok: bool,
    pub residual_sigma: f64,
    pub residual_h: f64,
    pub detail: String,
}

/// Recomputes both span residuals against the catalog entry named by the
/// label; stored residuals are never trusted.
pub fn verify(
    spec: &GroupSpec,
    label: &CanonicalLabel,
    cert: &Certificate,
    tol: &Tolerances,
) -> VerifyReport {
    let entry = match catalog::entry(label.id) {
        Ok(e) => e,
        Err(_) => {
            return VerifyReport {
                pass: false,
                label_known: false,
                params_ok: false,
                residual_sigma: f64::INFINITY,
                residual_h: f64::INFINITY,
                detail: format!("unknown label {}", label.id),
            }
        }
    };

    let param = match &entry.param {
        Some(spec_p) => match label.param(spec_p.name) {
            Some(v) if spec_p.contains(v) => Some(v),
            Some(v) => {
                return VerifyReport {
                    pass: false,
                    label_known: true,
                    params_ok: false,
                    residual_sigma: f64::INFINITY,
                    residual_h: f64::INFINITY,
                    detail: format!("{} = {v} is outside the range of {}", spec_p.name, entry.id),
                }
            }
            None => {
                return VerifyReport {
                    pass: false,
                    label_known: true,
                    params_ok: false,
                    residual_sigma: f64::INFINITY,
                    residual_h: f64::INFINITY,
                    detail: format!("label {} needs parameter {}", entry.id, spec_p.name),
                }
            }
        },
        None => {
            if !label.params.is_empty() {
                return VerifyReport {
                    pass: false,
                    label_known: true,
                    params_ok: false,
                    residual_sigma: f64::INFINITY,
                    residual_h: f64::INFINITY,
                    detail: format!("label {} takes no parameters", entry.id),
                };
            }
            None
        }
    };

    let (target_sigma, target_h) = match targets(entry, param, tol) {
        Ok(t) => t,
        Err(e) => {
            return VerifyReport {
                pass: false,
                label_known: true,
                params_ok: false,
                residual_sigma: f64::INFINITY,
                residual_h: f64::INFINITY,
                detail: e.to_string(),
            }
        }
    };

    let residual_sigma = match spec.sigma.apply_dagger(&cert.conjugator, tol) {
        Ok(s) => s.distance(&target_sigma),
        Err(_) => f64::INFINITY,
    };
    let residual_h = match spec.h.conjugate(&cert.conjugator, tol) {
        Ok(h) => h.distance(&target_h),
        Err(_) => f64::INFINITY,
    };
    let pass = residual_sigma < tol.residual && residual_h < tol.residual;
    VerifyReport {
        pass,
        label_known: true,
        params_ok: true,
        residual_sigma,
        residual_h,
        detail: if pass {
            "certificate checks out".to_string()
        } else {
            "span residuals exceed tolerance".to_string()
        },
    }
}

/// Conjugation-invariant summary of a spec. The discrete fields come straight
/// from the generators; family and parameters come from the classifier.
pub fn invariants(spec: &GroupSpec, tol: &Tolerances) -> Result<InvariantVector> {
    let (label, _) = classify(spec, tol)?;

    // Inertia of the Lorentz form on phi^-1(sigma): Gram matrix of the
    // orthonormal basis under (u, v) -> t_u t_v - x_u x_v - y_u y_v.
    let coords = spec.sigma.coords();
    let k = coords.len();
    let mut gram = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..k {
            gram[i][j] = coords[i][2] * coords[j][2]
                - coords[i][0] * coords[j][0]
                - coords[i][1] * coords[j][1];
        }
    }
    let (vals, _) = sym_eigen(&gram);
    let band = tol.rank * 10.0;
    let n_plus = vals.iter().filter(|v| **v > band).count();
    let n_minus = vals.iter().filter(|v| **v < -band).count();
    let n_zero = k - n_plus - n_minus;

    let basis = spec.h.generators();
    let mut brackets = Vec::new();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            brackets.push(crate::geom::bracket(&basis[i], &basis[j]));
        }
    }
    let dim_derived = match Subalgebra::reduce(&brackets, tol) {
        Ok(alg) => alg.dim(),
        Err(_) => 0,
    };

    let trace_norm: f64 = basis
        .iter()
        .map(|m| m.trace() * m.trace())
        .sum::<f64>()
        .sqrt();
    let dim_traceless = if trace_norm > tol.rank * 10.0 {
        spec.h.dim() - 1
    } else {
        spec.h.dim()
    };

    Ok(InvariantVector {
        dim_sigma: spec.sigma.dim(),
        eta_inertia: (n_plus, n_minus, n_zero),
        dim_h: spec.h.dim(),
        dim_derived,
        dim_traceless,
        label: label.id,
        params: label.params,
    })
}

/// The canonical representative spec of a label at its parameter values.
pub fn representative(label: &CanonicalLabel, tol: &Tolerances) -> Result<GroupSpec> {
    let entry = catalog::entry(label.id)?;
    let param = entry
        .param
        .as_ref()
        .map(|p| {
            label.param(p.name).ok_or_else(|| {
                Error::BadParams(format!("label {} needs parameter {}", entry.id, p.name))
            })
        })
        .transpose()?;
    let sigma_gens = entry.sigma_generators();
    let h_gens = entry.h_generators(param)?;
    GroupSpec::new(&sigma_gens, &h_gens, tol)
}

/// A label with parameters filled from the schema defaults.
pub fn label_with_defaults(entry: &CatalogEntry) -> CanonicalLabel {
    CanonicalLabel {
        id: entry.id,
        dim_total: entry.dim_total(),
        params: params_map(entry, entry.param.map(|p| p.default)),
    }
}

/// The semidirect product law (s, h)(s', h') = (s + dagger(h, s'), h h').
pub fn semidirect_product(
    a: &(Sym2, Mat2),
    b: &(Sym2, Mat2),
    tol: &Tolerances,
) -> Result<(Sym2, Mat2)> {
    let moved = dagger(&a.1, &b.0, tol.det_floor)?;
    Ok((a.0.add(&moved), a.1 * b.1))
}

/// Pseudo-random elements (sigma, exp(A)) of the group named by the label.
pub fn sample_group(
    label: &CanonicalLabel,
    n: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Vec<(Sym2, Mat2)>> {
    let spec = representative(label, tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut sigma = Sym2::new(0.0, 0.0, 0.0);
        for g in spec.sigma.generators() {
            sigma = sigma.add(&g.scale(rng.gen_range(-1.5..1.5)));
        }
        let mut a = Mat2::zero();
        for g in spec.h.generators() {
            a = a + g.scale(rng.gen_range(-1.5..1.5));
        }
        out.push((sigma, expm2(&a, 1.0)));
    }
    Ok(out)
}

/// Worst semidirect-law residual over products of consecutive samples: the
/// sigma part must stay in the span and the group part must keep sigma
/// invariant.
pub fn closure_residual(spec: &GroupSpec, samples: &[(Sym2, Mat2)], tol: &Tolerances) -> f64 {
    let span = spec.sigma.coords();
    let mut worst: f64 = 0.0;
    for pair in samples.windows(2) {
        let Ok(prod) = semidirect_product(&pair[0], &pair[1], tol) else {
            return f64::INFINITY;
        };
        worst = worst.max(crate::span::out_of_span(
            &span,
            &crate::span::sym_coords(&prod.0),
        ));
        for gen in spec.sigma.generators() {
            match dagger(&prod.1, gen, tol.det_floor) {
                Ok(moved) => {
                    worst = worst.max(crate::span::out_of_span(
                        &span,
                        &crate::span::sym_coords(&moved),
                    ));
                }
                Err(_) => return f64::INFINITY,
            }
        }
    }
    worst
}
