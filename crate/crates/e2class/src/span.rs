//! Subspaces of Sym(2,R) and subalgebras of gl(2,R) as reduced orthonormal
//! generator lists, plus the projector algebra used for span comparisons.
//!
//! Sym(2,R) carries the half-trace inner product, which `phi_inv` turns into
//! the Euclidean product of R^3; gl(2,R) carries the entrywise product of R^4.
//! Working in those coordinates makes every span question an ordinary
//! orthogonal-projector question.

use crate::error::{Error, Result};
use crate::geom::{phi, phi_inv, Sym2, Vec3};
use crate::mat::Mat2;
use crate::tol::Tolerances;

/// Orthonormal basis of the row span by modified Gram-Schmidt with
/// re-orthogonalization; directions whose residual singular value falls
/// below `tol.rank_cutoff` of the largest generator are dropped.
pub fn reduce_rows(rows: &[Vec<f64>], tol: &Tolerances) -> Vec<Vec<f64>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let s_max = rows
        .iter()
        .map(|r| r.iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0_f64, f64::max);
    let cutoff = tol.rank_cutoff(s_max);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for row in rows {
        let mut v = row.clone();
        // Two projection passes keep orthogonality at machine precision.
        for _ in 0..2 {
            for b in &basis {
                let d: f64 = b.iter().zip(&v).map(|(a, w)| a * w).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= d * bi;
                }
            }
        }
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm <= cutoff {
            continue;
        }
        for x in v.iter_mut() {
            *x /= norm;
        }
        let lead = v.iter().find(|x| x.abs() > 1e-12).copied().unwrap_or(1.0);
        if lead < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
        basis.push(v);
    }
    basis
}

/// Frobenius distance between the orthogonal projectors of two spans.
pub fn projector_distance(a: &[Vec<f64>], b: &[Vec<f64>], n: usize) -> f64 {
    let pa = projector(a, n);
    let pb = projector(b, n);
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            let d = pa[i][j] - pb[i][j];
            sum += d * d;
        }
    }
    sum.sqrt()
}

pub fn projector(basis: &[Vec<f64>], n: usize) -> Vec<Vec<f64>> {
    let mut p = vec![vec![0.0; n]; n];
    for v in basis {
        for i in 0..n {
            for j in 0..n {
                p[i][j] += v[i] * v[j];
            }
        }
    }
    p
}

/// Relative distance of `w` from the span: ||w - P w|| / ||w||.
pub fn out_of_span(basis: &[Vec<f64>], w: &[f64]) -> f64 {
    let norm: f64 = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return 0.0;
    }
    let mut res: Vec<f64> = w.to_vec();
    for v in basis {
        let d: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
        for (r, vi) in res.iter_mut().zip(v) {
            *r -= d * vi;
        }
    }
    res.iter().map(|v| v * v).sum::<f64>().sqrt() / norm
}

pub fn sym_coords(sigma: &Sym2) -> Vec<f64> {
    let v = phi_inv(sigma);
    vec![v.x, v.y, v.t]
}

pub fn sym_from_coords(c: &[f64]) -> Sym2 {
    phi(&Vec3::new(c[0], c[1], c[2]))
}

pub fn mat_coords(m: &Mat2) -> Vec<f64> {
    vec![m.m[0][0], m.m[0][1], m.m[1][0], m.m[1][1]]
}

pub fn mat_from_coords(c: &[f64]) -> Mat2 {
    Mat2::new(c[0], c[1], c[2], c[3])
}

/// A linear subspace of Sym(2,R), stored as an orthonormal generator list.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    generators: Vec<Sym2>,
}

impl Subspace {
    pub fn new(gens: &[Sym2], tol: &Tolerances) -> Result<Self> {
        let rows: Vec<Vec<f64>> = gens.iter().map(sym_coords).collect();
        let basis = reduce_rows(&rows, tol);
        if basis.is_empty() {
            return Err(Error::ZeroSubspace);
        }
        Ok(Self {
            generators: basis.iter().map(|c| sym_from_coords(c)).collect(),
        })
    }

    pub fn line(sigma: &Sym2, tol: &Tolerances) -> Result<Self> {
        Self::new(std::slice::from_ref(sigma), tol)
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Sym2] {
        &self.generators
    }

    pub fn coords(&self) -> Vec<Vec<f64>> {
        self.generators.iter().map(sym_coords).collect()
    }

    pub fn contains(&self, sigma: &Sym2, tol: &Tolerances) -> bool {
        out_of_span(&self.coords(), &sym_coords(sigma)) <= tol.residual
    }

    pub fn distance(&self, other: &Subspace) -> f64 {
        projector_distance(&self.coords(), &other.coords(), 3)
    }

    /// Orthogonal complement with respect to the half-trace inner product.
    /// Defined for lines and planes; the complement swaps the two.
    pub fn ortho_complement(&self, tol: &Tolerances) -> Result<Subspace> {
        if self.dim() == 0 || self.dim() >= 3 {
            return Err(Error::BadDimension {
                expected: "1..=2",
                got: self.dim(),
            });
        }
        let basis = self.coords();
        let mut complement = Vec::new();
        for axis in 0..3 {
            let mut e = vec![0.0; 3];
            e[axis] = 1.0;
            for v in &basis {
                let d = v[axis];
                for (ei, vi) in e.iter_mut().zip(v) {
                    *ei -= d * vi;
                }
            }
            complement.push(e);
        }
        let reduced = reduce_rows(&complement, tol);
        if reduced.len() != 3 - self.dim() {
            return Err(Error::IllConditioned {
                detail: format!(
                    "complement of a dim-{} span produced {} directions",
                    self.dim(),
                    reduced.len()
                ),
            });
        }
        Ok(Subspace {
            generators: reduced.iter().map(|c| sym_from_coords(c)).collect(),
        })
    }

    /// Applies the dagger action generator-wise; spans map to spans.
    pub fn apply_dagger(&self, h: &Mat2, tol: &Tolerances) -> Result<Subspace> {
        let mut gens = Vec::with_capacity(self.dim());
        for g in &self.generators {
            gens.push(crate::geom::dagger(h, g, tol.det_floor)?);
        }
        Subspace::new(&gens, tol)
    }
}

/// A linear subspace of gl(2,R), stored as an orthonormal generator list.
/// Bracket closure is checked by `subalgebra::validate_subalgebra`, which is
/// the only public constructor that certifies the Lie property.
#[derive(Debug, Clone, PartialEq)]
pub struct Subalgebra {
    generators: Vec<Mat2>,
}

impl Subalgebra {
    pub(crate) fn reduce(gens: &[Mat2], tol: &Tolerances) -> Result<Self> {
        let rows: Vec<Vec<f64>> = gens.iter().map(mat_coords).collect();
        let basis = reduce_rows(&rows, tol);
        if basis.is_empty() {
            return Err(Error::ZeroAlgebra);
        }
        Ok(Self {
            generators: basis.iter().map(|c| mat_from_coords(c)).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Mat2] {
        &self.generators
    }

    pub fn coords(&self) -> Vec<Vec<f64>> {
        self.generators.iter().map(mat_coords).collect()
    }

    pub fn contains(&self, m: &Mat2, tol: &Tolerances) -> bool {
        out_of_span(&self.coords(), &mat_coords(m)) <= tol.residual
    }

    pub fn distance(&self, other: &Subalgebra) -> f64 {
        projector_distance(&self.coords(), &other.coords(), 4)
    }

    pub fn transpose(&self, tol: &Tolerances) -> Result<Subalgebra> {
        let gens: Vec<Mat2> = self.generators.iter().map(Mat2::transpose).collect();
        Subalgebra::reduce(&gens, tol)
    }

    /// Conjugates generator-wise: A -> g A g^-1.
    pub fn conjugate(&self, g: &Mat2, tol: &Tolerances) -> Result<Subalgebra> {
        let inv = g.inverse(tol.det_floor)?;
        let gens: Vec<Mat2> = self.generators.iter().map(|a| *g * *a * inv).collect();
        Subalgebra::reduce(&gens, tol)
    }
}
