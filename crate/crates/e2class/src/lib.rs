//! Classification of semidirect-product subgroups of the maximal parabolic
//! of Sp(2,R), up to conjugation by GL(2,R).
//!
//! A group in the class is a pair (sigma, h): a nonzero subspace of symmetric
//! 2x2 matrices and a linear Lie algebra leaving it invariant under the
//! dagger action h . s = th^-1 s h^-1. The crate carries the action over to
//! Lorentz 3-space, classifies the six orbits there, canonicalizes lines and
//! planes onto fixed representatives, reduces the algebra part to one of a
//! short list of normal forms, and returns the table label together with an
//! explicit conjugator certificate that `verify` re-checks from scratch.
//!
//! A randomized search oracle provides independent evidence for the
//! non-conjugacy of distinct table entries. Batchable work (search restarts,
//! bulk classification, selftest suites) runs on rayon when the default
//! `parallel` feature is enabled and falls back to sequential loops without it.

pub mod catalog;
pub mod classify;
pub mod error;
pub mod geom;
pub mod lorentz;
pub mod mat;
pub mod oracle;
pub mod orbit;
pub mod par;
pub mod samples;
pub mod selftest;
pub mod span;
pub mod subalgebra;
pub mod tol;

pub use catalog::{catalog, catalog_json, CatalogEntry, LabelId, ParamSpec};
pub use classify::{
    classify, invariants, label_with_defaults, representative, sample_group, semidirect_product,
    verify, CanonicalLabel, Certificate, GroupSpec, InvariantVector, VerifyReport,
};
pub use error::{Error, Result};
pub use geom::{
    bracket, dagger, dagger_derivative, eta, expm2, inner, langlands_factor, phi, phi_inv, Sym2,
    Vec3,
};
pub use lorentz::{
    is_orthochronous_scaled, iwasawa_sl2, lorentz_iwasawa, lorentz_of, IwasawaKind, IwasawaSL2,
};
pub use mat::{Mat2, Mat3};
pub use oracle::{
    group_distance, search_conjugator, search_conjugator_seq, SearchConfig, SearchOutcome,
};
pub use orbit::{
    canonicalize_line, canonicalize_plane, classify_vector, eta_type_of, stabilizer_membership,
    EtaType, LineCanon, OrbitClass,
};
pub use span::{Subalgebra, Subspace};
pub use subalgebra::{
    check_invariance, normalize_in_h0, normalize_in_h1, normalize_in_hneg1, stabilizer_algebra,
    validate_subalgebra, Family, NormalForm, ProjPoint,
};
pub use tol::Tolerances;

/// Classifies many specs, in parallel when the `parallel` feature is on.
pub fn classify_batch(
    specs: &[GroupSpec],
    tol: &Tolerances,
) -> Vec<Result<(CanonicalLabel, Certificate)>> {
    par::map_indices(specs.len(), |i| classify(&specs[i], tol))
}

/// Sequential counterpart of [`classify_batch`], the benchmark baseline.
pub fn classify_batch_seq(
    specs: &[GroupSpec],
    tol: &Tolerances,
) -> Vec<Result<(CanonicalLabel, Certificate)>> {
    par::map_indices_seq(specs.len(), |i| classify(&specs[i], tol))
}
