//! Numerical tolerances used by every rank, sign and residual decision.

/// Thresholds for the floating-point decisions made throughout the crate.
///
/// All classification decisions are sign or rank decisions guarded by these
/// margins; the defaults are loose enough for conjugators with condition
/// number up to ~1e3 and tight enough to separate the catalog families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Rank threshold for singular values, scaled by the largest singular value.
    pub rank: f64,
    /// Absolute/relative residual bound for span membership and recomposition checks.
    pub residual: f64,
    /// Determinant magnitude below which a matrix is treated as singular.
    pub det_floor: f64,
    /// Tolerance for comparing recovered continuous parameters.
    pub param_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank: 1e-9,
            residual: 1e-8,
            det_floor: 1e-12,
            param_tol: 1e-6,
        }
    }
}

impl Tolerances {
    /// Rank cutoff for a set of vectors whose largest singular value is `s_max`.
    pub fn rank_cutoff(&self, s_max: f64) -> f64 {
        self.rank * s_max.max(1.0)
    }

    pub fn validate(&self) -> bool {
        self.rank > 0.0 && self.residual > 0.0 && self.det_floor > 0.0 && self.param_tol > 0.0
    }
}
