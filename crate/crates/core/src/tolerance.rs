//! Numerical tolerances shared by every check in the crate.

/// Entrywise equality of floating identities (Y symmetry, ΩYΩYΩ = zY, TSTST = S).
pub const IDENTITY: f64 = 1e-9;
/// Distance to the nearest integer accepted when rounding a float to an exact count.
pub const ROUNDING: f64 = 1e-6;
/// Monodromy test `|Y_{νρ} − d_ν d_ρ|` for degenerate and permutant labels.
pub const DEGENERACY: f64 = 1e-6;
/// Unitarity of S and commutation of Z with S and T.
pub const MATRIX: f64 = 1e-8;
/// Relative tolerance of global-index certificates.
pub const CERTIFICATE: f64 = 1e-8;
/// Relative residual targeted by Perron-Frobenius power iteration.
pub const PERRON_RESIDUAL: f64 = 1e-12;

/// Run-time overridable subset of the tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub degeneracy: f64,
    pub certificate: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            degeneracy: DEGENERACY,
            certificate: CERTIFICATE,
        }
    }
}

/// Rounds `x` to an integer if it lies within [`ROUNDING`] of one.
pub fn round_exact(x: f64) -> Option<i64> {
    let r = x.round();
    ((x - r).abs() < ROUNDING).then_some(r as i64)
}

/// Relative comparison with an absolute floor of one.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
