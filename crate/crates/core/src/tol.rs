//! Numerical tolerances shared across modules.

/// Unit-norm check for points of S⁶.
pub const UNIT: f64 = 1e-12;

/// Orthogonality of a tangent vector to its base point.
pub const TANGENCY: f64 = 1e-10;

/// Symmetry and harmonicity checks on cubic tensors, relative to `max(1, ‖h‖)`.
pub const CUBIC_CONSTRUCTION: f64 = 1e-12;

/// Smallest admissible singular value of a patch Jacobian, relative to its largest.
pub const RANK: f64 = 1e-8;

/// Lagrangian residual above which the fundamental cubic is refused.
pub const CUBIC_LAGRANGIAN_GATE: f64 = 1e-6;

/// Default first-derivative step for finite-difference jets.
pub const FD_STEP: f64 = 1e-5;

/// Step for second derivatives and for differencing first-derivative callbacks.
pub const FD_STEP_SECOND: f64 = 1e-3;

/// Step for differencing the induced metric when computing curvature.
pub const METRIC_STEP: f64 = 1e-2;

/// Allowed size of the Richardson correction for curvature, relative to `max(1, |R|)`.
pub const RICHARDSON: f64 = 1e-3;

/// Eigenvalue equality for stabilizer classification (after normalizing `Tr K = −1/2`).
pub const EIG_EQUAL: f64 = 1e-6;

/// Snapping threshold for `λ² = σ` boundary tests, relative to `σ`.
pub const BOUNDARY: f64 = 1e-6;

/// Cubic norm below which a cubic is treated as zero.
pub const ZERO_CUBIC: f64 = 1e-12;

/// Unitarity and cross-product identities of unitary frames.
pub const FRAME: f64 = 1e-8;
