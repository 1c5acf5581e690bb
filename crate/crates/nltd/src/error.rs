//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A mode index outside `0..order` was requested.
    #[error("mode {mode} out of range for tensor of order {order}")]
    ModeOutOfRange { mode: usize, order: usize },

    /// Shapes or extents are inconsistent for the requested operation.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Input contains NaN or infinity where finite values are required.
    #[error("non-finite input: {0}")]
    NonFinite(String),

    /// An image (or resized image) is too small for the configured patch size.
    #[error("image {height}x{width} smaller than patch size {patch}")]
    ImageTooSmall {
        height: usize,
        width: usize,
        patch: usize,
    },

    /// A patch coordinate falls outside the image.
    #[error("patch at ({row},{col}) of size {patch} exceeds image {height}x{width}")]
    PatchOutOfBounds {
        row: usize,
        col: usize,
        patch: usize,
        height: usize,
        width: usize,
    },

    /// Aggregation finished with an uncovered pixel; the reference grid must
    /// cover every pixel, so this indicates a scheduling bug.
    #[error("aggregation coverage bug: zero weight at pixel ({row},{col})")]
    ZeroWeight { row: usize, col: usize },

    /// Conjugate symmetry of a Fourier-domain tensor was violated beyond
    /// tolerance; signals a defect in the complex filter chain.
    #[error("conjugate symmetry violation: residue {residue:.3e} exceeds {limit:.3e}")]
    SymmetryViolation { residue: f64, limit: f64 },

    /// Invalid configuration value.
    #[error("invalid config: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
