//! Pipeline configuration.

use crate::error::{Error, Result};

/// Collaborative filter selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Learned 4D HOSVD: all four mode transforms trained on the group.
    Hosvd4d,
    /// Fourier-diagonalized color coupling with per-channel HOSVD and a
    /// group transform learned from luminance.
    MsTsvd,
    /// Fixed opponent-color + DCT transforms.
    Cdct,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Hosvd4d => "hosvd4d",
            Method::MsTsvd => "mstsvd",
            Method::Cdct => "cdct",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hosvd4d" | "4dhosvd" => Ok(Method::Hosvd4d),
            "mstsvd" | "ms-tsvd" => Ok(Method::MsTsvd),
            "cdct" | "c-dct" => Ok(Method::Cdct),
            other => Err(Error::InvalidConfig(format!("unknown method '{other}'"))),
        }
    }
}

/// Per-patch aggregation weighting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Weighting {
    /// Every patch contributes with weight 1.
    #[default]
    Uniform,
    /// Weight `1 / (1 + retained coefficient count)` per group, favoring
    /// sparser (more confident) estimates.
    InverseRetained,
}

/// Inputs of the denoising pipeline: patch size, search window side, group
/// size, reference stride, noise level, threshold multiplier and filter
/// choice.
#[derive(Debug, Clone)]
pub struct DenoiseConfig {
    /// Patch side in pixels.
    pub patch_size: usize,
    /// Local search window side in pixels.
    pub search_window: usize,
    /// Number of similar patches stacked per group.
    pub group_size: usize,
    /// Pixels between adjacent reference patches.
    pub step: usize,
    /// Noise standard deviation on the 0..255 scale.
    pub sigma: f64,
    /// Hard-threshold multiplier.
    pub lambda: f64,
    pub method: Method,
    pub weighting: Weighting,
    /// Optional downscale factor in (0,1): denoise the downsized image and
    /// upscale the result back.
    pub resize: Option<f64>,
}

impl Default for DenoiseConfig {
    fn default() -> Self {
        Self {
            patch_size: 8,
            search_window: 39,
            group_size: 32,
            step: 4,
            sigma: 25.0,
            lambda: 1.0,
            method: Method::MsTsvd,
            weighting: Weighting::Uniform,
            resize: None,
        }
    }
}

impl DenoiseConfig {
    pub fn validate(&self) -> Result<()> {
        if self.patch_size < 2 {
            return Err(Error::InvalidConfig("patch size must be >= 2".into()));
        }
        if self.search_window < self.patch_size {
            return Err(Error::InvalidConfig(
                "search window must be >= patch size".into(),
            ));
        }
        if self.group_size < 1 {
            return Err(Error::InvalidConfig("group size must be >= 1".into()));
        }
        if self.step < 1 {
            return Err(Error::InvalidConfig("step must be >= 1".into()));
        }
        if !(self.sigma >= 0.0) {
            return Err(Error::InvalidConfig("sigma must be >= 0".into()));
        }
        if !(self.lambda > 0.0) {
            return Err(Error::InvalidConfig("lambda must be > 0".into()));
        }
        if let Some(s) = self.resize {
            if !(s > 0.0 && s < 1.0) {
                return Err(Error::InvalidConfig(
                    "resize factor must lie strictly between 0 and 1".into(),
                ));
            }
        }
        Ok(())
    }
}
