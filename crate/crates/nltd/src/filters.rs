//! Collaborative filters: the three interchangeable transform-domain
//! denoisers applied to a group of similar patches.
//!
//! Each filter transforms the `ps x ps x 3 x K` group into an orthonormal
//! (or unitary-up-to-scale) coefficient domain, hard-thresholds the
//! coefficients, and inverts the transforms. Thresholds follow the universal
//! rule `tau = lambda * sigma_c * sqrt(2 ln n)` where `sigma_c` is the noise
//! std in the transformed channel and `n` the coefficient count feeding the
//! threshold.

use crate::color;
use crate::config::DenoiseConfig;
use crate::dct::dct_matrix;
use crate::error::Result;
use crate::hosvd::{hard_threshold, hosvd_factors, tucker_compose, tucker_core};
use crate::tensor::{ComplexTensor, Matrix, Tensor};
use num_complex::Complex64;

/// Universal hard-threshold rule for one coefficient set.
#[derive(Debug, Clone, Copy)]
pub struct ThresholdRule {
    /// Threshold multiplier (config `lambda`).
    pub lambda: f64,
    /// Noise std in the original image domain.
    pub sigma: f64,
    /// Coefficient count `n`.
    pub count: usize,
    /// Per-channel noise scaling from non-orthonormal color transforms.
    pub channel_scale: f64,
}

impl ThresholdRule {
    /// `tau = lambda * sigma * channel_scale * sqrt(2 ln n)`.
    pub fn tau(&self) -> f64 {
        self.lambda * self.sigma * self.channel_scale * (2.0 * (self.count as f64).ln()).sqrt()
    }
}

/// Orthogonal mode transforms of the fourth-order decomposition.
#[derive(Debug, Clone)]
pub struct TransformSet {
    pub u_row: Matrix,
    pub u_col: Matrix,
    pub u_color: Matrix,
    pub u_group: Matrix,
}

impl TransformSet {
    /// Learn all four factors from the group by SVD of each unfolding.
    pub fn learn(group: &Tensor) -> Result<Self> {
        let f = hosvd_factors(group, &[0, 1, 2, 3])?;
        let mut it = f.into_iter();
        Ok(Self {
            u_row: it.next().unwrap(),
            u_col: it.next().unwrap(),
            u_color: it.next().unwrap(),
            u_group: it.next().unwrap(),
        })
    }

    pub fn all_orthonormal(&self, tol: f64) -> bool {
        self.u_row.is_orthonormal(tol)
            && self.u_col.is_orthonormal(tol)
            && self.u_color.is_orthonormal(tol)
            && self.u_group.is_orthonormal(tol)
    }
}

fn group_dims(group: &Tensor) -> (usize, usize) {
    let s = group.shape();
    debug_assert_eq!(s.len(), 4);
    debug_assert_eq!(s[2], 3);
    (s[0], s[3])
}

/// Learned 4D HOSVD filter: train all four mode transforms on the group,
/// threshold the core, invert.
pub fn filter_hosvd4d(group: &Tensor, cfg: &DenoiseConfig) -> Result<(Tensor, usize)> {
    let (ps, k) = group_dims(group);
    if ps == 1 && k == 1 {
        // Nothing to decorrelate; pass the group through.
        let kept = group.data().iter().filter(|&&x| x != 0.0).count();
        return Ok((group.clone(), kept));
    }
    let modes = [0, 1, 2, 3];
    let ts = TransformSet::learn(group)?;
    let factors = [ts.u_row, ts.u_col, ts.u_color, ts.u_group];
    let core = tucker_core(group, &factors, &modes)?;
    let rule = ThresholdRule {
        lambda: cfg.lambda,
        sigma: cfg.sigma,
        count: group.len(),
        channel_scale: 1.0,
    };
    let (core, retained) = hard_threshold(&core, rule.tau());
    let out = tucker_compose(&core, &factors, &modes)?;
    Ok((out, retained))
}

/// Copy Fourier channel `c` of a `ps x ps x 3 x K` complex tensor into a
/// `ps x ps x K` channel tensor.
fn extract_channel(hat: &ComplexTensor, c: usize) -> ComplexTensor {
    let s = hat.shape();
    let (ps0, ps1, k) = (s[0], s[1], s[3]);
    let plane = ps0 * ps1;
    let mut out = Tensor::zeros(&[ps0, ps1, k]);
    let src = hat.data();
    let dst = out.data_mut();
    for ki in 0..k {
        let s0 = ki * 3 * plane + c * plane;
        dst[ki * plane..(ki + 1) * plane].copy_from_slice(&src[s0..s0 + plane]);
    }
    out
}

/// Write a `ps x ps x K` channel tensor into channel `c` of the 4th-order
/// complex tensor.
fn insert_channel(hat: &mut ComplexTensor, c: usize, chan: &ComplexTensor) {
    let s = hat.shape();
    let (ps0, ps1, k) = (s[0], s[1], s[3]);
    let plane = ps0 * ps1;
    let src = chan.data();
    let dst = hat.data_mut();
    for ki in 0..k {
        let d0 = ki * 3 * plane + c * plane;
        dst[d0..d0 + plane].copy_from_slice(&src[ki * plane..(ki + 1) * plane]);
    }
}

/// Filter one Fourier channel: per-channel HOSVD on the patch modes, shared
/// (real) group transform, magnitude thresholding.
fn filter_fourier_channel(
    chan: &ComplexTensor,
    u_group: &Matrix,
    tau: f64,
) -> Result<(ComplexTensor, usize)> {
    let patch_modes = [0, 1];
    let f = hosvd_factors(chan, &patch_modes)?;
    let core = tucker_core(chan, &f, &patch_modes)?;
    let core = core.mode_product_real(&u_group.transpose(), 2)?;
    let (core, retained) = hard_threshold(&core, tau);
    let back = core.mode_product_real(u_group, 2)?;
    let out = tucker_compose(&back, &f, &patch_modes)?;
    Ok((out, retained))
}

/// MS-TSVD filter: diagonalize the circulant R/G/B coupling with the 3-point
/// Fourier transform, learn the group transform from luminance only, run a
/// per-channel HOSVD on Fourier channels 0 and 1, and reconstruct channel 2
/// by conjugation.
pub fn filter_mstsvd(group: &Tensor, cfg: &DenoiseConfig) -> Result<(Tensor, usize)> {
    let (ps, k) = group_dims(group);
    let hat = color::dft3_forward(group, 2)?;

    // Group transform from the luminance channel. Channel 0 of the Fourier
    // tensor is 3x the luminance, so the learned subspace is identical.
    let lum = color::luminance(group, 2)?;
    let u_group = hosvd_factors(&lum, &[2])?.pop().unwrap();

    // Per-channel noise std: every row of the Fourier matrix has norm
    // sqrt(3), so white noise of std sigma becomes std sigma*sqrt(3) in each
    // Fourier channel.
    let rule = ThresholdRule {
        lambda: cfg.lambda,
        sigma: cfg.sigma,
        count: ps * ps * k,
        channel_scale: 3.0f64.sqrt(),
    };
    let tau = rule.tau();

    let ch0 = extract_channel(&hat, 0);
    let ch1 = extract_channel(&hat, 1);
    let (f0, n0) = filter_fourier_channel(&ch0, &u_group, tau)?;
    let (f1, n1) = filter_fourier_channel(&ch1, &u_group, tau)?;

    let mut out_hat: ComplexTensor = Tensor::zeros(&[ps, ps, 3, k]);
    insert_channel(&mut out_hat, 0, &f0);
    insert_channel(&mut out_hat, 1, &f1);
    let f2 = f1.conjugate();
    insert_channel(&mut out_hat, 2, &f2);

    let out = color::dft3_inverse(&out_hat, 2)?;
    // Channel 2 mirrors channel 1, so its retained count does too.
    Ok((out, n0 + 2 * n1))
}

/// Precomputed fixed transforms for the opponent-color DCT filter.
#[derive(Debug, Clone)]
pub struct CdctTransforms {
    d_patch: Matrix,
    d_group: Matrix,
}

impl CdctTransforms {
    pub fn new(ps: usize, k: usize) -> Self {
        Self {
            d_patch: dct_matrix(ps),
            d_group: dct_matrix(k),
        }
    }

    fn matches(&self, ps: usize, k: usize) -> bool {
        self.d_patch.rows() == ps && self.d_group.rows() == k
    }
}

/// Fixed-transform filter: opponent color + DCT-II along rows, columns and
/// the group mode, with per-channel thresholds scaled by the opponent row
/// norms.
pub fn filter_cdct(group: &Tensor, cfg: &DenoiseConfig) -> Result<(Tensor, usize)> {
    let (ps, k) = group_dims(group);
    let t = CdctTransforms::new(ps, k);
    filter_cdct_with(group, cfg, &t)
}

/// [`filter_cdct`] with caller-supplied transforms (the pipeline caches them
/// across groups).
pub fn filter_cdct_with(
    group: &Tensor,
    cfg: &DenoiseConfig,
    transforms: &CdctTransforms,
) -> Result<(Tensor, usize)> {
    let (ps, k) = group_dims(group);
    let local;
    let t = if transforms.matches(ps, k) {
        transforms
    } else {
        local = CdctTransforms::new(ps, k);
        &local
    };

    let opp = color::opponent_forward(group, 2)?;
    let core = opp
        .mode_product(&t.d_patch, 0)?
        .mode_product(&t.d_patch, 1)?
        .mode_product(&t.d_group, 3)?;

    // Per-channel thresholds: the opponent transform is not orthonormal, so
    // white noise lands in channel c with std sigma * row_norm(c).
    let row_norms = color::opponent_row_norms();
    let n = group.len();
    let taus: Vec<f64> = row_norms
        .iter()
        .map(|&r| {
            ThresholdRule {
                lambda: cfg.lambda,
                sigma: cfg.sigma,
                count: n,
                channel_scale: r,
            }
            .tau()
        })
        .collect();

    let mut thresholded = core;
    let mut retained = 0usize;
    {
        let plane = ps * ps;
        let data = thresholded.data_mut();
        for ki in 0..k {
            for c in 0..3 {
                let tau = taus[c];
                let s0 = ki * 3 * plane + c * plane;
                for x in &mut data[s0..s0 + plane] {
                    if x.abs() <= tau {
                        *x = 0.0;
                    } else {
                        retained += 1;
                    }
                }
            }
        }
    }

    let back = thresholded
        .mode_product(&t.d_patch.transpose(), 0)?
        .mode_product(&t.d_patch.transpose(), 1)?
        .mode_product(&t.d_group.transpose(), 3)?;
    let out = color::opponent_inverse(&back, 2)?;
    Ok((out, retained))
}

/// A filter instantiated for a run, carrying any precomputed transforms.
#[derive(Debug, Clone)]
pub enum GroupFilter {
    Hosvd4d,
    MsTsvd,
    Cdct(CdctTransforms),
}

impl GroupFilter {
    pub fn new(cfg: &DenoiseConfig) -> Self {
        match cfg.method {
            crate::config::Method::Hosvd4d => GroupFilter::Hosvd4d,
            crate::config::Method::MsTsvd => GroupFilter::MsTsvd,
            crate::config::Method::Cdct => {
                GroupFilter::Cdct(CdctTransforms::new(cfg.patch_size, cfg.group_size))
            }
        }
    }

    pub fn apply(&self, group: &Tensor, cfg: &DenoiseConfig) -> Result<(Tensor, usize)> {
        match self {
            GroupFilter::Hosvd4d => filter_hosvd4d(group, cfg),
            GroupFilter::MsTsvd => filter_mstsvd(group, cfg),
            GroupFilter::Cdct(t) => filter_cdct_with(group, cfg, t),
        }
    }
}
