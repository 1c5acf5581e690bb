//! Grouping and aggregation: reference-patch scheduling, block matching on
//! the luminance plane, stacking matched patches into 4th-order groups, and
//! weighted write-back averaging.

use crate::error::{Error, Result};
use crate::image::{Image, Plane};
use crate::tensor::Tensor;

/// Reference positions along one axis: `0, step, 2*step, ...` clamped so the
/// final position is exactly `len - ps` (always included). Strides wider
/// than the patch would leave uncovered pixels, so the effective stride is
/// capped at `ps`; every pixel is then covered by at least one reference
/// patch.
pub fn reference_positions_1d(len: usize, ps: usize, step: usize) -> Result<Vec<usize>> {
    if len < ps {
        return Err(Error::ImageTooSmall {
            height: len,
            width: len,
            patch: ps,
        });
    }
    assert!(step >= 1, "step must be >= 1");
    let step = step.min(ps);
    let last = len - ps;
    let mut out = Vec::with_capacity(last / step + 2);
    let mut p = 0;
    loop {
        if p >= last {
            out.push(last);
            break;
        }
        out.push(p);
        p += step;
    }
    Ok(out)
}

/// Reference top-left coordinates over the whole image, row-major.
pub fn reference_positions(
    height: usize,
    width: usize,
    ps: usize,
    step: usize,
) -> Result<Vec<(usize, usize)>> {
    if height < ps || width < ps {
        return Err(Error::ImageTooSmall {
            height,
            width,
            patch: ps,
        });
    }
    let rows = reference_positions_1d(height, ps, step)?;
    let cols = reference_positions_1d(width, ps, step)?;
    let mut out = Vec::with_capacity(rows.len() * cols.len());
    for &r in &rows {
        for &c in &cols {
            out.push((r, c));
        }
    }
    Ok(out)
}

/// Result of block matching for one reference patch.
#[derive(Debug, Clone)]
pub struct BlockMatch {
    /// Matched top-left coordinates; index 0 is always the reference itself.
    pub coords: Vec<(usize, usize)>,
    /// Mean-squared luminance distances (SSD / ps^2), ascending; index 0 is 0.
    pub distances: Vec<f64>,
    /// True when the (clipped) window held fewer than the requested K
    /// candidates and the group is smaller than configured.
    pub undersized: bool,
}

/// Rows/cols spanned by the search window of a reference at `pos`: all patch
/// top-left positions such that the patch lies inside the `sr`-pixel window
/// centered on the reference patch, clipped to the image.
pub fn window_range(pos: usize, len: usize, ps: usize, sr: usize) -> (usize, usize) {
    let slack = sr.saturating_sub(ps);
    let lo = pos.saturating_sub(slack / 2);
    let hi = (pos + (slack - slack / 2)).min(len - ps);
    (lo, hi)
}

/// Find the `k` nearest patches to the reference under mean-squared
/// luminance distance, scanning the search window in row-major order.
/// The reference is always first at distance zero; ties are broken by scan
/// order.
pub fn match_block(
    lum: &Plane,
    reference: (usize, usize),
    ps: usize,
    sr: usize,
    k: usize,
) -> BlockMatch {
    let (h, w) = (lum.height(), lum.width());
    debug_assert!(reference.0 + ps <= h && reference.1 + ps <= w);
    let (r0, r1) = window_range(reference.0, h, ps, sr);
    let (c0, c1) = window_range(reference.1, w, ps, sr);

    let norm = 1.0 / (ps * ps) as f64;
    let mut candidates: Vec<(f64, u32, (usize, usize))> = Vec::new();
    let mut scan: u32 = 0;
    for r in r0..=r1 {
        for c in c0..=c1 {
            scan += 1;
            if (r, c) == reference {
                continue;
            }
            let mut ssd = 0.0;
            for i in 0..ps {
                let a = &lum.row(reference.0 + i)[reference.1..reference.1 + ps];
                let b = &lum.row(r + i)[c..c + ps];
                for (x, y) in a.iter().zip(b) {
                    let d = x - y;
                    ssd += d * d;
                }
            }
            candidates.push((ssd * norm, scan, (r, c)));
        }
    }

    let want = k.saturating_sub(1).min(candidates.len());
    if want > 0 && want < candidates.len() {
        candidates.select_nth_unstable_by(want - 1, |a, b| {
            a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1))
        });
        candidates.truncate(want);
    }
    candidates.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));

    let mut coords = Vec::with_capacity(want + 1);
    let mut distances = Vec::with_capacity(want + 1);
    coords.push(reference);
    distances.push(0.0);
    for (d, _, pos) in candidates {
        coords.push(pos);
        distances.push(d);
    }
    let undersized = coords.len() < k;
    BlockMatch {
        coords,
        distances,
        undersized,
    }
}

/// Stack the patches at `coords` into a 4th-order `ps x ps x 3 x K` tensor;
/// patch `k` occupies slice `k` of the last mode.
pub fn assemble_group(image: &Image, coords: &[(usize, usize)], ps: usize) -> Result<Tensor> {
    let (h, w) = (image.height(), image.width());
    for &(r, c) in coords {
        if r + ps > h || c + ps > w {
            return Err(Error::PatchOutOfBounds {
                row: r,
                col: c,
                patch: ps,
                height: h,
                width: w,
            });
        }
    }
    let k = coords.len();
    let mut t = Tensor::zeros(&[ps, ps, 3, k]);
    let data = t.data_mut();
    let patch_len = ps * ps * 3;
    for (ki, &(r, c)) in coords.iter().enumerate() {
        let dst = &mut data[ki * patch_len..(ki + 1) * patch_len];
        for i in 0..ps {
            let px0 = ((r + i) * w + c) * 3;
            let row = &image.data()[px0..px0 + ps * 3];
            for j in 0..ps {
                dst[i + j * ps] = row[j * 3];
                dst[i + j * ps + ps * ps] = row[j * 3 + 1];
                dst[i + j * ps + 2 * ps * ps] = row[j * 3 + 2];
            }
        }
    }
    Ok(t)
}

/// Extract patch `k` of a group back out as `ps*ps*3` samples in group
/// layout (used by tests; aggregation reads the group tensor directly).
pub fn group_patch(group: &Tensor, k: usize) -> &[f64] {
    let s = group.shape();
    let patch_len = s[0] * s[1] * s[2];
    &group.data()[k * patch_len..(k + 1) * patch_len]
}

/// Running weighted sums for Step 3 aggregation: a numerator image and a
/// per-pixel weight plane.
#[derive(Debug, Clone)]
pub struct AggregationBuffer {
    height: usize,
    width: usize,
    numerator: Vec<f64>,
    weight: Vec<f64>,
}

impl AggregationBuffer {
    pub fn new(height: usize, width: usize) -> Self {
        Self {
            height,
            width,
            numerator: vec![0.0; height * width * 3],
            weight: vec![0.0; height * width],
        }
    }

    /// Accumulate a filtered group: adds `weight * patch` under every patch
    /// footprint and `weight` to the covered weight entries.
    pub fn add_group(&mut self, group: &Tensor, coords: &[(usize, usize)], weight: f64) {
        let s = group.shape();
        let (ps, k) = (s[0], s[3]);
        debug_assert_eq!(s[1], ps);
        debug_assert_eq!(s[2], 3);
        debug_assert_eq!(coords.len(), k);
        let patch_len = ps * ps * 3;
        let data = group.data();
        for (ki, &(r, c)) in coords.iter().enumerate() {
            let src = &data[ki * patch_len..(ki + 1) * patch_len];
            for i in 0..ps {
                let y = r + i;
                let num_row = &mut self.numerator[(y * self.width + c) * 3..];
                for j in 0..ps {
                    num_row[j * 3] += weight * src[i + j * ps];
                    num_row[j * 3 + 1] += weight * src[i + j * ps + ps * ps];
                    num_row[j * 3 + 2] += weight * src[i + j * ps + 2 * ps * ps];
                }
                let w_row = &mut self.weight[y * self.width + c..y * self.width + c + ps];
                for wv in w_row {
                    *wv += weight;
                }
            }
        }
    }

    /// Add a horizontal band of partial sums starting at image row `row0`.
    /// `numerator` holds `band_h * width * 3` values, `weight` holds
    /// `band_h * width`.
    pub(crate) fn add_band(&mut self, row0: usize, band_h: usize, numerator: &[f64], weight: &[f64]) {
        debug_assert!(row0 + band_h <= self.height);
        debug_assert_eq!(numerator.len(), band_h * self.width * 3);
        debug_assert_eq!(weight.len(), band_h * self.width);
        let n0 = row0 * self.width * 3;
        for (a, b) in self.numerator[n0..n0 + numerator.len()]
            .iter_mut()
            .zip(numerator)
        {
            *a += b;
        }
        let w0 = row0 * self.width;
        for (a, b) in self.weight[w0..w0 + weight.len()].iter_mut().zip(weight) {
            *a += b;
        }
    }

    /// Merge another buffer (elementwise add). Both must match in size.
    pub fn merge(&mut self, other: &AggregationBuffer) {
        debug_assert_eq!(self.height, other.height);
        debug_assert_eq!(self.width, other.width);
        for (a, b) in self.numerator.iter_mut().zip(&other.numerator) {
            *a += b;
        }
        for (a, b) in self.weight.iter_mut().zip(&other.weight) {
            *a += b;
        }
    }

    /// Per-pixel weighted average. Errors if any pixel was never written,
    /// which would mean the reference grid failed to cover the image.
    pub fn finalize(self) -> Result<Image> {
        for (i, &w) in self.weight.iter().enumerate() {
            if w <= 0.0 {
                return Err(Error::ZeroWeight {
                    row: i / self.width,
                    col: i % self.width,
                });
            }
        }
        let mut data = self.numerator;
        for (px, &w) in data.chunks_exact_mut(3).zip(&self.weight) {
            let inv = 1.0 / w;
            px[0] *= inv;
            px[1] *= inv;
            px[2] *= inv;
        }
        Image::from_data(self.height, self.width, data)
    }
}
