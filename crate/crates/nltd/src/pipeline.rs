//! The full denoising pipeline: grouping, collaborative filtering and
//! aggregation over a reference grid, plus the downsize-denoise-upsize
//! variant.
//!
//! Reference rows are processed in parallel. Each worker accumulates into a
//! private slab covering its search-window rows; slabs are merged into the
//! global buffer in grid-row order, so the floating-point accumulation order
//! (and therefore the output, bit for bit) does not depend on the worker
//! count.

use crate::config::{DenoiseConfig, Weighting};
use crate::error::Result;
use crate::filters::GroupFilter;
use crate::image::Image;
use crate::patch::{
    assemble_group, match_block, reference_positions_1d, window_range, AggregationBuffer,
};
use crate::resize::{resize_bicubic, scaled_extent};
use crate::tensor::Tensor;
use rayon::prelude::*;

/// Grid rows merged per parallel batch; bounds worker memory while keeping
/// the merge order fixed.
const ROW_BATCH: usize = 32;

/// Partial aggregation buffer covering a band of image rows.
struct Slab {
    row0: usize,
    height: usize,
    width: usize,
    numerator: Vec<f64>,
    weight: Vec<f64>,
}

impl Slab {
    fn new(row0: usize, height: usize, width: usize) -> Self {
        Self {
            row0,
            height,
            width,
            numerator: vec![0.0; height * width * 3],
            weight: vec![0.0; height * width],
        }
    }

    fn add_group(&mut self, group: &Tensor, coords: &[(usize, usize)], weight: f64) {
        let s = group.shape();
        let ps = s[0];
        let patch_len = ps * ps * 3;
        let data = group.data();
        for (ki, &(r, c)) in coords.iter().enumerate() {
            let src = &data[ki * patch_len..(ki + 1) * patch_len];
            for i in 0..ps {
                let y = r + i - self.row0;
                debug_assert!(y < self.height);
                let row0 = (y * self.width + c) * 3;
                let num_row = &mut self.numerator[row0..row0 + ps * 3];
                for j in 0..ps {
                    num_row[j * 3] += weight * src[i + j * ps];
                    num_row[j * 3 + 1] += weight * src[i + j * ps + ps * ps];
                    num_row[j * 3 + 2] += weight * src[i + j * ps + 2 * ps * ps];
                }
                for wv in &mut self.weight[y * self.width + c..y * self.width + c + ps] {
                    *wv += weight;
                }
            }
        }
    }
}

impl Slab {
    fn merge_into(&self, buf: &mut AggregationBuffer) {
        buf.add_band(self.row0, self.height, &self.numerator, &self.weight);
    }
}

/// Denoise an image with the configured filter. With `cfg.resize` set, the
/// downsize-denoise-upsize strategy is used instead.
pub fn denoise(image: &Image, cfg: &DenoiseConfig) -> Result<Image> {
    cfg.validate()?;
    if let Some(scale) = cfg.resize {
        return denoise_resized(image, scale, cfg);
    }
    denoise_flat(image, cfg)
}

fn denoise_flat(image: &Image, cfg: &DenoiseConfig) -> Result<Image> {
    let (h, w) = (image.height(), image.width());
    let ps = cfg.patch_size;
    if h < ps || w < ps {
        return Err(crate::error::Error::ImageTooSmall {
            height: h,
            width: w,
            patch: ps,
        });
    }
    let grid_rows = reference_positions_1d(h, ps, cfg.step)?;
    let grid_cols = reference_positions_1d(w, ps, cfg.step)?;
    let lum = image.luminance();
    let filter = GroupFilter::new(cfg);

    let mut buf = AggregationBuffer::new(h, w);
    for batch in grid_rows.chunks(ROW_BATCH) {
        let slabs: Vec<Result<Slab>> = batch
            .par_iter()
            .map(|&r| {
                // Every matched patch lies inside the reference's search
                // window, so the slab spans exactly the window rows.
                let (lo, hi) = window_range(r, h, ps, cfg.search_window);
                let mut slab = Slab::new(lo, hi + ps - lo, w);
                for &c in &grid_cols {
                    let m = match_block(&lum, (r, c), ps, cfg.search_window, cfg.group_size);
                    let group = assemble_group(image, &m.coords, ps)?;
                    let (filtered, retained) = filter.apply(&group, cfg)?;
                    let weight = match cfg.weighting {
                        Weighting::Uniform => 1.0,
                        Weighting::InverseRetained => 1.0 / (1.0 + retained as f64),
                    };
                    slab.add_group(&filtered, &m.coords, weight);
                }
                Ok(slab)
            })
            .collect();
        for slab in slabs {
            slab?.merge_into(&mut buf);
        }
    }
    buf.finalize()
}

/// Downsample by `scale` (bicubic), denoise, and upsample back to the
/// original extents.
pub fn denoise_resized(image: &Image, scale: f64, cfg: &DenoiseConfig) -> Result<Image> {
    if !(scale > 0.0 && scale < 1.0) {
        return Err(crate::error::Error::InvalidConfig(format!(
            "resize scale {scale} must lie strictly between 0 and 1"
        )));
    }
    let h2 = scaled_extent(image.height(), scale);
    let w2 = scaled_extent(image.width(), scale);
    if h2 < cfg.patch_size || w2 < cfg.patch_size {
        return Err(crate::error::Error::ImageTooSmall {
            height: h2,
            width: w2,
            patch: cfg.patch_size,
        });
    }
    let small = resize_bicubic(image, h2, w2);
    let flat_cfg = DenoiseConfig {
        resize: None,
        ..cfg.clone()
    };
    let denoised = denoise_flat(&small, &flat_cfg)?;
    Ok(resize_bicubic(&denoised, image.height(), image.width()))
}
