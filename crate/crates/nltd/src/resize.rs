//! Separable bicubic resampling with the Catmull-Rom kernel (a = -0.5),
//! edge-clamped. When downsampling, the kernel is widened by the inverse
//! scale (and the tap weights renormalized) so the result is antialiased;
//! upsampling uses the plain kernel.

use crate::image::Image;

/// Catmull-Rom cubic kernel, support 2.
fn catmull_rom(x: f64) -> f64 {
    let a = -0.5;
    let x = x.abs();
    if x <= 1.0 {
        ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0
    } else if x < 2.0 {
        a * (((x - 5.0) * x + 8.0) * x - 4.0)
    } else {
        0.0
    }
}

/// Tap indices and normalized weights for resampling one axis.
struct AxisTaps {
    /// Per output index: (first input index, weights).
    taps: Vec<(usize, Vec<f64>)>,
}

fn axis_taps(len_in: usize, len_out: usize) -> AxisTaps {
    let ratio = len_out as f64 / len_in as f64;
    let kernel_scale = ratio.min(1.0);
    let support = 2.0 / kernel_scale;
    let taps = (0..len_out)
        .map(|o| {
            let center = (o as f64 + 0.5) / ratio - 0.5;
            let first = (center - support).ceil() as isize;
            let last = (center + support).floor() as isize;
            let mut weights = Vec::with_capacity((last - first + 1) as usize);
            let mut sum = 0.0;
            for i in first..=last {
                let w = catmull_rom(kernel_scale * (center - i as f64));
                weights.push(w);
                sum += w;
            }
            for w in &mut weights {
                *w /= sum;
            }
            // Edge clamp: fold weights of out-of-range taps onto the border.
            let lo = first.max(0) as usize;
            let hi = (last.min(len_in as isize - 1)) as usize;
            let mut folded = vec![0.0; hi - lo + 1];
            for (k, w) in weights.iter().enumerate() {
                let idx = (first + k as isize).clamp(0, len_in as isize - 1) as usize;
                folded[idx - lo] += w;
            }
            (lo, folded)
        })
        .collect();
    AxisTaps { taps }
}

/// Resample an image to `out_h x out_w`.
pub fn resize_bicubic(img: &Image, out_h: usize, out_w: usize) -> Image {
    assert!(out_h >= 1 && out_w >= 1);
    let (h, w) = (img.height(), img.width());
    if out_h == h && out_w == w {
        return img.clone();
    }

    // Horizontal pass.
    let htaps = axis_taps(w, out_w);
    let mut mid = Image::zeros(h, out_w);
    for y in 0..h {
        for (x, (first, weights)) in htaps.taps.iter().enumerate() {
            let mut acc = [0.0f64; 3];
            for (k, &wt) in weights.iter().enumerate() {
                let px = img.pixel(y, first + k);
                acc[0] += wt * px[0];
                acc[1] += wt * px[1];
                acc[2] += wt * px[2];
            }
            for c in 0..3 {
                mid.set(y, x, c, acc[c]);
            }
        }
    }

    // Vertical pass.
    let vtaps = axis_taps(h, out_h);
    let mut out = Image::zeros(out_h, out_w);
    for (y, (first, weights)) in vtaps.taps.iter().enumerate() {
        for x in 0..out_w {
            let mut acc = [0.0f64; 3];
            for (k, &wt) in weights.iter().enumerate() {
                let px = mid.pixel(first + k, x);
                acc[0] += wt * px[0];
                acc[1] += wt * px[1];
                acc[2] += wt * px[2];
            }
            for c in 0..3 {
                out.set(y, x, c, acc[c]);
            }
        }
    }
    out
}

/// Extent after scaling: `round(len * scale)` with halves rounding up.
pub fn scaled_extent(len: usize, scale: f64) -> usize {
    (len as f64 * scale + 0.5).floor() as usize
}
