//! Objective image-quality indexes: MSE, PSNR and SSIM.

use crate::error::{Error, Result};
use crate::image::Image;

fn check_same_extents(a: &Image, b: &Image) -> Result<()> {
    if a.height() != b.height() || a.width() != b.width() {
        return Err(Error::DimensionMismatch(format!(
            "metric inputs {}x{} vs {}x{}",
            a.height(),
            a.width(),
            b.height(),
            b.width()
        )));
    }
    Ok(())
}

/// Mean squared error over all `H*W*3` elements.
pub fn mse(a: &Image, b: &Image) -> Result<f64> {
    check_same_extents(a, b)?;
    let n = a.data().len() as f64;
    let sum: f64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(sum / n)
}

/// Peak signal-to-noise ratio in dB: `10 * log10(255^2 / mse)`.
/// Identical images report `f64::INFINITY`.
pub fn psnr(a: &Image, b: &Image) -> Result<f64> {
    let m = mse(a, b)?;
    if m == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (255.0 * 255.0 / m).log10())
}

/// SSIM computation details.
#[derive(Debug, Clone, Copy)]
pub struct SsimDetails {
    pub value: f64,
    /// Actual window side used (row, col); smaller than 11 only when the
    /// image itself is smaller than the standard window.
    pub window: (usize, usize),
    pub window_shrunk: bool,
}

const SSIM_WINDOW: usize = 11;
const SSIM_GAUSS_STD: f64 = 1.5;
const SSIM_C1: f64 = (0.01 * 255.0) * (0.01 * 255.0);
const SSIM_C2: f64 = (0.03 * 255.0) * (0.03 * 255.0);

fn gaussian_window(rows: usize, cols: usize) -> Vec<f64> {
    let cy = (rows as f64 - 1.0) / 2.0;
    let cx = (cols as f64 - 1.0) / 2.0;
    let inv = 1.0 / (2.0 * SSIM_GAUSS_STD * SSIM_GAUSS_STD);
    let mut w = Vec::with_capacity(rows * cols);
    let mut sum = 0.0;
    for r in 0..rows {
        for c in 0..cols {
            let d2 = (r as f64 - cy).powi(2) + (c as f64 - cx).powi(2);
            let v = (-d2 * inv).exp();
            w.push(v);
            sum += v;
        }
    }
    for v in &mut w {
        *v /= sum;
    }
    w
}

/// Mean structural similarity on the luminance channel with an 11x11
/// Gaussian window (std 1.5) and the canonical stabilizers. The window
/// shrinks (and is flagged) when the image is smaller than 11x11.
pub fn ssim_details(a: &Image, b: &Image) -> Result<SsimDetails> {
    check_same_extents(a, b)?;
    let la = a.luminance();
    let lb = b.luminance();
    let (h, w) = (a.height(), a.width());
    let wr = SSIM_WINDOW.min(h);
    let wc = SSIM_WINDOW.min(w);
    let shrunk = wr < SSIM_WINDOW || wc < SSIM_WINDOW;
    let win = gaussian_window(wr, wc);

    let mut total = 0.0;
    let mut count = 0usize;
    for y0 in 0..=(h - wr) {
        for x0 in 0..=(w - wc) {
            let mut mu_a = 0.0;
            let mut mu_b = 0.0;
            let mut aa = 0.0;
            let mut bb = 0.0;
            let mut ab = 0.0;
            let mut wi = 0;
            for dy in 0..wr {
                let ra = &la.row(y0 + dy)[x0..x0 + wc];
                let rb = &lb.row(y0 + dy)[x0..x0 + wc];
                for (xa, xb) in ra.iter().zip(rb) {
                    let g = win[wi];
                    wi += 1;
                    mu_a += g * xa;
                    mu_b += g * xb;
                    aa += g * xa * xa;
                    bb += g * xb * xb;
                    ab += g * xa * xb;
                }
            }
            let var_a = aa - mu_a * mu_a;
            let var_b = bb - mu_b * mu_b;
            let cov = ab - mu_a * mu_b;
            let s = ((2.0 * mu_a * mu_b + SSIM_C1) * (2.0 * cov + SSIM_C2))
                / ((mu_a * mu_a + mu_b * mu_b + SSIM_C1) * (var_a + var_b + SSIM_C2));
            total += s;
            count += 1;
        }
    }
    Ok(SsimDetails {
        value: total / count as f64,
        window: (wr, wc),
        window_shrunk: shrunk,
    })
}

/// Mean SSIM value (see [`ssim_details`]).
pub fn ssim(a: &Image, b: &Image) -> Result<f64> {
    ssim_details(a, b).map(|d| d.value)
}
