//! PNG load/save. Files are 8-bit RGB; pixels decode straight to real
//! values and encode with round-half-up and clamping to 0..255.

use crate::error::Result;
use nltd::Image;
use std::path::Path;

/// Decode a PNG (any color type; converted to RGB) into a real-valued image.
pub fn load_png(path: &Path) -> Result<Image> {
    let rgb = image::open(path)?.to_rgb8();
    let (w, h) = rgb.dimensions();
    let data: Vec<f64> = rgb.as_raw().iter().map(|&b| b as f64).collect();
    Ok(Image::from_data(h as usize, w as usize, data)?)
}

/// Encode to 8-bit RGB PNG, rounding half up and clamping to 0..255.
pub fn save_png(path: &Path, img: &Image) -> Result<()> {
    let bytes: Vec<u8> = img
        .data()
        .iter()
        .map(|&v| (v + 0.5).floor().clamp(0.0, 255.0) as u8)
        .collect();
    let buf: image::RgbImage =
        image::ImageBuffer::from_raw(img.width() as u32, img.height() as u32, bytes)
            .expect("buffer length matches dimensions");
    buf.save_with_format(path, image::ImageFormat::Png)?;
    Ok(())
}
