//! Procedural test scenes: deterministic color images with the structure
//! denoisers care about (smooth regions, repeated shapes, edges, periodic
//! texture). Used by the acceptance suite and the demo subcommands in place
//! of shipped photographs.

use nltd::Image;

fn smoothstep(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * (3.0 - 2.0 * t)
}

/// Soft-edged colored ellipses over a smooth gradient.
pub fn scene_blobs(h: usize, w: usize) -> Image {
    // fixed palette and layout; scaled to the requested extents
    let blobs: [(f64, f64, f64, f64, [f64; 3]); 9] = [
        (0.22, 0.28, 0.16, 0.12, [205.0, 92.0, 80.0]),
        (0.65, 0.20, 0.12, 0.18, [70.0, 140.0, 200.0]),
        (0.80, 0.62, 0.20, 0.14, [120.0, 190.0, 90.0]),
        (0.35, 0.70, 0.14, 0.20, [230.0, 200.0, 90.0]),
        (0.55, 0.45, 0.10, 0.10, [170.0, 110.0, 190.0]),
        (0.15, 0.82, 0.10, 0.08, [90.0, 200.0, 180.0]),
        (0.88, 0.15, 0.08, 0.10, [240.0, 150.0, 60.0]),
        (0.45, 0.12, 0.07, 0.07, [60.0, 90.0, 160.0]),
        (0.72, 0.85, 0.11, 0.09, [200.0, 80.0, 140.0]),
    ];
    Image::from_fn(h, w, |y, x, c| {
        let fy = y as f64 / h as f64;
        let fx = x as f64 / w as f64;
        let mut v = 60.0 + 70.0 * fy + 40.0 * fx + 15.0 * c as f64;
        for &(cy, cx, ry, rx, color) in &blobs {
            let d = ((fy - cy) / ry).powi(2) + ((fx - cx) / rx).powi(2);
            let cover = 1.0 - smoothstep((d - 0.6) / 0.8);
            v = v * (1.0 - cover) + color[c] * cover;
        }
        v.clamp(0.0, 255.0)
    })
}

/// Flat rectangles and disks with hard edges, a cartoon-like composition.
pub fn scene_shapes(h: usize, w: usize) -> Image {
    let rects: [(f64, f64, f64, f64, [f64; 3]); 5] = [
        (0.10, 0.08, 0.45, 0.30, [190.0, 60.0, 60.0]),
        (0.55, 0.12, 0.85, 0.38, [60.0, 120.0, 190.0]),
        (0.20, 0.45, 0.50, 0.90, [80.0, 170.0, 100.0]),
        (0.62, 0.55, 0.92, 0.78, [220.0, 190.0, 80.0]),
        (0.05, 0.60, 0.15, 0.95, [150.0, 150.0, 150.0]),
    ];
    let disks: [(f64, f64, f64, [f64; 3]); 3] = [
        (0.75, 0.88, 0.09, [200.0, 100.0, 170.0]),
        (0.32, 0.32, 0.07, [240.0, 240.0, 230.0]),
        (0.85, 0.30, 0.06, [40.0, 60.0, 90.0]),
    ];
    Image::from_fn(h, w, |y, x, c| {
        let fy = y as f64 / h as f64;
        let fx = x as f64 / w as f64;
        let mut v = 40.0 + 90.0 * fx + 30.0 * fy + 10.0 * c as f64;
        for &(y0, x0, y1, x1, color) in &rects {
            if fy >= y0 && fy < y1 && fx >= x0 && fx < x1 {
                v = color[c];
            }
        }
        for &(cy, cx, r, color) in &disks {
            if (fy - cy).powi(2) + (fx - cx).powi(2) < r * r {
                v = color[c];
            }
        }
        v.clamp(0.0, 255.0)
    })
}

/// Low-frequency plaid texture with a diagonal color ramp; strongly
/// self-similar.
pub fn scene_plaid(h: usize, w: usize) -> Image {
    Image::from_fn(h, w, |y, x, c| {
        let fy = y as f64 * std::f64::consts::PI / 16.0;
        let fx = x as f64 * std::f64::consts::PI / 16.0;
        let plaid = 35.0 * (fy * 0.5).sin() + 35.0 * (fx * 0.5).cos()
            + 18.0 * ((fy + fx) * 0.25).sin();
        let ramp = 110.0 + 35.0 * (y as f64 + x as f64) / (h + w) as f64;
        let tint = match c {
            0 => 18.0 * ((x as f64) / w as f64),
            1 => 10.0,
            _ => 18.0 * ((y as f64) / h as f64),
        };
        (ramp + plaid + tint).clamp(0.0, 255.0)
    })
}

/// The three bundled test scenes at the given extents.
pub fn bundled_scenes(h: usize, w: usize) -> Vec<(&'static str, Image)> {
    vec![
        ("blobs", scene_blobs(h, w)),
        ("shapes", scene_shapes(h, w)),
        ("plaid", scene_plaid(h, w)),
    ]
}
