//! Fixed 3x3 color-mode transforms: the opponent (luminance/chrominance)
//! transform and the 3-point Fourier matrix that diagonalizes circulant
//! coupling of the R, G, B channels, plus luminance extraction.
//!
//! The Fourier matrix entries are materialized at full double precision
//! (`-0.5 +- (sqrt(3)/2) i`) so that `U U^H = 3 I` and the conjugate
//! symmetry of transformed real data hold exactly, not merely to four
//! decimals.

use crate::error::{Error, Result};
use crate::tensor::{ComplexMatrix, ComplexTensor, Matrix, Tensor};
use num_complex::Complex64;

/// Opponent color transform: rows (1/3,1/3,1/3), (1/2,0,-1/2), (1/4,-1/2,1/4).
/// Row 1 of the output is the luminance channel.
pub fn opponent_matrix() -> Matrix {
    Matrix::from_rows(&[
        &[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
        &[0.5, 0.0, -0.5],
        &[0.25, -0.5, 0.25],
    ])
}

/// Exact inverse of [`opponent_matrix`]: rows (1,1,2/3), (1,0,-4/3), (1,-1,2/3).
pub fn opponent_inverse_matrix() -> Matrix {
    Matrix::from_rows(&[
        &[1.0, 1.0, 2.0 / 3.0],
        &[1.0, 0.0, -4.0 / 3.0],
        &[1.0, -1.0, 2.0 / 3.0],
    ])
}

/// Euclidean norms of the opponent matrix rows: (1/sqrt(3), 1/sqrt(2),
/// sqrt(3/8)). White noise of std `sigma` in RGB has per-channel std
/// `sigma * row_norm` after the transform, which drives per-channel
/// threshold scaling.
pub fn opponent_row_norms() -> [f64; 3] {
    [
        (1.0f64 / 3.0).sqrt(),
        (1.0f64 / 2.0).sqrt(),
        (3.0f64 / 8.0).sqrt(),
    ]
}

/// 3-point Fourier matrix with first row (1,1,1); satisfies `U U^H = 3 I`.
pub fn dft3_matrix() -> ComplexMatrix {
    let h = 3.0f64.sqrt() / 2.0;
    let w = Complex64::new(-0.5, -h);
    let wc = Complex64::new(-0.5, h);
    let one = Complex64::new(1.0, 0.0);
    ComplexMatrix::from_rows(&[&[one, one, one], &[one, w, wc], &[one, wc, w]])
}

/// Inverse of [`dft3_matrix`]: `(1/3) U^H`.
pub fn dft3_inverse_matrix() -> ComplexMatrix {
    let u = dft3_matrix().conj_transpose();
    u.map(|x| x.scale(1.0 / 3.0))
}

fn check_color_extent(t_shape: &[usize], mode: usize) -> Result<()> {
    if mode >= t_shape.len() || t_shape[mode] != 3 {
        return Err(Error::DimensionMismatch(format!(
            "color mode {mode} must have extent 3, tensor shape {t_shape:?}"
        )));
    }
    Ok(())
}

/// Apply the opponent transform along `color_mode` (extent must be 3).
/// Channel 0 of the result is the luminance channel.
pub fn opponent_forward(t: &Tensor, color_mode: usize) -> Result<Tensor> {
    check_color_extent(t.shape(), color_mode)?;
    t.mode_product(&opponent_matrix(), color_mode)
}

/// Exact inverse of [`opponent_forward`].
pub fn opponent_inverse(t: &Tensor, color_mode: usize) -> Result<Tensor> {
    check_color_extent(t.shape(), color_mode)?;
    t.mode_product(&opponent_inverse_matrix(), color_mode)
}

/// Apply the 3-point Fourier transform along `color_mode` of a real tensor.
/// Channel 0 of the result is exactly real and channels 1 and 2 are exact
/// conjugates of each other.
pub fn dft3_forward(t: &Tensor, color_mode: usize) -> Result<ComplexTensor> {
    check_color_extent(t.shape(), color_mode)?;
    t.to_complex().mode_product(&dft3_matrix(), color_mode)
}

/// Invert the 3-point Fourier transform and return the real result.
///
/// The input must be conjugate-symmetric (channel 0 real, channel 1 the
/// conjugate of channel 2); any violation surfaces as imaginary residue in
/// the inverse, and residue above `1e-6 * ||t||_F` is treated as a defect in
/// the complex filter chain and reported as an error. Residue below the
/// limit is discarded.
pub fn dft3_inverse(t: &ComplexTensor, color_mode: usize) -> Result<Tensor> {
    check_color_extent(t.shape(), color_mode)?;
    let inv = t.mode_product(&dft3_inverse_matrix(), color_mode)?;
    let imag_fro = inv.data().iter().map(|x| x.im * x.im).sum::<f64>().sqrt();
    let limit = 1e-6 * t.frobenius();
    if imag_fro > limit {
        return Err(Error::SymmetryViolation {
            residue: imag_fro,
            limit,
        });
    }
    Ok(inv.real())
}

/// Mean over the color mode: the luminance channel `(R+G+B)/3`, returned
/// with the color mode removed (an order `N-1` tensor).
pub fn luminance(t: &Tensor, color_mode: usize) -> Result<Tensor> {
    check_color_extent(t.shape(), color_mode)?;
    let shape = t.shape();
    let inner: usize = shape[..color_mode].iter().product();
    let outer: usize = shape[color_mode + 1..].iter().product();
    let mut out_shape: Vec<usize> = shape.to_vec();
    out_shape.remove(color_mode);
    if out_shape.is_empty() {
        out_shape.push(1); // luminance of a single pixel is a scalar tensor
    }
    let mut out = Tensor::zeros(&out_shape);
    let data = t.data();
    let dst = out.data_mut();
    for b in 0..outer {
        let slab = &data[b * inner * 3..(b + 1) * inner * 3];
        let d = &mut dst[b * inner..(b + 1) * inner];
        for a in 0..inner {
            d[a] = (slab[a] + slab[a + inner] + slab[a + 2 * inner]) / 3.0;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pixel(r: f64, g: f64, b: f64) -> Tensor {
        Tensor::from_data(&[3], vec![r, g, b]).unwrap()
    }

    fn lcg(state: &mut u64) -> f64 {
        *state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((*state >> 11) as f64 / (1u64 << 53) as f64) * 255.0
    }

    fn random_color_tensor(shape: &[usize], seed: u64) -> Tensor {
        let mut st = seed;
        let len: usize = shape.iter().product();
        Tensor::from_data(shape, (0..len).map(|_| lcg(&mut st)).collect()).unwrap()
    }

    #[test]
    fn gray_pixel_has_zero_chroma() {
        let out = opponent_forward(&pixel(42.0, 42.0, 42.0), 0).unwrap();
        assert!((out.data()[0] - 42.0).abs() < 1e-12);
        assert!(out.data()[1].abs() < 1e-12);
        assert!(out.data()[2].abs() < 1e-12);
    }

    #[test]
    fn pure_red_pixel() {
        let out = opponent_forward(&pixel(255.0, 0.0, 0.0), 0).unwrap();
        assert!((out.data()[0] - 85.0).abs() < 1e-12);
        assert!((out.data()[1] - 127.5).abs() < 1e-12);
        assert!((out.data()[2] - 63.75).abs() < 1e-12);
    }

    #[test]
    fn opponent_round_trip() {
        let t = random_color_tensor(&[4, 3, 2], 5);
        let back = opponent_inverse(&opponent_forward(&t, 1).unwrap(), 1).unwrap();
        for (x, y) in back.data().iter().zip(t.data()) {
            assert!((x - y).abs() < 1e-12);
        }
        let lum_only = opponent_inverse(&pixel(7.0, 0.0, 0.0), 0).unwrap();
        for c in 0..3 {
            assert!((lum_only.data()[c] - 7.0).abs() < 1e-12);
        }
    }

    #[test]
    fn opponent_inverse_matches_gaussian_elimination_oracle() {
        // Brute-force 3x3 inversion by Gauss-Jordan on the forward matrix.
        let fwd = opponent_matrix();
        let mut aug = [[0.0f64; 6]; 3];
        for r in 0..3 {
            for c in 0..3 {
                aug[r][c] = fwd.get(r, c);
            }
            aug[r][3 + r] = 1.0;
        }
        for col in 0..3 {
            let piv = (col..3)
                .max_by(|&a, &b| aug[a][col].abs().partial_cmp(&aug[b][col].abs()).unwrap())
                .unwrap();
            aug.swap(col, piv);
            let p = aug[col][col];
            for x in aug[col].iter_mut() {
                *x /= p;
            }
            for r in 0..3 {
                if r != col {
                    let f = aug[r][col];
                    for c in 0..6 {
                        aug[r][c] -= f * aug[col][c];
                    }
                }
            }
        }
        let inv = opponent_inverse_matrix();
        for r in 0..3 {
            for c in 0..3 {
                assert!(
                    (inv.get(r, c) - aug[r][3 + c]).abs() < 1e-14,
                    "inverse entry ({r},{c})"
                );
            }
        }
    }

    #[test]
    fn row_norms_match_brute_force() {
        let fwd = opponent_matrix();
        let expect = opponent_row_norms();
        for r in 0..3 {
            let n = (0..3).map(|c| fwd.get(r, c).powi(2)).sum::<f64>().sqrt();
            assert!((n - expect[r]).abs() < 1e-15);
        }
    }

    #[test]
    fn dft3_of_ones_and_unit() {
        let out = dft3_forward(&pixel(1.0, 1.0, 1.0), 0).unwrap();
        assert!((out.data()[0].re - 3.0).abs() < 1e-15 && out.data()[0].im.abs() < 1e-15);
        assert!(out.data()[1].norm() < 1e-15);
        assert!(out.data()[2].norm() < 1e-15);

        let out = dft3_forward(&pixel(1.0, 0.0, 0.0), 0).unwrap();
        for c in 0..3 {
            assert!((out.data()[c].re - 1.0).abs() < 1e-15 && out.data()[c].im.abs() < 1e-15);
        }
    }

    #[test]
    fn dft3_conjugate_symmetry_is_exact() {
        let t = random_color_tensor(&[5, 4, 3], 9);
        let hat = dft3_forward(&t, 2).unwrap();
        let inner = 5 * 4;
        let d = hat.data();
        for a in 0..inner {
            assert_eq!(d[a].im, 0.0, "channel 0 must be exactly real");
            let c1 = d[a + inner];
            let c2 = d[a + 2 * inner];
            assert_eq!(c1.re, c2.re);
            assert_eq!(c1.im, -c2.im);
        }
    }

    #[test]
    fn dft3_unitary_up_to_three() {
        let u = dft3_matrix();
        let prod = u.matmul(&u.conj_transpose()).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                let expect = if r == c { 3.0 } else { 0.0 };
                assert!((prod.get(r, c).re - expect).abs() < 1e-14);
                assert!(prod.get(r, c).im.abs() < 1e-14);
            }
        }
        // (1/3) U^H U = I, entry-wise.
        let inv = dft3_inverse_matrix();
        let id = inv.matmul(&u).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                let expect = if r == c { 1.0 } else { 0.0 };
                assert!((id.get(r, c).re - expect).abs() < 1e-14);
                assert!(id.get(r, c).im.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn dft3_round_trip() {
        let back = dft3_inverse(&dft3_forward(&pixel(3.0, 0.0, 0.0), 0).unwrap(), 0);
        // forward of (3,0,0)... check the stated examples the other way:
        // inverse of spectral (3,0,0) is (1,1,1).
        let spec = Tensor::from_data(&[3], vec![3.0, 0.0, 0.0]).unwrap().to_complex();
        let x = dft3_inverse(&spec, 0).unwrap();
        for c in 0..3 {
            assert!((x.data()[c] - 1.0).abs() < 1e-14);
        }

        let t = random_color_tensor(&[4, 3, 5], 21);
        let rt = dft3_inverse(&dft3_forward(&t, 1).unwrap(), 1).unwrap();
        for (x, y) in rt.data().iter().zip(t.data()) {
            assert!((x - y).abs() < 1e-10);
        }
        back.unwrap();
    }

    #[test]
    fn dft3_norm_scales_by_sqrt3() {
        let t = random_color_tensor(&[6, 6, 3], 33);
        let hat = dft3_forward(&t, 2).unwrap();
        let ratio = hat.frobenius() / t.frobenius();
        assert!((ratio - 3.0f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn dft3_inverse_rejects_asymmetric_input() {
        let mut bad = dft3_forward(&pixel(5.0, 1.0, 2.0), 0).unwrap();
        bad.data_mut()[1] = Complex64::new(100.0, 55.0); // break conjugacy
        match dft3_inverse(&bad, 0) {
            Err(Error::SymmetryViolation { .. }) => {}
            other => panic!("expected symmetry violation, got {other:?}"),
        }
    }

    #[test]
    fn luminance_values() {
        let l = luminance(&pixel(30.0, 60.0, 90.0), 0).unwrap();
        assert!((l.data()[0] - 60.0).abs() < 1e-12);

        // Gray tensor: luminance equals any channel.
        let mut gray = Tensor::zeros(&[2, 3, 2]);
        for k in 0..2 {
            for c in 0..3 {
                for i in 0..2 {
                    gray.set(&[i, c, k], (i + k) as f64 * 10.0);
                }
            }
        }
        let l = luminance(&gray, 1).unwrap();
        for k in 0..2 {
            for i in 0..2 {
                assert_eq!(l.get(&[i, k]), (i + k) as f64 * 10.0);
            }
        }
    }

    #[test]
    fn three_luminance_equals_dft_channel0() {
        let t = random_color_tensor(&[4, 3, 3], 41);
        let l = luminance(&t, 1).unwrap();
        let hat = dft3_forward(&t, 1).unwrap();
        // channel 0 of hat, laid out as (inner=4, color, outer=3)
        for b in 0..3 {
            for a in 0..4 {
                let spectral = hat.data()[a + b * 4 * 3];
                assert!((3.0 * l.data()[a + b * 4] - spectral.re).abs() < 1e-10);
                assert_eq!(spectral.im, 0.0);
            }
        }
    }

    #[test]
    fn group_mode_gram_scales_by_three() {
        // Gram matrix of the group-mode unfolding after the Fourier color
        // transform equals 3x the real Gram; hence the leading group-mode
        // singular vectors agree.
        let g = random_color_tensor(&[3, 3, 3, 4], 55);
        let hat = dft3_forward(&g, 2).unwrap();
        let x = g.unfold(3).unwrap();
        let gram = x.matmul(&x.transpose()).unwrap();
        let xh = hat.unfold(3).unwrap();
        let gram_hat = xh.matmul(&xh.conj_transpose()).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                let gh = gram_hat.get(r, c);
                assert!((gh.re - 3.0 * gram.get(r, c)).abs() < 1e-9);
                assert!(gh.im.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn wrong_color_extent_errors() {
        let t = Tensor::zeros(&[4, 4]);
        assert!(opponent_forward(&t, 1).is_err());
        assert!(dft3_forward(&t, 0).is_err());
        assert!(luminance(&t, 1).is_err());
    }
}
