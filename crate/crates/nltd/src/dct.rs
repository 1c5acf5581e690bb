//! Orthonormal DCT-II matrices for the fixed-transform filter.

use crate::tensor::Matrix;
use std::f64::consts::PI;

/// N-point orthonormal DCT-II matrix: row `k` holds
/// `c_k * cos(pi * (2j+1) * k / (2N))` with `c_0 = sqrt(1/N)`,
/// `c_k = sqrt(2/N)`. Satisfies `D D^T = I`.
pub fn dct_matrix(n: usize) -> Matrix {
    assert!(n >= 1);
    let mut m = Matrix::zeros(n, n);
    let scale0 = (1.0 / n as f64).sqrt();
    let scale = (2.0 / n as f64).sqrt();
    for k in 0..n {
        let c = if k == 0 { scale0 } else { scale };
        for j in 0..n {
            m.set(k, j, c * (PI * (2 * j + 1) as f64 * k as f64 / (2 * n) as f64).cos());
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dct_is_orthonormal() {
        for n in [1, 2, 3, 8, 32] {
            let d = dct_matrix(n);
            assert!(d.is_orthonormal(1e-12), "n = {n}");
        }
    }

    #[test]
    fn dc_row_is_uniform() {
        let d = dct_matrix(8);
        let expect = (1.0f64 / 8.0).sqrt();
        for j in 0..8 {
            assert!((d.get(0, j) - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_vector_concentrates_in_dc() {
        // D * const has sqrt(n)*mean in entry 0 and zeros elsewhere.
        let n = 8;
        let d = dct_matrix(n);
        let v = 5.0;
        for k in 0..n {
            let coeff: f64 = (0..n).map(|j| d.get(k, j) * v).sum();
            if k == 0 {
                assert!((coeff - (n as f64).sqrt() * v).abs() < 1e-12);
            } else {
                assert!(coeff.abs() < 1e-12);
            }
        }
    }
}
