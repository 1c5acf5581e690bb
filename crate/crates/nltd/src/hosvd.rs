//! HOSVD factor learning and transform-domain hard thresholding.
//!
//! A mode-n factor is the full (square, never truncated) matrix of left
//! singular vectors of the mode-n unfolding. It is computed here from the
//! unfolding's Gram matrix, whose eigenvectors are exactly those singular
//! vectors; the Gram route never materializes the unfolding and keeps the
//! per-group cost at `O(I_n^2 * prod I_k)`. Shrinkage is done exclusively by
//! hard-thresholding core coefficients, not by truncating factors.

use crate::error::Result;
use crate::scalar::Scalar;
use crate::svd::HermitianEigen;
use crate::tensor::{Matrix, Tensor};

/// Gram matrix `X X^H` of the mode-`mode` unfolding `X`, built in place from
/// the tensor's slab structure.
fn unfolding_gram<T: Scalar>(t: &Tensor<T>, mode: usize) -> Result<Matrix<T>> {
    let shape = t.shape();
    let inner: usize = shape[..mode].iter().product();
    let extent = shape[mode];
    let outer: usize = shape[mode + 1..].iter().product();
    let data = t.data();
    let mut g = Matrix::<T>::zeros(extent, extent);
    for b in 0..outer {
        let slab = &data[b * inner * extent..(b + 1) * inner * extent];
        for r in 0..extent {
            let cr = &slab[r * inner..(r + 1) * inner];
            for c in r..extent {
                let cc = &slab[c * inner..(c + 1) * inner];
                let mut acc = T::ZERO;
                for (&x, &y) in cr.iter().zip(cc) {
                    acc += x * y.conj();
                }
                let cur = g.get(r, c);
                g.set(r, c, cur + acc);
            }
        }
    }
    // Hermitian mirror.
    for r in 0..extent {
        for c in 0..r {
            g.set(r, c, g.get(c, r).conj());
        }
    }
    Ok(g)
}

/// Learn the orthonormal factor matrices of the requested modes: for each
/// mode `n` the factor is the full `I_n x I_n` matrix of left singular
/// vectors of the mode-`n` unfolding, ordered by descending singular value.
pub fn hosvd_factors<T: HermitianEigen>(t: &Tensor<T>, modes: &[usize]) -> Result<Vec<Matrix<T>>> {
    modes
        .iter()
        .map(|&mode| {
            if mode >= t.order() {
                return Err(crate::error::Error::ModeOutOfRange {
                    mode,
                    order: t.order(),
                });
            }
            let g = unfolding_gram(t, mode)?;
            let (vecs, _vals) = T::eigen_desc(&g)?;
            Ok(vecs)
        })
        .collect()
}

/// Project a tensor onto the factor bases: applies `U^H` along each listed
/// mode, producing the core of the decomposition.
pub fn tucker_core<T: Scalar>(
    t: &Tensor<T>,
    factors: &[Matrix<T>],
    modes: &[usize],
) -> Result<Tensor<T>> {
    let mut cur = t.clone();
    for (u, &mode) in factors.iter().zip(modes) {
        cur = cur.mode_product(&u.conj_transpose(), mode)?;
    }
    Ok(cur)
}

/// Inverse of [`tucker_core`]: applies each factor along its mode.
pub fn tucker_compose<T: Scalar>(
    core: &Tensor<T>,
    factors: &[Matrix<T>],
    modes: &[usize],
) -> Result<Tensor<T>> {
    let mut cur = core.clone();
    for (u, &mode) in factors.iter().zip(modes) {
        cur = cur.mode_product(u, mode)?;
    }
    Ok(cur)
}

/// Zero every coefficient whose modulus is at most `tau` (phase preserved for
/// survivors). Returns the thresholded tensor and the number of surviving
/// nonzero coefficients.
pub fn hard_threshold<T: Scalar>(t: &Tensor<T>, tau: f64) -> (Tensor<T>, usize) {
    assert!(tau >= 0.0, "threshold must be nonnegative");
    let mut out = t.clone();
    let mut retained = 0usize;
    for x in out.data_mut() {
        if x.modulus() <= tau {
            *x = T::ZERO;
        } else {
            retained += 1;
        }
    }
    (out, retained)
}
