//! Dense SVD and Hermitian eigendecomposition kernels.
//!
//! Both are Jacobi-type methods: a one-sided (Hestenes) SVD that rotates
//! matrix columns until they are mutually orthogonal, and a two-sided cyclic
//! Jacobi eigensolver for Hermitian Gram matrices. The matrices in this crate
//! are small (patch-scale, at most a few hundred on a side), where Jacobi
//! methods are accurate, deterministic and have no trouble with clustered or
//! zero singular values.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::Matrix;

/// Relative gap under which a pair of columns counts as already orthogonal.
const JACOBI_TOL: f64 = 1e-14;
/// Hard cap on sweeps; typical inputs converge in well under ten.
const MAX_SWEEPS: usize = 64;
/// Singular values below `RANK_TOL * s_max` are treated as numerically zero
/// when normalizing left singular vectors.
const RANK_TOL: f64 = 1e-13;

/// Thin singular value decomposition `A = U diag(sigma) V^H`.
///
/// `u` is `m x k` and `v` is `n x k` with `k = min(m, n)`; both have
/// orthonormal columns and `sigma` is nonnegative, descending.
#[derive(Debug, Clone)]
pub struct Svd<T: Scalar> {
    pub u: Matrix<T>,
    pub sigma: Vec<f64>,
    pub v: Matrix<T>,
}

/// Compute the thin SVD of a dense matrix (real or complex).
pub fn svd<T: Scalar>(a: &Matrix<T>) -> Result<Svd<T>> {
    if a.data().iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("svd input".into()));
    }
    if a.rows() >= a.cols() {
        svd_tall(a)
    } else {
        // Work on the conjugate transpose and swap the factors back:
        // A^H = U' S V'^H  =>  A = V' S U'^H.
        let t = svd_tall(&a.conj_transpose())?;
        Ok(Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        })
    }
}

/// One-sided Jacobi on a tall (rows >= cols) matrix.
fn svd_tall<T: Scalar>(a: &Matrix<T>) -> Result<Svd<T>> {
    let (m, n) = (a.rows(), a.cols());
    let mut w = a.clone(); // becomes U * diag(sigma)
    let mut v = Matrix::<T>::identity(n);

    for _ in 0..MAX_SWEEPS {
        // Refresh column norms once per sweep; they are updated incrementally
        // inside the sweep.
        let mut norms: Vec<f64> = (0..n)
            .map(|c| w.col(c).iter().map(|x| x.norm_sqr()).sum())
            .collect();
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = norms[p];
                let beta = norms[q];
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let mut gamma = T::ZERO;
                {
                    let (cp, cq) = (w.col(p), w.col(q));
                    for (&x, &y) in cp.iter().zip(cq) {
                        gamma += x.conj() * y;
                    }
                }
                let g = gamma.modulus();
                if g <= JACOBI_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Phase so the effective cross term is real positive.
                let phase = gamma.scale(1.0 / g); // e^{i phi}
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;

                rotate_cols(&mut w, p, q, c, s, phase);
                rotate_cols(&mut v, p, q, c, s, phase);
                norms[p] = alpha - t * g;
                norms[q] = beta + t * g;
            }
        }
        if !rotated {
            break;
        }
    }

    // Singular values are the column norms of W.
    let mut order: Vec<usize> = (0..n).collect();
    let sig: Vec<f64> = (0..n)
        .map(|c| w.col(c).iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&i, &j| sig[j].partial_cmp(&sig[i]).unwrap().then(i.cmp(&j)));

    let s_max = order.first().map(|&i| sig[i]).unwrap_or(0.0);
    let cutoff = s_max * RANK_TOL;

    let mut u = Matrix::<T>::zeros(m, n);
    let mut v_sorted = Matrix::<T>::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    let mut deficient = Vec::new();
    for (dst, &src) in order.iter().enumerate() {
        let s = sig[src];
        sigma.push(s);
        v_sorted.col_mut(dst).copy_from_slice(v.col(src));
        if s > cutoff && s > 0.0 {
            let inv = 1.0 / s;
            let (col_src, col_dst) = (w.col(src).to_vec(), u.col_mut(dst));
            for (d, x) in col_dst.iter_mut().zip(col_src) {
                *d = x.scale(inv);
            }
        } else {
            deficient.push(dst);
        }
    }
    if !deficient.is_empty() {
        complete_orthonormal(&mut u, &deficient);
    }
    fix_signs(&mut u, &mut v_sorted);

    Ok(Svd { u, sigma, v: v_sorted })
}

/// Apply the elementary unitary `[[c, s*phase], [-s*conj(phase), c]]`
/// to columns `p`, `q` (new_p = c*p - s*conj(phase)*q, new_q = s*phase*p + c*q).
#[inline]
fn rotate_cols<T: Scalar>(m: &mut Matrix<T>, p: usize, q: usize, c: f64, s: f64, phase: T) {
    let rows = m.rows();
    let (pc, qc) = (p * rows, q * rows);
    let data = m.data_mut();
    let neg_s_conj_phase = (-phase.conj()).scale(s);
    let s_phase = phase.scale(s);
    for r in 0..rows {
        let x = data[pc + r];
        let y = data[qc + r];
        data[pc + r] = x.scale(c) + neg_s_conj_phase * y;
        data[qc + r] = s_phase * x + y.scale(c);
    }
}

/// Fill the listed zero columns of `u` with unit vectors orthonormal to all
/// other columns (modified Gram-Schmidt over the canonical basis).
fn complete_orthonormal<T: Scalar>(u: &mut Matrix<T>, missing: &[usize]) {
    let m = u.rows();
    let mut remaining: Vec<usize> = missing.to_vec();
    let mut filled: Vec<usize> = (0..u.cols()).filter(|c| !missing.contains(c)).collect();
    'cand: for e in 0..m {
        if remaining.is_empty() {
            break;
        }
        let mut cand = vec![T::ZERO; m];
        cand[e] = T::ONE;
        // Two MGS passes for numerical safety.
        for _ in 0..2 {
            for &c in &filled {
                let col = u.col(c);
                let mut dot = T::ZERO;
                for (&uc, &cc) in col.iter().zip(&cand) {
                    dot += uc.conj() * cc;
                }
                for (cc, &uc) in cand.iter_mut().zip(col) {
                    *cc -= dot * uc;
                }
            }
        }
        let norm = cand.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-3 {
            continue 'cand;
        }
        let dst = remaining.remove(0);
        for (d, x) in u.col_mut(dst).iter_mut().zip(cand) {
            *d = x.scale(1.0 / norm);
        }
        filled.push(dst);
    }
    debug_assert!(remaining.is_empty(), "orthonormal completion ran out of candidates");
}

/// Deterministic sign/phase convention: the largest-modulus entry of each
/// left singular vector is made real positive (the compensating phase goes
/// into V so the product is unchanged).
fn fix_signs<T: Scalar>(u: &mut Matrix<T>, v: &mut Matrix<T>) {
    for c in 0..u.cols() {
        let col = u.col(c);
        let mut best = 0usize;
        let mut best_mod = 0.0f64;
        for (r, &x) in col.iter().enumerate() {
            let m = x.modulus();
            if m > best_mod + 1e-300 {
                best_mod = m;
                best = r;
            }
        }
        if best_mod == 0.0 {
            continue;
        }
        let pivot = col[best];
        let phase = pivot.conj().scale(1.0 / best_mod); // multiplying by this makes pivot real positive
        if phase == T::ONE {
            continue;
        }
        for x in u.col_mut(c) {
            *x = *x * phase;
        }
        if c < v.cols() {
            for x in v.col_mut(c) {
                *x = *x * phase;
            }
        }
    }
}

/// Deterministic sign convention for eigenvector matrices (no paired V).
fn fix_signs_single<T: Scalar>(u: &mut Matrix<T>) {
    let mut dummy = Matrix::<T>::zeros(0, 0);
    fix_signs(u, &mut dummy);
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns `(eigenvectors, eigenvalues)` with eigenvalues descending and
/// eigenvectors as orthonormal columns. Used on Gram matrices of tensor
/// unfoldings, whose eigenvectors are the left singular vectors of the
/// unfolding.
pub fn hermitian_eigen_desc<T: Scalar>(g: &Matrix<T>) -> Result<(Matrix<T>, Vec<f64>)> {
    if g.rows() != g.cols() {
        return Err(Error::DimensionMismatch(format!(
            "hermitian_eigen on {}x{} matrix",
            g.rows(),
            g.cols()
        )));
    }
    if g.data().iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("eigen input".into()));
    }
    let n = g.rows();
    let mut a = g.clone();
    let mut v = Matrix::<T>::identity(n);
    let fro = a.frobenius().max(1e-300);

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for c in 0..n {
            for r in 0..n {
                if r != c {
                    off += a.get(r, c).norm_sqr();
                }
            }
        }
        if off.sqrt() <= JACOBI_TOL * fro {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let g_mod = apq.modulus();
                if g_mod <= JACOBI_TOL * fro {
                    continue;
                }
                let phase = apq.scale(1.0 / g_mod);
                let app = a.get(p, p).re();
                let aqq = a.get(q, q).re();
                let zeta = (aqq - app) / (2.0 * g_mod);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;

                // A <- J^H A J ; V <- V J
                rotate_cols(&mut a, p, q, c, s, phase);
                rotate_rows(&mut a, p, q, c, s, phase);
                rotate_cols(&mut v, p, q, c, s, phase);
            }
        }
    }

    let eig: Vec<f64> = (0..n).map(|i| a.get(i, i).re()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig[j].partial_cmp(&eig[i]).unwrap().then(i.cmp(&j)));

    let mut vecs = Matrix::<T>::zeros(n, n);
    let mut vals = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        vals.push(eig[src]);
        vecs.col_mut(dst).copy_from_slice(v.col(src));
    }
    fix_signs_single(&mut vecs);
    Ok((vecs, vals))
}

/// Row counterpart of [`rotate_cols`] for the two-sided eigen update:
/// new row_p = c*row_p - s*phase*row_q, new row_q = s*conj(phase)*row_p + c*row_q.
#[inline]
fn rotate_rows<T: Scalar>(m: &mut Matrix<T>, p: usize, q: usize, c: f64, s: f64, phase: T) {
    let neg_s_phase = (-phase).scale(s);
    let s_conj_phase = phase.conj().scale(s);
    let rows = m.rows();
    let cols = m.cols();
    let data = m.data_mut();
    for col in 0..cols {
        let base = col * rows;
        let x = data[base + p];
        let y = data[base + q];
        data[base + p] = x.scale(c) + neg_s_phase * y;
        data[base + q] = s_conj_phase * x + y.scale(c);
    }
}

/// Eigendecomposition dispatch: real symmetric matrices above a small size
/// use Householder tridiagonalization + implicit QL, everything else the
/// cyclic Jacobi path.
pub trait HermitianEigen: Scalar {
    fn eigen_desc(g: &Matrix<Self>) -> Result<(Matrix<Self>, Vec<f64>)>;
}

impl HermitianEigen for f64 {
    fn eigen_desc(g: &Matrix<f64>) -> Result<(Matrix<f64>, Vec<f64>)> {
        if g.rows() >= 12 {
            symmetric_eigen_desc(g)
        } else {
            hermitian_eigen_desc(g)
        }
    }
}

impl HermitianEigen for num_complex::Complex64 {
    fn eigen_desc(g: &Matrix<Self>) -> Result<(Matrix<Self>, Vec<f64>)> {
        hermitian_eigen_desc(g)
    }
}

/// Real symmetric eigendecomposition via Householder tridiagonalization
/// followed by the implicit-shift QL iteration, eigenvalues descending.
pub fn symmetric_eigen_desc(g: &Matrix<f64>) -> Result<(Matrix<f64>, Vec<f64>)> {
    if g.rows() != g.cols() {
        return Err(Error::DimensionMismatch(format!(
            "symmetric_eigen on {}x{} matrix",
            g.rows(),
            g.cols()
        )));
    }
    if g.data().iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("eigen input".into()));
    }
    let n = g.rows();
    let mut z = g.clone(); // accumulates the orthogonal transformation
    let mut d = vec![0.0f64; n]; // diagonal
    let mut e = vec![0.0f64; n]; // subdiagonal
    tred2(&mut z, &mut d, &mut e);
    tql2(&mut z, &mut d, &mut e)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[j].partial_cmp(&d[i]).unwrap().then(i.cmp(&j)));
    let mut vecs = Matrix::<f64>::zeros(n, n);
    let mut vals = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        vals.push(d[src]);
        vecs.col_mut(dst).copy_from_slice(z.col(src));
    }
    fix_signs_single(&mut vecs);
    Ok((vecs, vals))
}

/// Householder reduction of the symmetric matrix in `z` to tridiagonal form
/// (diagonal in `d`, subdiagonal in `e[1..]`); `z` is overwritten with the
/// accumulated orthogonal transformation.
fn tred2(zm: &mut Matrix<f64>, d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    let z = zm.data_mut();
    let at = |r: usize, c: usize| r + c * n;
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| z[at(i, k)].abs()).sum();
            if scale == 0.0 {
                e[i] = z[at(i, l)];
            } else {
                for k in 0..=l {
                    z[at(i, k)] /= scale;
                    h += z[at(i, k)] * z[at(i, k)];
                }
                let mut f = z[at(i, l)];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                z[at(i, l)] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    z[at(j, i)] = z[at(i, j)] / h;
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += z[at(j, k)] * z[at(i, k)];
                    }
                    for k in (j + 1)..=l {
                        g += z[at(k, j)] * z[at(i, k)];
                    }
                    e[j] = g / h;
                    f_acc += e[j] * z[at(i, j)];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    f = z[at(i, j)];
                    let gj = e[j] - hh * f;
                    e[j] = gj;
                    for k in 0..=j {
                        z[at(j, k)] -= f * e[k] + gj * z[at(i, k)];
                    }
                }
            }
        } else {
            e[i] = z[at(i, l)];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    // Accumulate transformations.
    for i in 0..n {
        let l = i;
        if d[i] != 0.0 {
            for j in 0..l {
                let mut g = 0.0;
                for k in 0..l {
                    g += z[at(i, k)] * z[at(k, j)];
                }
                for k in 0..l {
                    z[at(k, j)] -= g * z[at(k, i)];
                }
            }
        }
        d[i] = z[at(i, i)];
        z[at(i, i)] = 1.0;
        for j in 0..l {
            z[at(j, i)] = 0.0;
            z[at(i, j)] = 0.0;
        }
    }
}

/// Implicit-shift QL iteration on the tridiagonal (d, e), rotations applied
/// to the columns of `z`.
fn tql2(zm: &mut Matrix<f64>, d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    let z = zm.data_mut();
    let at = |r: usize, c: usize| r + c * n;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            // Find a negligible subdiagonal element.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::NonFinite("QL iteration failed to converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let sign_r = if g >= 0.0 { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut broke_early = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    broke_early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    f = z[at(k, i + 1)];
                    z[at(k, i + 1)] = s * z[at(k, i)] + c * f;
                    z[at(k, i)] = c * z[at(k, i)] - s * f;
                }
            }
            if broke_early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
