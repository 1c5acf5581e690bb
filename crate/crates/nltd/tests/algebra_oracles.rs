//! Brute-force oracles for the tensor algebra: the matricized Kronecker
//! identity, the mode-product matricization law, and orthogonal norm
//! invariance, each checked over batches of random tensors.

use nltd::hosvd::hosvd_factors;
use nltd::svd::svd;
use nltd::tensor::{Matrix, Tensor};

fn lcg(state: &mut u64) -> f64 {
    *state = state
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    ((*state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
}

fn random_tensor(shape: &[usize], seed: u64) -> Tensor {
    let mut st = seed.wrapping_add(1);
    let len: usize = shape.iter().product();
    Tensor::from_data(shape, (0..len).map(|_| lcg(&mut st)).collect()).unwrap()
}

fn random_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut st = seed.wrapping_add(101);
    Matrix::from_fn(rows, cols, |_, _| lcg(&mut st))
}

/// Random square orthogonal matrix (left factor of a random matrix's SVD).
fn random_orthogonal(n: usize, seed: u64) -> Matrix {
    svd(&random_matrix(n, n, seed)).unwrap().u
}

/// Brute-force Kronecker product.
fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for ja in 0..a.cols() {
        for ia in 0..a.rows() {
            let v = a.get(ia, ja);
            for jb in 0..b.cols() {
                for ib in 0..b.rows() {
                    out.set(ia * b.rows() + ib, ja * b.cols() + jb, v * b.get(ib, jb));
                }
            }
        }
    }
    out
}

fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
    assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
    a.data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn matricized_kronecker_identity() {
    // A = C x1 U1^T x2 U2^T x3 U3^T implies, for each mode n,
    // A_(n) = U_n^T C_(n) (U_k kron-chain over k != n, descending).
    for trial in 0..100 {
        let shape = [2, 2, 2];
        let core = random_tensor(&shape, trial);
        let us: Vec<Matrix> = (0..3)
            .map(|m| random_orthogonal(shape[m], trial * 7 + m as u64))
            .collect();
        let mut a = core.clone();
        for (m, u) in us.iter().enumerate() {
            a = a.mode_product(&u.transpose(), m).unwrap();
        }
        for n in 0..3 {
            let lhs = a.unfold(n).unwrap();
            // Kronecker chain over the other modes, descending mode order.
            let others: Vec<usize> = (0..3).filter(|&k| k != n).rev().collect();
            let mut chain = us[others[0]].clone();
            for &k in &others[1..] {
                chain = kron(&chain, &us[k]);
            }
            let rhs = us[n]
                .transpose()
                .matmul(&core.unfold(n).unwrap())
                .unwrap()
                .matmul(&chain)
                .unwrap();
            let diff = max_abs_diff(&lhs, &rhs);
            assert!(diff < 1e-12, "trial {trial}, mode {n}: diff {diff}");
        }
    }
}

#[test]
fn mode_product_matricization_law_random_tensors() {
    // unfold(t x_n M, n) == M * unfold(t, n) on 100 random order-3 tensors.
    for trial in 0..100 {
        let shape = [
            2 + (trial % 3) as usize,
            2 + (trial % 4) as usize,
            2 + (trial % 2) as usize,
        ];
        let t = random_tensor(&shape, 1000 + trial);
        for n in 0..3 {
            let m = random_matrix(shape[n] + 1, shape[n], 2000 + trial * 3 + n as u64);
            let p = t.mode_product(&m, n).unwrap();
            let lhs = p.unfold(n).unwrap();
            let rhs = m.matmul(&t.unfold(n).unwrap()).unwrap();
            assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
        }
    }
}

#[test]
fn unfold_fold_round_trip_random_tensors() {
    for trial in 0..100 {
        let order = 1 + (trial % 4) as usize;
        let shape: Vec<usize> = (0..order).map(|m| 2 + ((trial + m as u64) % 3) as usize).collect();
        let t = random_tensor(&shape, 3000 + trial);
        for n in 0..order {
            let m = t.unfold(n).unwrap();
            let back = Tensor::fold(&m, n, &shape).unwrap();
            assert_eq!(back, t, "trial {trial} mode {n}");
        }
    }
}

#[test]
fn orthogonal_invariance_of_frobenius_norm() {
    for trial in 0..100 {
        let shape = [3, 4, 2];
        let t = random_tensor(&shape, 4000 + trial);
        for n in 0..3 {
            let u = random_orthogonal(shape[n], 5000 + trial * 3 + n as u64);
            let p = t.mode_product(&u, n).unwrap();
            let rel = (p.frobenius() - t.frobenius()).abs() / t.frobenius();
            assert!(rel < 1e-12, "trial {trial} mode {n}: rel {rel}");
        }
    }
}

#[test]
fn hosvd_factor_matches_direct_svd_factorization() {
    // The learned factor reproduces the unfolding through its own projection:
    // U U^T X == X (full square factor), and the core is energy-ordered.
    for trial in 0..20 {
        let t = random_tensor(&[4, 5, 3], 6000 + trial);
        let fs = hosvd_factors(&t, &[0, 1, 2]).unwrap();
        for (n, u) in fs.iter().enumerate() {
            let x = t.unfold(n).unwrap();
            let uut_x = u.matmul(&u.transpose()).unwrap().matmul(&x).unwrap();
            assert!(max_abs_diff(&uut_x, &x) < 1e-10);
        }
    }
}
