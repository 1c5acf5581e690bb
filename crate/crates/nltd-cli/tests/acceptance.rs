//! Acceptance suite: every criterion runs in sequence inside one test so the
//! wall-clock measurements are not distorted by parallel test threads, and a
//! pass/fail line is printed per criterion. Run with `--nocapture` to see
//! the lines on success.

use nltd::color;
use nltd::hosvd::hosvd_factors;
use nltd::metrics::{mse, psnr, ssim};
use nltd::tensor::{ComplexMatrix, Matrix, Tensor};
use nltd::{denoise, denoise_resized, DenoiseConfig, Image, Method};
use nltd_cli::noise::synth_awgn;
use nltd_cli::pngio::save_png;
use nltd_cli::scenes::bundled_scenes;
use std::path::PathBuf;
use std::time::Instant;

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

fn rel_image_err(a: &Image, b: &Image) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in a.data().iter().zip(b.data()) {
        num += (x - y) * (x - y);
        den += y * y;
    }
    num.sqrt() / den.sqrt().max(1e-300)
}

const METHODS: [Method; 3] = [Method::Cdct, Method::MsTsvd, Method::Hosvd4d];

/// 1. Identity: sigma = 0 reproduces the input within 1e-8 relative
/// Frobenius error on the three bundled 256x256 scenes in under 5 s each.
fn criterion_identity() -> Result<String, String> {
    let mut worst_err = 0.0f64;
    let mut worst_time = 0.0f64;
    for (name, img) in bundled_scenes(256, 256) {
        for method in METHODS {
            let cfg = DenoiseConfig {
                sigma: 0.0,
                method,
                ..DenoiseConfig::default()
            };
            let t0 = Instant::now();
            let out = denoise(&img, &cfg).map_err(|e| e.to_string())?;
            let secs = t0.elapsed().as_secs_f64();
            let err = rel_image_err(&out, &img);
            worst_err = worst_err.max(err);
            worst_time = worst_time.max(secs);
            if err >= 1e-8 {
                return Err(format!(
                    "{name}/{}: relative error {err:.3e} >= 1e-8",
                    method.name()
                ));
            }
            if secs >= 5.0 {
                return Err(format!("{name}/{}: {secs:.2} s >= 5 s", method.name()));
            }
        }
    }
    Ok(format!(
        "worst relative error {worst_err:.2e}, worst time {worst_time:.2} s"
    ))
}

/// 2. Algebra oracles on 100 random tensors each, under 10 s total.
fn criterion_algebra() -> Result<String, String> {
    let t0 = Instant::now();

    // unfold/fold round trips, exact.
    for trial in 0..100u64 {
        let order = 1 + (trial % 4) as usize;
        let shape: Vec<usize> = (0..order)
            .map(|m| 2 + ((trial + m as u64) % 3) as usize)
            .collect();
        let t = random_tensor(&shape, trial);
        for n in 0..order {
            let back = Tensor::fold(&t.unfold(n).unwrap(), n, &shape).unwrap();
            if back != t {
                return Err(format!("round trip failed, trial {trial} mode {n}"));
            }
        }
    }

    // Matricized Kronecker identity on random order-3 tensors.
    let kron = |a: &Matrix, b: &Matrix| -> Matrix {
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
    };
    for trial in 0..100u64 {
        let shape = [2usize, 3, 2];
        let core = random_tensor(&shape, 500 + trial);
        let us: Vec<Matrix> = (0..3)
            .map(|m| {
                nltd::svd::svd(&Matrix::from_fn(shape[m], shape[m], |r, c| {
                    let mut st = trial * 31 + (m * 7 + r * 3 + c) as u64;
                    lcg(&mut st)
                }))
                .unwrap()
                .u
            })
            .collect();
        let mut a = core.clone();
        for (m, u) in us.iter().enumerate() {
            a = a.mode_product(&u.transpose(), m).unwrap();
        }
        for n in 0..3 {
            let lhs = a.unfold(n).unwrap();
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
            for (x, y) in lhs.data().iter().zip(rhs.data()) {
                if (x - y).abs() >= 1e-12 {
                    return Err(format!("Kronecker identity failed, trial {trial} mode {n}"));
                }
            }
        }
    }

    // Mode-product matricization law.
    for trial in 0..100u64 {
        let shape = [3usize, 2, 4];
        let t = random_tensor(&shape, 1500 + trial);
        for n in 0..3 {
            let mut st = 9000 + trial * 5 + n as u64;
            let m = Matrix::from_fn(4, shape[n], |_, _| lcg(&mut st));
            let lhs = t.mode_product(&m, n).unwrap().unfold(n).unwrap();
            let rhs = m.matmul(&t.unfold(n).unwrap()).unwrap();
            for (x, y) in lhs.data().iter().zip(rhs.data()) {
                if (x - y).abs() >= 1e-12 {
                    return Err(format!("matricization law failed, trial {trial} mode {n}"));
                }
            }
        }
    }

    // Parseval / orthogonal invariance through learned factors.
    for trial in 0..100u64 {
        let t = random_tensor(&[3, 4, 2], 2500 + trial);
        let factors = hosvd_factors(&t, &[0, 1, 2]).unwrap();
        for (n, u) in factors.iter().enumerate() {
            let p = t.mode_product(u, n).unwrap();
            if ((p.frobenius() - t.frobenius()) / t.frobenius()).abs() >= 1e-12 {
                return Err(format!("Parseval failed, trial {trial} mode {n}"));
            }
        }
    }

    let secs = t0.elapsed().as_secs_f64();
    if secs >= 10.0 {
        return Err(format!("oracles took {secs:.1} s >= 10 s"));
    }
    Ok(format!("4 oracle families x 100 tensors in {secs:.2} s"))
}

/// 3. Fourier structure: exact conjugate symmetry, U U^H = 3I, luminance
/// agreement, and group-transform subspace equivalence on 50 random groups.
fn criterion_fourier() -> Result<String, String> {
    // Conjugate symmetry, 1e-12 (holds exactly by construction).
    for trial in 0..20u64 {
        let g = random_tensor(&[4, 4, 3, 5], 7000 + trial);
        let hat = color::dft3_forward(&g, 2).unwrap();
        let s = hat.shape();
        let plane = s[0] * s[1];
        for k in 0..s[3] {
            for a in 0..plane {
                let c0 = hat.data()[a + k * 3 * plane];
                let c1 = hat.data()[a + plane + k * 3 * plane];
                let c2 = hat.data()[a + 2 * plane + k * 3 * plane];
                if c0.im.abs() > 1e-12
                    || (c1.re - c2.re).abs() > 1e-12
                    || (c1.im + c2.im).abs() > 1e-12
                {
                    return Err(format!("conjugate symmetry violated, trial {trial}"));
                }
            }
        }
    }

    // U_FFT U_FFT^H = 3I.
    let u = color::dft3_matrix();
    let prod = u.matmul(&u.conj_transpose()).unwrap();
    for r in 0..3 {
        for c in 0..3 {
            let expect = if r == c { 3.0 } else { 0.0 };
            let v = prod.get(r, c);
            if (v.re - expect).abs() > 1e-12 || v.im.abs() > 1e-12 {
                return Err("U U^H != 3I".into());
            }
        }
    }

    // Channel-0 / luminance agreement: ch0 = 3 * luminance, exactly real.
    for trial in 0..20u64 {
        let g = random_tensor(&[5, 3, 3, 4], 8000 + trial);
        let lum = color::luminance(&g, 2).unwrap();
        let hat = color::dft3_forward(&g, 2).unwrap();
        let s = g.shape();
        let plane = s[0] * s[1];
        for k in 0..s[3] {
            for a in 0..plane {
                let spectral = hat.data()[a + k * 3 * plane];
                let l = lum.data()[a + k * plane];
                if spectral.im != 0.0 || (spectral.re - 3.0 * l).abs() > 1e-10 {
                    return Err(format!("luminance agreement violated, trial {trial}"));
                }
            }
        }
    }

    // Group-transform subspace equivalence on 50 random groups.
    let mut worst_angle = 0.0f64;
    for trial in 0..50u64 {
        let mut st = 9900 + trial;
        let g = Tensor::from_data(
            &[6, 6, 3, 8],
            (0..6 * 6 * 3 * 8).map(|_| lcg(&mut st) * 120.0 + 128.0).collect(),
        )
        .unwrap();
        let u_group = hosvd_factors(&g, &[3]).unwrap().pop().unwrap();
        let hat = color::dft3_forward(&g, 2).unwrap();
        let u_hat = hosvd_factors(&hat, &[3]).unwrap().pop().unwrap();
        // principal angle between the leading vectors
        let mut dot = nltd::Complex64::new(0.0, 0.0);
        for r in 0..8 {
            dot += u_hat.get(r, 0).conj().scale(u_group.get(r, 0));
        }
        let cosine = dot.norm().min(1.0);
        let angle = cosine.acos();
        worst_angle = worst_angle.max(angle);
        if angle >= 1e-6 {
            return Err(format!(
                "group subspace angle {angle:.3e} >= 1e-6 at trial {trial}"
            ));
        }
    }
    Ok(format!("worst group-subspace angle {worst_angle:.2e} rad"))
}

/// 4. Denoising gain at sigma 15/25/50 on the three bundled scenes, with the
/// analytically derived noisy baseline and the per-image runtime bound.
fn criterion_gain() -> Result<String, String> {
    let required = [(15.0, 3.0), (25.0, 5.0), (50.0, 6.0)];
    let mut min_gain = f64::INFINITY;
    let mut worst_time = 0.0f64;
    for (name, clean) in bundled_scenes(256, 256) {
        for &(sigma, min_required) in &required {
            let noisy = synth_awgn(&clean, sigma, 7);
            let base = psnr(&noisy, &clean).map_err(|e| e.to_string())?;
            let analytic = 10.0 * (255.0f64 * 255.0 / (sigma * sigma)).log10();
            if (base - analytic).abs() > 0.2 {
                return Err(format!(
                    "{name}: noisy baseline {base:.2} dB deviates from {analytic:.2} dB"
                ));
            }
            for method in METHODS {
                let cfg = DenoiseConfig {
                    sigma,
                    method,
                    ..DenoiseConfig::default()
                };
                let t0 = Instant::now();
                let out = denoise(&noisy, &cfg).map_err(|e| e.to_string())?;
                let secs = t0.elapsed().as_secs_f64();
                worst_time = worst_time.max(secs);
                if secs >= 60.0 {
                    return Err(format!("{name}/{}: {secs:.1} s >= 60 s", method.name()));
                }
                let gain = psnr(&out, &clean).map_err(|e| e.to_string())? - base;
                min_gain = min_gain.min(gain);
                if gain < min_required {
                    return Err(format!(
                        "{name}/{} at sigma {sigma}: gain {gain:.2} dB < {min_required} dB",
                        method.name()
                    ));
                }
            }
        }
    }
    Ok(format!(
        "minimum gain {min_gain:.2} dB, worst runtime {worst_time:.2} s"
    ))
}

/// 5. Metric exactness.
fn criterion_metrics() -> Result<String, String> {
    let zero = Image::zeros(8, 8);
    let full = Image::from_fn(8, 8, |_, _, _| 255.0);
    let p = psnr(&zero, &full).map_err(|e| e.to_string())?;
    if p != 0.0 {
        return Err(format!("psnr(all-0, all-255) = {p}, expected exactly 0"));
    }

    let a = Image::zeros(1, 1);
    let mut b = Image::zeros(1, 1);
    for c in 0..3 {
        b.set(0, 0, c, 65.025f64.sqrt());
    }
    let m = mse(&a, &b).map_err(|e| e.to_string())?;
    let p30 = psnr(&a, &b).map_err(|e| e.to_string())?;
    if (m - 65.025).abs() > 1e-9 || (p30 - 30.0).abs() > 0.001 {
        return Err(format!("mse {m} -> {p30} dB, expected 30 +- 0.001"));
    }

    let (_, img) = &bundled_scenes(64, 64)[0];
    let s = ssim(img, img).map_err(|e| e.to_string())?;
    if s != 1.0 {
        return Err(format!("ssim(identical) = {s}, expected exactly 1"));
    }
    Ok("psnr 0 dB exact, 30.000 dB within 0.001, ssim(identical) = 1".into())
}

/// 6. Conditional paper-number reproduction on the cropped Dataset 1.
fn criterion_dataset1() -> Result<String, String> {
    let root = std::env::var("NLTD_DATASET1")
        .map(PathBuf::from)
        .ok()
        .or_else(|| {
            let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/dataset1");
            p.is_dir().then_some(p)
        });
    let Some(root) = root else {
        return Ok("SKIP: dataset not present (set NLTD_DATASET1 to run)".into());
    };
    let scan = nltd_cli::scan_dataset(&root).map_err(|e| e.to_string())?;
    if scan.pairs.len() < 15 {
        return Err(format!(
            "dataset at {root:?} has {} pairs, expected 15",
            scan.pairs.len()
        ));
    }
    let cfg = DenoiseConfig {
        sigma: 10.0,
        ..DenoiseConfig::default()
    };
    let grid = [4.0, 6.0, 8.0, 10.0, 12.0, 16.0, 20.0];
    let methods = [Method::MsTsvd, Method::Cdct];

    // Fixed-sigma run, then the "best" grid protocol; best may never lose.
    let fixed = nltd_cli::run_benchmark(
        &scan.pairs,
        &methods,
        &cfg,
        None,
        nltd_cli::TimingMode::Suppressed,
    )
    .map_err(|e| e.to_string())?;
    let best = nltd_cli::run_benchmark(
        &scan.pairs,
        &methods,
        &cfg,
        Some(&grid),
        nltd_cli::TimingMode::Suppressed,
    )
    .map_err(|e| e.to_string())?;
    for (f, b) in fixed.rows.iter().zip(&best.rows) {
        if b.psnr_db < f.psnr_db {
            return Err(format!(
                "best protocol scored below fixed sigma on {}",
                f.scene
            ));
        }
    }
    let avg = |run: &nltd_cli::BenchmarkRun, m: Method| {
        run.aggregates
            .iter()
            .find(|a| a.method == m)
            .map(|a| a.psnr_db)
            .unwrap_or(f64::NAN)
    };
    let ms = avg(&best, Method::MsTsvd);
    let cd = avg(&best, Method::Cdct);
    if (ms - 37.95).abs() > 1.0 {
        return Err(format!("MS-TSVD average {ms:.2} dB not within 1.0 of 37.95"));
    }
    if (cd - 37.70).abs() > 1.5 {
        return Err(format!("C-DCT average {cd:.2} dB not within 1.5 of 37.70"));
    }
    Ok(format!("mstsvd {ms:.2} dB, cdct {cd:.2} dB on {} pairs", scan.pairs.len()))
}

/// 7. Resize strategy at 1024x1024: at least 3x faster than full size and
/// still a PSNR improvement at sigma 50.
fn criterion_resize() -> Result<String, String> {
    let clean = nltd_cli::scenes::scene_blobs(1024, 1024);
    let sigma = 50.0;
    let noisy = synth_awgn(&clean, sigma, 11);
    let cfg = DenoiseConfig {
        sigma,
        method: Method::Cdct,
        ..DenoiseConfig::default()
    };

    let t0 = Instant::now();
    let full = denoise(&noisy, &cfg).map_err(|e| e.to_string())?;
    let t_full = t0.elapsed().as_secs_f64();

    let t0 = Instant::now();
    let resized = denoise_resized(&noisy, 0.5, &cfg).map_err(|e| e.to_string())?;
    let t_resized = t0.elapsed().as_secs_f64();

    let base = psnr(&noisy, &clean).map_err(|e| e.to_string())?;
    let p_res = psnr(&resized, &clean).map_err(|e| e.to_string())?;
    let p_full = psnr(&full, &clean).map_err(|e| e.to_string())?;
    if t_full < 3.0 * t_resized {
        return Err(format!(
            "full {t_full:.1} s vs resized {t_resized:.1} s: speedup {:.2}x < 3x",
            t_full / t_resized
        ));
    }
    if p_res <= base {
        return Err(format!("resized PSNR {p_res:.2} dB <= noisy {base:.2} dB"));
    }
    Ok(format!(
        "speedup {:.1}x, noisy {base:.2} -> resized {p_res:.2} dB (full {p_full:.2})",
        t_full / t_resized
    ))
}

/// 8. Determinism: two identical bench CLI runs emit byte-identical CSV.
fn criterion_determinism() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let data = dir.path().join("ds");
    std::fs::create_dir(&data).map_err(|e| e.to_string())?;
    for (name, clean) in bundled_scenes(64, 64) {
        let scene_dir = data.join(name);
        std::fs::create_dir(&scene_dir).map_err(|e| e.to_string())?;
        let noisy = synth_awgn(&clean, 20.0, 3);
        save_png(&scene_dir.join("noisy.png"), &noisy).map_err(|e| e.to_string())?;
        save_png(&scene_dir.join("mean.png"), &clean).map_err(|e| e.to_string())?;
    }

    let run = |out: &std::path::Path| -> Result<Vec<u8>, String> {
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_nltd"))
            .args([
                "bench",
                "--dataset",
                data.to_str().unwrap(),
                "--methods",
                "cdct,mstsvd",
                "--sigma",
                "20",
                "--window",
                "15",
                "--group",
                "8",
                "--timing",
                "none",
                "--report",
                out.to_str().unwrap(),
            ])
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("bench exited with {status}"));
        }
        std::fs::read(out).map_err(|e| e.to_string())
    };
    let a = run(&dir.path().join("a.csv"))?;
    let b = run(&dir.path().join("b.csv"))?;
    if a != b {
        return Err("CSV reports differ between identical runs".into());
    }
    Ok(format!("{} byte reports identical", a.len()))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Result<String, String>); 8] = [
        ("1 identity at sigma 0", criterion_identity),
        ("2 algebra oracles", criterion_algebra),
        ("3 Fourier structure", criterion_fourier),
        ("4 denoising gain", criterion_gain),
        ("5 metric exactness", criterion_metrics),
        ("6 dataset-1 reproduction", criterion_dataset1),
        ("7 resize strategy", criterion_resize),
        ("8 bench determinism", criterion_determinism),
    ];
    let mut failures = Vec::new();
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("[PASS] criterion {name}: {detail}"),
            Err(detail) => {
                println!("[FAIL] criterion {name}: {detail}");
                failures.push(format!("{name}: {detail}"));
            }
        }
    }
    assert!(
        failures.is_empty(),
        "failed acceptance criteria:\n  {}",
        failures.join("\n  ")
    );
}
