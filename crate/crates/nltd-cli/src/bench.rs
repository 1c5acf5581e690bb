//! Benchmark execution and report emission.
//!
//! For every scene x method the noisy image is denoised (optionally once per
//! sigma in a tuning grid, keeping the best-PSNR run), scored against the
//! ground truth, and timed. Reports are emitted as CSV (machine) and
//! Markdown (human, with the best aggregate per column bolded).

use crate::dataset::ScenePair;
use crate::error::{HarnessError, Result};
use crate::pngio::load_png;
use nltd::metrics::{psnr, ssim};
use nltd::{denoise, DenoiseConfig, Image, Method};
use std::path::Path;
use std::time::Instant;

/// Whether reported seconds come from the wall clock or are suppressed
/// (written as zero) for byte-reproducible reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimingMode {
    #[default]
    Wall,
    Suppressed,
}

#[derive(Debug, Clone)]
pub struct ScoreRow {
    pub scene: String,
    pub camera: String,
    pub method: Method,
    /// Sigma actually used (the grid winner under the "best" protocol).
    pub sigma: f64,
    pub psnr_db: f64,
    pub ssim: f64,
    pub seconds: f64,
}

#[derive(Debug, Clone)]
pub struct AggregateRow {
    pub method: Method,
    pub psnr_db: f64,
    pub ssim: f64,
    pub seconds: f64,
}

#[derive(Debug, Default)]
pub struct BenchmarkRun {
    pub rows: Vec<ScoreRow>,
    pub aggregates: Vec<AggregateRow>,
    /// Per-scene failures; the run continues past them.
    pub failures: Vec<String>,
}

/// Denoise one image at one sigma and score it.
fn score_once(
    noisy: &Image,
    gt: &Image,
    cfg: &DenoiseConfig,
    timing: TimingMode,
) -> Result<(f64, f64, f64)> {
    let t0 = Instant::now();
    let out = denoise(noisy, cfg)?;
    let secs = match timing {
        TimingMode::Wall => t0.elapsed().as_secs_f64(),
        TimingMode::Suppressed => 0.0,
    };
    Ok((psnr(&out, gt)?, ssim(&out, gt)?, secs))
}

/// Run the benchmark over `pairs` x `methods`.
///
/// With `sigma_grid` set, each image/method is denoised once per grid value
/// and the best-PSNR run is reported (ties keep the earliest grid entry), so
/// the reported score can never fall below any fixed grid member.
pub fn run_benchmark(
    pairs: &[ScenePair],
    methods: &[Method],
    base_cfg: &DenoiseConfig,
    sigma_grid: Option<&[f64]>,
    timing: TimingMode,
) -> Result<BenchmarkRun> {
    if pairs.is_empty() {
        return Err(HarnessError::Usage("no scene pairs to benchmark".into()));
    }
    if methods.is_empty() {
        return Err(HarnessError::Usage("no methods selected".into()));
    }
    let mut run = BenchmarkRun::default();

    for pair in pairs {
        let loaded = (|| -> Result<(Image, Image)> {
            Ok((load_png(&pair.noisy)?, load_png(&pair.ground_truth)?))
        })();
        let (noisy, gt) = match loaded {
            Ok(v) => v,
            Err(e) => {
                run.failures.push(format!("{}: {e}", pair.scene));
                continue;
            }
        };

        for &method in methods {
            let sigmas: Vec<f64> = match sigma_grid {
                Some(grid) => grid.to_vec(),
                None => vec![base_cfg.sigma],
            };
            let mut best: Option<ScoreRow> = None;
            let mut failed = false;
            for &sigma in &sigmas {
                let cfg = DenoiseConfig {
                    sigma,
                    method,
                    ..base_cfg.clone()
                };
                match score_once(&noisy, &gt, &cfg, timing) {
                    Ok((p, s, secs)) => {
                        let better = best.as_ref().map_or(true, |b| p > b.psnr_db);
                        if better {
                            best = Some(ScoreRow {
                                scene: pair.scene.clone(),
                                camera: pair.camera.clone(),
                                method,
                                sigma,
                                psnr_db: p,
                                ssim: s,
                                seconds: secs,
                            });
                        }
                    }
                    Err(e) => {
                        run.failures
                            .push(format!("{} / {}: {e}", pair.scene, method.name()));
                        failed = true;
                        break;
                    }
                }
            }
            if failed {
                continue;
            }
            if let Some(row) = best {
                run.rows.push(row);
            }
        }
    }

    for &method in methods {
        let rows: Vec<&ScoreRow> = run.rows.iter().filter(|r| r.method == method).collect();
        if rows.is_empty() {
            continue;
        }
        let n = rows.len() as f64;
        run.aggregates.push(AggregateRow {
            method,
            psnr_db: rows.iter().map(|r| r.psnr_db).sum::<f64>() / n,
            ssim: rows.iter().map(|r| r.ssim).sum::<f64>() / n,
            seconds: rows.iter().map(|r| r.seconds).sum::<f64>() / n,
        });
    }
    Ok(run)
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Machine-readable CSV: one row per scene x method plus an `average` row
/// per method.
pub fn emit_csv(run: &BenchmarkRun) -> String {
    let mut out = String::from("scene,camera,method,sigma,psnr_db,ssim,seconds\n");
    for r in &run.rows {
        out.push_str(&format!(
            "{},{},{},{:.6},{:.6},{:.6},{:.6}\n",
            csv_field(&r.scene),
            csv_field(&r.camera),
            r.method.name(),
            r.sigma,
            r.psnr_db,
            r.ssim,
            r.seconds
        ));
    }
    for a in &run.aggregates {
        out.push_str(&format!(
            "average,,{},,{:.6},{:.6},{:.6}\n",
            a.method.name(),
            a.psnr_db,
            a.ssim,
            a.seconds
        ));
    }
    out
}

fn bold_if(s: String, cond: bool) -> String {
    if cond {
        format!("**{s}**")
    } else {
        s
    }
}

/// Human-readable Markdown report; in the averages table the best method per
/// column (highest PSNR/SSIM, lowest time) is bolded.
pub fn emit_markdown(run: &BenchmarkRun) -> String {
    let mut out = String::from("# Denoising benchmark\n\n");
    out.push_str("| scene | camera | method | sigma | psnr (dB) | ssim | seconds |\n");
    out.push_str("|---|---|---|---:|---:|---:|---:|\n");
    for r in &run.rows {
        out.push_str(&format!(
            "| {} | {} | {} | {:.2} | {:.2} | {:.4} | {:.2} |\n",
            r.scene,
            r.camera,
            r.method.name(),
            r.sigma,
            r.psnr_db,
            r.ssim,
            r.seconds
        ));
    }
    out.push_str("\n## Averages\n\n");
    out.push_str("| method | psnr (dB) | ssim | seconds |\n");
    out.push_str("|---|---:|---:|---:|\n");
    let best_psnr = run
        .aggregates
        .iter()
        .map(|a| a.psnr_db)
        .fold(f64::NEG_INFINITY, f64::max);
    let best_ssim = run
        .aggregates
        .iter()
        .map(|a| a.ssim)
        .fold(f64::NEG_INFINITY, f64::max);
    let best_secs = run
        .aggregates
        .iter()
        .map(|a| a.seconds)
        .fold(f64::INFINITY, f64::min);
    for a in &run.aggregates {
        out.push_str(&format!(
            "| {} | {} | {} | {} |\n",
            a.method.name(),
            bold_if(format!("{:.2}", a.psnr_db), a.psnr_db == best_psnr),
            bold_if(format!("{:.4}", a.ssim), a.ssim == best_ssim),
            bold_if(format!("{:.2}", a.seconds), a.seconds == best_secs),
        ));
    }
    if !run.failures.is_empty() {
        out.push_str("\n## Failures\n\n");
        for f in &run.failures {
            out.push_str(&format!("- {f}\n"));
        }
    }
    out
}

/// Write the CSV report (and optional Markdown) to disk.
pub fn write_report(run: &BenchmarkRun, csv_path: &Path, md_path: Option<&Path>) -> Result<()> {
    std::fs::write(csv_path, emit_csv(run))?;
    if let Some(md) = md_path {
        std::fs::write(md, emit_markdown(run))?;
    }
    Ok(())
}
