//! Command-line interface: `denoise`, `bench` and `synth` subcommands.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O error, 3 numerical failure.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use nltd::{DenoiseConfig, Method, Weighting};
use nltd_cli::bench::{run_benchmark, write_report, TimingMode};
use nltd_cli::dataset::scan_dataset;
use nltd_cli::error::{HarnessError, Result};
use nltd_cli::noise::synth_awgn;
use nltd_cli::pngio::{load_png, save_png};
use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "nltd",
    about = "Nonlocal transform-domain color image denoising",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Denoise a PNG image.
    Denoise(DenoiseArgs),
    /// Benchmark methods over a dataset of noisy/ground-truth pairs.
    Bench(BenchArgs),
    /// Add synthetic Gaussian noise to a clean PNG.
    Synth(SynthArgs),
}

/// Pipeline options shared by subcommands. Unset flags fall back to the
/// config file (if given), then to the built-in defaults shown in brackets.
#[derive(Args, Debug, Default)]
struct PipelineOpts {
    /// Filter: mstsvd, hosvd4d or cdct [mstsvd]
    #[arg(long)]
    method: Option<String>,
    /// Noise standard deviation on the 0..255 scale [25]
    #[arg(long)]
    sigma: Option<f64>,
    /// Patch size in pixels [8]
    #[arg(long)]
    patch: Option<usize>,
    /// Search window side in pixels [39]
    #[arg(long)]
    window: Option<usize>,
    /// Similar patches per group [32]
    #[arg(long)]
    group: Option<usize>,
    /// Reference stride in pixels [4]
    #[arg(long)]
    step: Option<usize>,
    /// Hard-threshold multiplier [1.0]
    #[arg(long)]
    lambda: Option<f64>,
    /// Downscale factor in (0,1): denoise small, upscale back [off]
    #[arg(long)]
    resize: Option<f64>,
    /// Aggregation weighting: uniform or inverse-retained [uniform]
    #[arg(long)]
    weighting: Option<String>,
    /// key=value config file; flags override file entries
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct DenoiseArgs {
    #[command(flatten)]
    opts: PipelineOpts,
    /// Input PNG
    input: PathBuf,
    /// Output PNG
    output: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Dataset root: <root>/<scene>/{noisy,mean}.png or flat *_real/_mean pairs
    #[arg(long)]
    dataset: PathBuf,
    /// Comma-separated method list, e.g. mstsvd,cdct
    #[arg(long)]
    methods: String,
    /// Optional comma-separated sigma tuning grid; the per-image best-PSNR
    /// sigma is reported
    #[arg(long = "sigma-grid")]
    sigma_grid: Option<String>,
    /// CSV report path
    #[arg(long)]
    report: PathBuf,
    /// Optional Markdown report path
    #[arg(long)]
    markdown: Option<PathBuf>,
    /// wall: measure denoise time; none: write zeros for byte-reproducible
    /// reports [wall]
    #[arg(long, default_value = "wall")]
    timing: String,
    #[command(flatten)]
    opts: PipelineOpts,
}

#[derive(Args)]
struct SynthArgs {
    /// Noise standard deviation
    #[arg(long)]
    sigma: f64,
    /// RNG seed (the seed-to-stream mapping is stable across releases)
    #[arg(long)]
    seed: u64,
    /// Clean input PNG
    input: PathBuf,
    /// Noisy output PNG
    output: PathBuf,
}

fn parse_config_file(path: &PathBuf) -> Result<HashMap<String, String>> {
    let text = std::fs::read_to_string(path)?;
    let mut map = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            HarnessError::Usage(format!(
                "{}:{}: expected key=value, got '{line}'",
                path.display(),
                lineno + 1
            ))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse::<T>()
        .map_err(|_| HarnessError::Usage(format!("invalid value '{value}' for {key}")))
}

/// Merge flags over config-file entries over defaults.
fn build_config(opts: &PipelineOpts) -> Result<DenoiseConfig> {
    let file = match &opts.config {
        Some(path) => parse_config_file(path)?,
        None => HashMap::new(),
    };
    const KNOWN: [&str; 9] = [
        "method",
        "sigma",
        "patch",
        "window",
        "group",
        "step",
        "lambda",
        "resize",
        "weighting",
    ];
    for key in file.keys() {
        if !KNOWN.contains(&key.as_str()) {
            return Err(HarnessError::Usage(format!("unknown config key '{key}'")));
        }
    }

    let mut cfg = DenoiseConfig::default();
    let pick_str = |flag: &Option<String>, key: &str| -> Option<String> {
        flag.clone().or_else(|| file.get(key).cloned())
    };

    if let Some(m) = pick_str(&opts.method, "method") {
        cfg.method = Method::parse(&m).map_err(|e| HarnessError::Usage(e.to_string()))?;
    }
    if let Some(v) = merge_num(opts.sigma, &file, "sigma")? {
        cfg.sigma = v;
    }
    if let Some(v) = merge_num(opts.patch, &file, "patch")? {
        cfg.patch_size = v;
    }
    if let Some(v) = merge_num(opts.window, &file, "window")? {
        cfg.search_window = v;
    }
    if let Some(v) = merge_num(opts.group, &file, "group")? {
        cfg.group_size = v;
    }
    if let Some(v) = merge_num(opts.step, &file, "step")? {
        cfg.step = v;
    }
    if let Some(v) = merge_num(opts.lambda, &file, "lambda")? {
        cfg.lambda = v;
    }
    if let Some(v) = merge_num(opts.resize, &file, "resize")? {
        cfg.resize = Some(v);
    }
    if let Some(w) = pick_str(&opts.weighting, "weighting") {
        cfg.weighting = match w.as_str() {
            "uniform" => Weighting::Uniform,
            "inverse-retained" => Weighting::InverseRetained,
            other => {
                return Err(HarnessError::Usage(format!(
                    "unknown weighting '{other}' (expected uniform or inverse-retained)"
                )))
            }
        };
    }
    cfg.validate()
        .map_err(|e| HarnessError::Usage(e.to_string()))?;
    Ok(cfg)
}

fn merge_num<T: std::str::FromStr + Copy>(
    flag: Option<T>,
    file: &HashMap<String, String>,
    key: &str,
) -> Result<Option<T>> {
    if let Some(v) = flag {
        return Ok(Some(v));
    }
    match file.get(key) {
        Some(s) => Ok(Some(parse_num::<T>(key, s)?)),
        None => Ok(None),
    }
}

fn parse_methods(list: &str) -> Result<Vec<Method>> {
    let mut out = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        out.push(Method::parse(name).map_err(|e| HarnessError::Usage(e.to_string()))?);
    }
    if out.is_empty() {
        return Err(HarnessError::Usage("empty method list".into()));
    }
    Ok(out)
}

fn parse_grid(list: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for tok in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let v: f64 = parse_num("sigma-grid", tok)?;
        if !(v >= 0.0) {
            return Err(HarnessError::Usage(format!("negative sigma {v} in grid")));
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err(HarnessError::Usage("empty sigma grid".into()));
    }
    Ok(out)
}

fn cmd_denoise(args: &DenoiseArgs) -> Result<()> {
    let cfg = build_config(&args.opts)?;
    let input = load_png(&args.input)?;
    let output = nltd::denoise(&input, &cfg)?;
    save_png(&args.output, &output)?;
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> Result<()> {
    let cfg = build_config(&args.opts)?;
    let methods = parse_methods(&args.methods)?;
    let grid = args.sigma_grid.as_deref().map(parse_grid).transpose()?;
    let timing = match args.timing.as_str() {
        "wall" => TimingMode::Wall,
        "none" => TimingMode::Suppressed,
        other => {
            return Err(HarnessError::Usage(format!(
                "unknown timing mode '{other}' (expected wall or none)"
            )))
        }
    };
    let scan = scan_dataset(&args.dataset)?;
    for w in &scan.warnings {
        eprintln!("warning: {w}");
    }
    let run = run_benchmark(&scan.pairs, &methods, &cfg, grid.as_deref(), timing)?;
    for f in &run.failures {
        eprintln!("scene failure: {f}");
    }
    write_report(&run, &args.report, args.markdown.as_deref())?;
    for a in &run.aggregates {
        println!(
            "{}: avg psnr {:.2} dB, avg ssim {:.4}, avg {:.2} s over {} scenes",
            a.method.name(),
            a.psnr_db,
            a.ssim,
            a.seconds,
            run.rows.iter().filter(|r| r.method == a.method).count()
        );
    }
    Ok(())
}

fn cmd_synth(args: &SynthArgs) -> Result<()> {
    if args.sigma < 0.0 {
        return Err(HarnessError::Usage("sigma must be >= 0".into()));
    }
    let clean = load_png(&args.input)?;
    let noisy = synth_awgn(&clean, args.sigma, args.seed);
    save_png(&args.output, &noisy)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let result = match &cli.cmd {
        Cmd::Denoise(a) => cmd_denoise(a),
        Cmd::Bench(a) => cmd_bench(a),
        Cmd::Synth(a) => cmd_synth(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
