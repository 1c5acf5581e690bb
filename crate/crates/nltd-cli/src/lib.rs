//! Benchmark harness for the nltd denoiser: dataset ingestion, synthetic
//! noise and ground-truth generation, benchmark execution and reporting.

pub mod bench;
pub mod dataset;
pub mod error;
pub mod noise;
pub mod pngio;
pub mod scenes;

pub use bench::{emit_csv, emit_markdown, run_benchmark, BenchmarkRun, TimingMode};
pub use dataset::{mean_ground_truth, scan_dataset, ScenePair};
pub use error::{HarnessError, Result};
pub use noise::synth_awgn;
pub use pngio::{load_png, save_png};
