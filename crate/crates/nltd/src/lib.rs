//! Nonlocal transform-domain color image denoising.
//!
//! The pipeline follows the classic three steps — group similar patches,
//! filter the group jointly in a transform domain, aggregate the filtered
//! patches back — with three interchangeable collaborative filters:
//!
//! * [`config::Method::Hosvd4d`]: a learned 4D HOSVD; every mode transform
//!   (rows, columns, color, group) is trained per group by SVD of the
//!   corresponding unfolding, and the core is hard-thresholded.
//! * [`config::Method::MsTsvd`]: the circulant coupling of the R/G/B
//!   channels is diagonalized by a 3-point Fourier transform; the group
//!   transform is learned from luminance alone and each Fourier channel gets
//!   its own patch-level HOSVD. Conjugate symmetry lets the third channel be
//!   reconstructed for free.
//! * [`config::Method::Cdct`]: fixed opponent-color and DCT-II transforms
//!   with per-channel threshold scaling.
//!
//! Supporting modules provide the dense tensor algebra (unfolding, mode
//! products, Jacobi SVD), bicubic resizing for the downsize-denoise-upsize
//! strategy, and PSNR/SSIM quality metrics.

pub mod color;
pub mod config;
pub mod dct;
pub mod error;
pub mod filters;
pub mod hosvd;
pub mod image;
pub mod metrics;
pub mod patch;
pub mod pipeline;
pub mod resize;
pub mod scalar;
pub mod svd;
pub mod tensor;

pub use config::{DenoiseConfig, Method, Weighting};
pub use num_complex::Complex64;
pub use error::{Error, Result};
pub use image::{Image, Plane};
pub use pipeline::{denoise, denoise_resized};
pub use tensor::{ComplexMatrix, ComplexTensor, Matrix, Tensor};
