//! Seeding k-Means for functional data.
//!
//! Curves are smoothed with least-squares B-splines and resampled; seeds come
//! from bootstrap k-Means runs whose centroids are grouped with PAM, each group
//! contributing its Modified Band Depth median. Forgy and k-Means++ seeding,
//! coefficient-space variants, simulated benchmark models and evaluation
//! measures are included for comparison.

pub mod bench;
pub mod bspline;
pub mod cluster;
pub mod depth;
pub mod error;
pub mod eval;
pub mod mask;
pub mod matrix;
pub mod pipeline;
pub mod rng;

pub use error::{FabrikError, Result};
pub use mask::Mask;
pub use matrix::Matrix;
pub use rng::RngStream;
