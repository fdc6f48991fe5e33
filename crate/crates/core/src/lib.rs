//! Numerical laboratory for Hermitian random-matrix ensembles and their
//! combinatorial and Brownian representations.
//!
//! The crate is organised around five layers:
//!
//! * [`linalg`]: Hermitian matrices and a self-contained eigenvalue solver.
//! * [`ensembles`]: seeded GUE/LUE samplers, matrix-valued Brownian paths and
//!   log-densities.
//! * [`lpp_rsk`]: last-passage percolation, the RSK correspondence and exact
//!   tableau counting.
//! * [`pathfun`]: discretised Brownian bundles, the multi-path percolation
//!   functionals and the `⊗`/`⊙` path transformation.
//! * [`stats`]: empirical distributions and Kolmogorov–Smirnov tests.
//!
//! The numerical core is generic over the scalar type through [`Real`]; the
//! aliases below fix the common `f64` instantiations.

pub mod ensembles;
pub mod error;
pub mod linalg;
pub mod lpp_rsk;
pub mod pathfun;
pub mod rng;
pub mod scalar;
pub mod stats;

pub use error::{Error, Result};
pub use linalg::{eigenvalues_sorted, sum_top_k, HermitianMatrix, Spectrum};
pub use lpp_rsk::{IncrementGrid, Partition, TableauPair, WeightGrid};
pub use pathfun::DiscretePathBundle;
pub use rng::{RngStream, StreamRng};
pub use scalar::Real;
pub use stats::{EmpiricalSample, KsResult, Moments};

/// Double-precision Hermitian matrix.
pub type Hermitian = HermitianMatrix<f64>;
/// Single-precision Hermitian matrix.
pub type Hermitian32 = HermitianMatrix<f32>;
/// Double-precision sorted spectrum.
pub type Spectrum64 = Spectrum<f64>;
/// Real (exponential, continuous) weight grid.
pub type RealGrid = WeightGrid<f64>;
/// Nonnegative integer weight grid, the input of RSK.
pub type IntGrid = WeightGrid<u64>;
/// Double-precision path bundle.
pub type PathBundle = DiscretePathBundle<f64>;
