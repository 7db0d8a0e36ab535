//! Volume ratios of cevian sub-simplices in an n-simplex and the interior
//! point maximizing the partial sum `(V_1 + ... + V_k) / V`.
//!
//! - [`simplex`]: cevian feet, per-index ratios by a product formula and by
//!   a determinant, and the objective `F_k = G_k * H_k`.
//! - [`optimum`]: the one-variable reduction, its cubic `q(x)` and a
//!   certified solve for the maximizer.
//! - [`oracle`]: independent brute-force checks.
//! - [`search`]: exact search for rational zeros of `q(x)`.

pub mod error;
pub mod optimum;
pub mod oracle;
pub mod scalar;
pub mod search;
pub mod simplex;

pub use error::{Error, Result};
pub use optimum::{solve_theta, CubicPoly, OptimumResult, SolveMethod};
pub use scalar::Scalar;
pub use simplex::{BarycentricPoint, CevianConfig, RatioBreakdown};
