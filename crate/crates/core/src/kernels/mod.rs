//! Numerical primitives shared by the spectral modules.

pub mod eigen;
pub mod fit;
pub mod ode;
pub mod quadrature;
pub mod roots;

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, HermitianEigen, HermitianMatrix};
pub use fit::{fit_log_slope, max_min_ratio, LogFit};
pub use ode::{integrate_ode, monodromy, Monodromy, OdeState};
pub use quadrature::{adaptive_simpson, adaptive_simpson_real, Quadrature};
pub use roots::{find_root, find_root_with, golden_max};
