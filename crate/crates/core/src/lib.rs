//! Steady-state entanglement of a cavity magnomechanical system.
//!
//! A microwave cavity mode, a magnon (Kittel) mode of a YIG sphere and a
//! mechanical mode of the same sphere are described by linearized quantum
//! Langevin equations. The steady-state covariance matrix follows from a
//! Lyapunov equation, and the crate quantifies bipartite entanglement by the
//! logarithmic negativity and genuine tripartite entanglement by the minimum
//! residual contangle.
//!
//! * [`linalg`]: dense eigenvalues, linear solves and the Lyapunov solver.
//! * [`model`]: parameters, mean fields, drift and diffusion matrices.
//! * [`gaussian`]: covariance matrices and entanglement measures.
//! * [`sweep`]: pipeline evaluation over parameter grids and figure presets.

pub mod gaussian;
pub mod linalg;
pub mod model;
pub mod sweep;

pub use gaussian::{CovarianceMatrix, Mode, ModePartition};
pub use linalg::{ComplexMatrix, RealMatrix};
pub use model::{Coupling, DerivedState, PhysicalDrive, SystemParams};
pub use sweep::{evaluate_point, run_sweep, Execution, SweepResult, SweepSpec};
