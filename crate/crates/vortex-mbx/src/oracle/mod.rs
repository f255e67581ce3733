//! Independent numerical ground truth: a Runge-Kutta integrator for the
//! propagation pair and a dense steady-state solver for the full density
//! matrix. Tests certify every closed form against these.

mod liouvillian;
mod ode;

pub use liouvillian::{steady_state_rho, DensityMatrix};
pub use ode::{integrate_propagation, OdeTrajectory};
