//! Method-of-lines simulation: second differences with ghost-node boundary
//! closures in space, Crank-Nicolson diffusion with an explicit reaction in
//! time.

mod operator;
mod scenario;
mod stepper;

pub use operator::{assemble_diffusion, DiffusionOperator};
pub use scenario::{default_dt, simulate, InitialCondition, Scenario, Trace, DIRICHLET_COMPAT_TOL};
pub use stepper::{spatial_gradient, step_imex};
