//! Executable checks: the trace inequalities behind the energy estimate,
//! trajectory-versus-bound comparison, decay-rate fits and grid
//! convergence.

mod convergence;
mod lemmas;
mod trajectory;

pub use convergence::{convergence_study, ConvergenceReport, ConvergenceRow, ManufacturedSolution};
pub use lemmas::{
    boundary_gradient_bounds_check, lemma2_check, lemma3_check, random_test_function,
    run_lemma_suite, Lemma2Mode, LemmaStat, LemmaSuiteReport, TestFunction, TestKind, LEMMA_PANELS,
    LEMMA_SLACK_TOL, VANISHING_TOL,
};
pub use trajectory::{measure_decay_rate, verify_iss_trajectory, IssReport, IssSample, Tolerances};

#[cfg(test)]
mod tests;
