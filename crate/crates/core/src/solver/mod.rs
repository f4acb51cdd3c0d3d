//! Implicit time stepping, dynamic relaxation and the two solve drivers.

mod config;
mod constraints;
mod linear;
mod mechanics;
mod relax;
mod report;

pub use config::SolverConfig;
pub use constraints::{ConstraintSet, Schedule};
pub use linear::SparseLu;
pub use mechanics::{Evaluation, ForwardMechanics, InverseMechanics, Loads, Mechanics};
pub use relax::{
    forward_solve, forward_solve_observed, inverse_solve, inverse_solve_observed, relax_observed, relax_to_statics,
    relaxation_tolerance, State, StepStats, Stepper,
};
pub use report::{energy_profile, EnergyProfile, SolveReport, StepRecord, Termination};

#[cfg(test)]
mod tests;
