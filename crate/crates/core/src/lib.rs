//! Forward and inverse discrete elastic rods.
//!
//! The forward problem finds the deformed shape of a rod or rod network
//! from its rest shape, loads and boundary conditions. The inverse problem
//! finds the rest shape that deforms into a prescribed target shape. Both
//! share one discrete energy and one implicit time stepper.

pub mod autodiff;
pub mod bench;
pub mod dofs;
pub mod error;
pub mod export;
pub mod geometry;
pub mod loads;
pub mod model;
pub mod scenario;
pub mod solver;
pub mod topology;

pub use dofs::DofVector;
pub use error::{Error, Result};
pub use geometry::{FrameSeed, FrameSet, StrainState, Vec3};
pub use model::{DcStencils, ElasticModel, EnergyParts, MaterialParams, NaturalStrains, SparseMatrix};
pub use topology::{Bend, ElementMaps, Net, NetTopology};
pub use loads::{GravityLoad, InertiaModel, MagneticLoad};
pub use solver::{
    energy_profile, forward_solve, inverse_solve, relax_to_statics, ConstraintSet, Loads, Schedule, SolveReport,
    SolverConfig, Termination,
};
