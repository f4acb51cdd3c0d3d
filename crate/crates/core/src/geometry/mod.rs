//! Discrete differential geometry of polyline rods.

mod frames;
pub mod kernel;
mod strain;
mod v3;

pub use frames::{
    edge_tangents, parallel_transport, reference_twist, seed_director, update_reference_frames, FrameSeed,
    FrameSet,
};
pub use kernel::{DELTA_KB, DELTA_PAR};
pub use strain::{
    compute_strain_state, curvature_binormal, material_curvatures, stretch_strain, twist_strain,
    StrainState,
};
pub use v3::V3;

/// Three-vector used throughout the public API.
pub type Vec3 = nalgebra::Vector3<f64>;
