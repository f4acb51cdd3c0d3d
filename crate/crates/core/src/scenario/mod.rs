//! Target curves, net fixtures, the tabulated cases and the closed-form
//! cantilever.

mod catalog;
mod curves;
pub mod fixtures;
mod oracle;
mod problem;

pub use catalog::{find_scenario, scenario_catalog, Geometry, ScenarioSpec, Support};
pub use curves::{generate_curve, polyline_length, CurveKind, ParametricCurveSpec};
pub use fixtures::{bounding_diameter, load_fixture, net_from_graph};
pub use oracle::{max_gamma, oracle_shape, oracle_theta, CantileverOracle};
pub use problem::{
    arch_problem, build_problem, cantilever_angles, cantilever_problem, relative_angle_error, round_trip,
    round_trip_observed, AngleSample, Problem, RoundTrip,
};
