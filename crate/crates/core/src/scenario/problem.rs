use super::catalog::{Geometry, ScenarioSpec, Support};
use super::curves::{generate_curve, ParametricCurveSpec};
use super::fixtures::load_fixture;
use super::oracle::{oracle_theta, CantileverOracle};
use crate::dofs::DofVector;
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::loads::{GravityLoad, MagneticLoad};
use crate::model::{ElasticModel, MaterialParams};
use crate::solver::{
    forward_solve, forward_solve_observed, inverse_solve, inverse_solve_observed, ConstraintSet, Loads, SolveReport,
    SolverConfig,
};
use crate::topology::{load_net, NetTopology};

/// Everything needed to run a scenario in either direction.
#[derive(Debug, Clone)]
pub struct Problem {
    pub name: String,
    /// Model seeded from the target configuration.
    pub model: ElasticModel,
    /// Target (deformed) configuration.
    pub dc: DofVector,
    pub loads: Loads,
    /// Prescribed DOFs of the rest shape during the inverse solve.
    pub inverse_constraints: ConstraintSet,
    /// Prescribed DOFs of the deformed shape during the forward solve that
    /// starts from the recovered rest shape.
    pub forward_constraints: ConstraintSet,
    pub config: SolverConfig,
    pub char_length: f64,
}

/// Clamp the first and last edges of an open chain.
fn clamp_ends(topology: &mut NetTopology) {
    let n = topology.node_count;
    let m = topology.edges.len();
    topology.clamped_nodes = vec![0, 1, n - 2, n - 1];
    topology.clamped_edges = vec![0, m - 1];
}

fn clamp_start(topology: &mut NetTopology) {
    topology.clamped_nodes = vec![0, 1];
    topology.clamped_edges = vec![0];
}

/// Translate both clamped ends of a chain apart along its chord.
fn spread_ends(dc: &DofVector, shift: f64) -> DofVector {
    let n = dc.node_count();
    let chord = dc.position(n - 1) - dc.position(0);
    let d = chord * (0.5 * shift);
    let mut uc = dc.clone();
    for i in [0, 1] {
        uc.set_position(i, dc.position(i) - d);
    }
    for i in [n - 2, n - 1] {
        uc.set_position(i, dc.position(i) + d);
    }
    uc
}

/// Build a catalog scenario. `nodes` overrides the curve sampling.
pub fn build_problem(spec: &ScenarioSpec, nodes: Option<usize>) -> Result<Problem> {
    let (mut topology, positions) = match &spec.geometry {
        Geometry::Curve(c) => {
            let c = ParametricCurveSpec {
                sample_count: nodes.unwrap_or(c.sample_count),
                ..c.clone()
            };
            let pts = generate_curve(&c)?;
            (NetTopology::build_chain(&pts)?, pts)
        }
        Geometry::Net(name) => {
            let net = load_fixture(name)?;
            (net.topology, net.positions)
        }
        Geometry::File(path) => {
            let net = load_net(path)?;
            (net.topology, net.positions)
        }
    };
    match spec.support {
        Support::ClampedClamped { .. } => clamp_ends(&mut topology),
        Support::ClampedFree => clamp_start(&mut topology),
        Support::Fixture => {}
    }
    let dc = DofVector::from_positions(&positions, topology.edges.len());
    let material = MaterialParams::circular(spec.modulus, spec.radius, spec.density);
    let model = ElasticModel::new(topology, material, &dc)?;
    let config = SolverConfig {
        dt: spec.dt,
        max_steps: spec.max_steps,
        ..SolverConfig::default()
    };
    let mut loads = Loads::none();
    if let Some(g) = spec.gravity {
        loads.gravity = Some(GravityLoad { g: Vec3::from(g) });
    }
    if let (Some(m), Some(b)) = (spec.magnetization, spec.field_mt) {
        loads.magnetic = Some(MagneticLoad {
            magnetization: vec![Vec3::from(m); model.topology.edges.len()],
            field: Vec3::from(b) * 1e-3,
        });
    }
    let (inverse_constraints, forward_constraints) = match spec.support {
        Support::ClampedClamped { end_shift } => {
            let uc_ends = spread_ends(&dc, end_shift);
            let inv = ConstraintSet::clamp_ramp(&model.topology, &dc, &uc_ends, config.ramp_steps());
            let fwd = inv.reversed();
            (inv, fwd)
        }
        _ => {
            let c = ConstraintSet::clamps(&model.topology, &dc);
            (c.clone(), c)
        }
    };
    Ok(Problem {
        name: spec.name.clone(),
        model,
        dc,
        loads,
        inverse_constraints,
        forward_constraints,
        config,
        char_length: spec.char_length,
    })
}

impl Problem {
    /// The same geometry with no loads and every clamp held in place.
    pub fn unloaded(&self) -> Problem {
        let c = ConstraintSet::clamps(&self.model.topology, &self.dc);
        Problem {
            loads: Loads::none(),
            inverse_constraints: c.clone(),
            forward_constraints: c,
            ..self.clone()
        }
    }

    pub fn inverse(&self) -> Result<(DofVector, SolveReport)> {
        inverse_solve(&self.model, &self.dc, &self.loads, &self.inverse_constraints, &self.config)
    }

    /// Constraints for a forward solve that treats the target geometry as
    /// the rest shape: every prescribed DOF moves from its target value by
    /// the opposite of its inverse-mode displacement.
    pub fn mirrored_constraints(&self) -> ConstraintSet {
        let entries = self
            .inverse_constraints
            .entries
            .iter()
            .map(|(d, s)| (*d, s.mirrored(self.dc.as_slice()[*d])))
            .collect();
        ConstraintSet { entries }
    }

    /// Forward solve from a rest shape with the forward schedule.
    pub fn forward(&self, uc: &DofVector) -> Result<(DofVector, SolveReport)> {
        forward_solve(&self.model, uc, &self.loads, &self.forward_constraints, &self.config)
    }
}

/// Result of an inverse solve followed by a forward solve from its output.
#[derive(Debug, Clone)]
pub struct RoundTrip {
    pub uc: DofVector,
    pub recovered: DofVector,
    pub inverse: SolveReport,
    pub forward: Option<SolveReport>,
    /// Per-node distance between the recovered and target shapes.
    pub node_errors: Vec<f64>,
    pub rms: f64,
}

impl RoundTrip {
    pub fn passed(&self, char_length: f64) -> bool {
        self.inverse.converged()
            && self.forward.as_ref().is_some_and(|f| f.converged())
            && self.rms < 1e-3 * char_length
    }
}

/// Run the inverse solve and, if it converged, the forward check.
pub fn round_trip(problem: &Problem) -> Result<RoundTrip> {
    round_trip_observed(problem, &mut |_, _| {}, &mut |_, _| {})
}

/// [`round_trip`] with per-step observers for each solve.
pub fn round_trip_observed(
    problem: &Problem,
    on_inverse: &mut dyn FnMut(usize, &DofVector),
    on_forward: &mut dyn FnMut(usize, &DofVector),
) -> Result<RoundTrip> {
    let p = problem;
    let (uc, inverse) = inverse_solve_observed(&p.model, &p.dc, &p.loads, &p.inverse_constraints, &p.config, on_inverse)?;
    if !inverse.converged() {
        return Ok(RoundTrip {
            recovered: uc.clone(),
            uc,
            inverse,
            forward: None,
            node_errors: vec![],
            rms: f64::INFINITY,
        });
    }
    let (recovered, forward) =
        forward_solve_observed(&p.model, &uc, &p.loads, &p.forward_constraints, &p.config, on_forward)?;
    let node_errors: Vec<f64> = (0..recovered.node_count())
        .map(|i| (recovered.position(i) - p.dc.position(i)).norm())
        .collect();
    let rms = (node_errors.iter().map(|e| e * e).sum::<f64>() / node_errors.len() as f64).sqrt();
    Ok(RoundTrip {
        uc,
        recovered,
        inverse,
        forward: Some(forward),
        node_errors,
        rms,
    })
}

/// Planar cantilever whose target is straight along +x under gravity −z.
/// The clamped first edge straddles the root, so node `i` sits at
/// `(i − ½)h` with `h = L/(n − 1.5)`.
pub fn cantilever_problem(gamma: f64, nodes: usize) -> Result<(Problem, CantileverOracle)> {
    if nodes < 3 {
        return Err(Error::TooFewNodes(nodes));
    }
    if !(gamma >= 0.0) {
        return Err(Error::OutOfRange(gamma));
    }
    let length = 1.0;
    let material = MaterialParams::circular(1e7, 1e-3 * length, 1e3);
    let h = length / (nodes as f64 - 1.5);
    let pts: Vec<Vec3> = (0..nodes).map(|i| Vec3::new((i as f64 - 0.5) * h, 0.0, 0.0)).collect();
    let mut topology = NetTopology::build_chain(&pts)?;
    clamp_start(&mut topology);
    let dc = DofVector::from_positions(&pts, nodes - 1);
    let g = gamma * material.ei2 / (material.density * material.area() * length.powi(3));
    let model = ElasticModel::new(topology, material, &dc)?;
    let clamps = ConstraintSet::clamps(&model.topology, &dc);
    let problem = Problem {
        name: format!("cantilever_gamma_{gamma}"),
        model,
        dc,
        loads: Loads::gravity(Vec3::new(0.0, 0.0, -g)),
        inverse_constraints: clamps.clone(),
        forward_constraints: clamps,
        config: SolverConfig {
            dt: 1e3,
            max_steps: 60,
            ..SolverConfig::default()
        },
        char_length: length,
    };
    Ok((problem, CantileverOracle { gamma, length }))
}

/// One point of a simulated-versus-closed-form angle comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleSample {
    /// Normalised arclength of the edge midpoint.
    pub s: f64,
    pub simulated: f64,
    pub oracle: f64,
}

/// Rest-shape tangent angles of a cantilever solution at its free edges.
pub fn cantilever_angles(oracle: &CantileverOracle, uc: &DofVector) -> Result<Vec<AngleSample>> {
    let n = uc.node_count();
    let h = oracle.length / (n as f64 - 1.5);
    (1..n - 1)
        .map(|k| {
            let t = uc.position(k + 1) - uc.position(k);
            let s = (k as f64 * h / oracle.length).min(1.0);
            Ok(AngleSample {
                s,
                simulated: t.z.atan2(t.x),
                oracle: oracle_theta(oracle, s)?,
            })
        })
        .collect()
}

/// Max-norm angle error relative to the largest closed-form angle.
pub fn relative_angle_error(samples: &[AngleSample]) -> f64 {
    let scale = samples.iter().map(|a| a.oracle.abs()).fold(0.0, f64::max);
    let err = samples
        .iter()
        .map(|a| (a.simulated - a.oracle).abs())
        .fold(0.0, f64::max);
    if scale > 0.0 {
        err / scale
    } else {
        err
    }
}

/// Clamped-clamped planar arch compressed by `compression` of its rest
/// end-to-end distance. The target is a raised-cosine bump with horizontal
/// clamped ends, 2% longer than the rest chord.
pub fn arch_problem(nodes: usize, compression: f64) -> Result<Problem> {
    if nodes < 5 {
        return Err(Error::TooFewNodes(nodes));
    }
    if !(compression > 0.0 && compression < 1.0) {
        return Err(Error::OutOfRange(compression));
    }
    let rest_chord = 1.0;
    let chord = rest_chord * (1.0 - compression);
    let target_len = 1.02 * rest_chord;
    let shape = |a: f64| -> Vec<Vec3> {
        (0..nodes)
            .map(|i| {
                let x = chord * i as f64 / (nodes - 1) as f64;
                let z = 0.5 * a * (1.0 - (2.0 * std::f64::consts::PI * x / chord).cos());
                Vec3::new(x, 0.0, z)
            })
            .collect()
    };
    let len = |a: f64| crate::scenario::polyline_length(&shape(a));
    let (mut lo, mut hi) = (0.0, chord);
    while len(hi) < target_len {
        hi *= 2.0;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if len(mid) < target_len {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let pts = shape(0.5 * (lo + hi));
    let mut topology = NetTopology::build_chain(&pts)?;
    clamp_ends(&mut topology);
    let dc = DofVector::from_positions(&pts, nodes - 1);
    let material = MaterialParams::circular(1e7, 5e-3, 1e3);
    let model = ElasticModel::new(topology, material, &dc)?;
    let config = SolverConfig {
        dt: 1e3,
        max_steps: 80,
        ..SolverConfig::default()
    };
    let shift = rest_chord / chord - 1.0;
    let uc_ends = spread_ends(&dc, shift);
    let inverse_constraints = ConstraintSet::clamp_ramp(&model.topology, &dc, &uc_ends, config.ramp_steps());
    let forward_constraints = inverse_constraints.reversed();
    Ok(Problem {
        name: format!("arch_{compression}"),
        model,
        dc,
        loads: Loads::none(),
        inverse_constraints,
        forward_constraints,
        config,
        char_length: target_len,
    })
}
