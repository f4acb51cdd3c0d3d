use super::kernel::{self, BendSeed, EdgeSeed};
use super::v3::V3;
use super::Vec3;
use crate::dofs::DofVector;
use crate::error::{Error, Result};
use crate::topology::NetTopology;
use std::f64::consts::PI;

/// Transport `a` along the minimal rotation taking `t1` to `t2`.
pub fn parallel_transport(a: &Vec3, t1: &Vec3, t2: &Vec3) -> Result<Vec3> {
    kernel::transport(V3::<f64>::cst(a), V3::cst(t1), V3::cst(t2)).map(|v| v.value())
}

/// Signed angle from `P_{t1→t2}(u1)` to `u2` about `t2`, in `(−π, π]`.
pub fn reference_twist(u1: &Vec3, u2: &Vec3, t1: &Vec3, t2: &Vec3) -> Result<f64> {
    let phi = kernel::twist_angle(V3::<f64>::cst(u1), V3::cst(u2), V3::cst(t1), V3::cst(t2))?;
    Ok(if phi <= -PI { PI } else { phi })
}

/// Reference director for a tangent: the global axis least aligned with
/// `t`, projected onto the normal plane and normalised.
pub fn seed_director(t: &Vec3) -> Vec3 {
    let axes = [Vec3::x(), Vec3::y(), Vec3::z()];
    let mut best = 0;
    for k in 1..3 {
        if t[k].abs() < t[best].abs() {
            best = k;
        }
    }
    let a = axes[best];
    (a - t * t.dot(&a)).normalize()
}

/// Per-edge reference and material frames.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSet {
    pub u: Vec<Vec3>,
    pub v: Vec<Vec3>,
    pub t: Vec<Vec3>,
    pub m1: Vec<Vec3>,
    pub m2: Vec<Vec3>,
}

impl FrameSet {
    /// Seed frames for the given unit tangents with zero twist.
    pub fn seed(tangents: &[Vec3]) -> Self {
        let u: Vec<Vec3> = tangents.iter().map(seed_director).collect();
        let v: Vec<Vec3> = tangents.iter().zip(&u).map(|(t, u)| t.cross(u)).collect();
        Self {
            m1: u.clone(),
            m2: v.clone(),
            u,
            v,
            t: tangents.to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Rotate the reference frames by the twist angles into material frames.
    pub fn with_twist(mut self, thetas: &[f64]) -> Self {
        for k in 0..self.t.len() {
            let (m1, m2) = kernel::material_frame(
                V3::<f64>::cst(&self.u[k]),
                V3::cst(&self.t[k]),
                thetas[k],
            );
            self.m1[k] = m1.value();
            self.m2[k] = m2.value();
        }
        self
    }
}

/// Transport the initial frames onto new tangents. Material directors of
/// the result carry zero twist; apply [`FrameSet::with_twist`] afterwards.
pub fn update_reference_frames(initial: &FrameSet, current_tangents: &[Vec3]) -> Result<FrameSet> {
    if current_tangents.len() != initial.len() {
        return Err(Error::DimensionMismatch {
            expected: initial.len(),
            got: current_tangents.len(),
        });
    }
    let mut u = Vec::with_capacity(initial.len());
    let mut v = Vec::with_capacity(initial.len());
    for (k, t) in current_tangents.iter().enumerate() {
        let t0 = &initial.t[k];
        u.push(parallel_transport(&initial.u[k], t0, t)?);
        v.push(parallel_transport(&initial.v[k], t0, t)?);
    }
    Ok(FrameSet {
        m1: u.clone(),
        m2: v.clone(),
        u,
        v,
        t: current_tangents.to_vec(),
    })
}

/// The time-zero frame seed every configuration of a solve is measured
/// against: initial per-edge frames plus per-bend transport data.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSeed {
    pub initial: FrameSet,
    pub bends: Vec<BendSeed>,
}

impl FrameSeed {
    /// Build the seed from a configuration (normally the DC).
    pub fn new(topology: &NetTopology, dofs: &DofVector) -> Result<Self> {
        let tangents = edge_tangents(topology, dofs)?;
        let initial = FrameSet::seed(&tangents);
        let mut bends = Vec::with_capacity(topology.bends.len());
        for (b, bend) in topology.bends.iter().enumerate() {
            let sa = f64::from(bend.sign_i);
            let sb = f64::from(bend.sign_j);
            let a = EdgeSeed {
                t0: initial.t[bend.edge_i] * sa,
                u0: initial.u[bend.edge_i],
                sign: sa,
            };
            let bb = EdgeSeed {
                t0: initial.t[bend.edge_j] * sb,
                u0: initial.u[bend.edge_j],
                sign: sb,
            };
            let offset = reference_twist(&a.u0, &bb.u0, &a.t0, &bb.t0)
                .map_err(|e| e.at_bend(b))?;
            bends.push(BendSeed {
                a,
                b: bb,
                twist_offset: offset,
            });
        }
        Ok(Self { initial, bends })
    }

    /// Material frames of a configuration measured against this seed.
    pub fn frames(&self, topology: &NetTopology, dofs: &DofVector) -> Result<FrameSet> {
        let tangents = edge_tangents(topology, dofs)?;
        Ok(update_reference_frames(&self.initial, &tangents)?.with_twist(dofs.thetas()))
    }
}

/// Unit tangents of every stored edge.
pub fn edge_tangents(topology: &NetTopology, dofs: &DofVector) -> Result<Vec<Vec3>> {
    topology
        .edges
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| {
            let e = dofs.position(b) - dofs.position(a);
            let l = e.norm();
            if !(l > 0.0) {
                return Err(Error::DegenerateEdge(k));
            }
            Ok(e / l)
        })
        .collect()
}
