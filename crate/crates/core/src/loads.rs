//! External fields and lumped inertia.

use crate::autodiff::{Dual, Jet, Real};
use crate::dofs::DofVector;
use crate::error::{Error, Result};
use crate::geometry::kernel::{material_frame, transport};
use crate::geometry::{FrameSeed, FrameSet, V3, Vec3};
use crate::model::{MaterialParams, SparseMatrix};
use crate::topology::NetTopology;

/// Uniform gravitational acceleration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GravityLoad {
    pub g: Vec3,
}

/// Frame-attached magnetisation in a uniform ambient field.
#[derive(Debug, Clone, PartialEq)]
pub struct MagneticLoad {
    /// Per edge: components along `(m1, m2, m3)` of the edge's material
    /// frame, A/m.
    pub magnetization: Vec<Vec3>,
    /// Ambient flux density, T.
    pub field: Vec3,
}

impl MagneticLoad {
    /// Imprint a uniform global magnetisation into the material frames of
    /// one configuration.
    pub fn imprint(global: Vec3, frames: &FrameSet, field: Vec3) -> Self {
        let magnetization = (0..frames.len())
            .map(|k| {
                Vec3::new(
                    global.dot(&frames.m1[k]),
                    global.dot(&frames.m2[k]),
                    global.dot(&frames.t[k]),
                )
            })
            .collect();
        Self {
            magnetization,
            field,
        }
    }
}

/// Lumped masses, twist inertias and mass-proportional damping.
#[derive(Debug, Clone, PartialEq)]
pub struct InertiaModel {
    pub node_mass: Vec<f64>,
    pub twist_inertia: Vec<f64>,
    /// Damping coefficient `c` in `C = c·M`, 1/s.
    pub damping: f64,
}

impl InertiaModel {
    /// Diagonal of the mass matrix in DOF layout.
    pub fn mass_diagonal(&self) -> Vec<f64> {
        let mut d = Vec::with_capacity(3 * self.node_mass.len() + self.twist_inertia.len());
        for &m in &self.node_mass {
            d.extend_from_slice(&[m, m, m]);
        }
        d.extend_from_slice(&self.twist_inertia);
        d
    }

    pub fn total_mass(&self) -> f64 {
        self.node_mass.iter().sum()
    }
}

/// Lump `ρA·ℓ/2` of every edge onto its end nodes and `ρJℓ` onto its twist.
/// `lengths` selects the basis (target lengths in inverse mode, rest
/// lengths in forward mode).
pub fn assemble_inertia(
    topology: &NetTopology,
    mat: &MaterialParams,
    lengths: &[f64],
    damping: f64,
) -> Result<InertiaModel> {
    let rho_a = mat.density * mat.area();
    let rho_j = mat.density * mat.polar_moment();
    let mut node_mass = vec![0.0; topology.node_count];
    let mut twist_inertia = Vec::with_capacity(lengths.len());
    for (k, (&(a, b), &l)) in topology.edges.iter().zip(lengths).enumerate() {
        if !(l > 0.0) {
            return Err(Error::DegenerateEdge(k));
        }
        node_mass[a] += 0.5 * rho_a * l;
        node_mass[b] += 0.5 * rho_a * l;
        twist_inertia.push(rho_j * l);
    }
    Ok(InertiaModel {
        node_mass,
        twist_inertia,
        damping,
    })
}

/// Weight `mᵢ·g` on every node's position DOFs, zero on twists.
pub fn gravity_force(topology: &NetTopology, inertia: &InertiaModel, load: &GravityLoad) -> Vec<f64> {
    let mut f = vec![0.0; topology.dof_count()];
    for (i, &m) in inertia.node_mass.iter().enumerate() {
        for c in 0..3 {
            f[3 * i + c] = m * load.g[c];
        }
    }
    f
}

/// Zeeman energy `−V (Σ M_a m_a)·B` of one edge over `[x_a, x_b, θ]`.
fn zeeman<T: Real>(x: &[T; 7], t0: &Vec3, u0: &Vec3, mfr: &Vec3, field: &Vec3, volume: f64) -> Result<T> {
    let e = V3::new(x[3] - x[0], x[4] - x[1], x[5] - x[2]);
    let t = e.div(e.norm());
    let u = transport(V3::cst(u0), V3::cst(t0), t)?;
    let (m1, m2) = material_frame(u, t, x[6]);
    let b = V3::cst(field);
    let m = m1.scale(T::cst(mfr.x)) + m2.scale(T::cst(mfr.y)) + t.scale(T::cst(mfr.z));
    Ok(-(m.dot(&b) * volume))
}

fn edge_vars(q: &DofVector, a: usize, b: usize, k: usize) -> [f64; 7] {
    let (pa, pb) = (q.position(a), q.position(b));
    [pa.x, pa.y, pa.z, pb.x, pb.y, pb.z, q.theta(k)]
}

/// Magnetic energy, force `−∂E/∂q` and optionally the Hessian `∂²E/∂q²`
/// of a configuration. `volumes` are per-edge magnetised volumes.
pub fn magnetic_assemble(
    topology: &NetTopology,
    seed: &FrameSeed,
    load: &MagneticLoad,
    q: &DofVector,
    volumes: &[f64],
    with_hessian: bool,
) -> Result<(f64, Vec<f64>, Option<SparseMatrix>)> {
    let n = topology.dof_count();
    let nv = topology.node_count;
    let mut energy = 0.0;
    let mut force = vec![0.0; n];
    let mut hess = with_hessian.then(|| SparseMatrix::with_capacity(n, 49 * topology.edges.len()));
    for (k, &(a, b)) in topology.edges.iter().enumerate() {
        let st = [3 * a, 3 * a + 1, 3 * a + 2, 3 * b, 3 * b + 1, 3 * b + 2, 3 * nv + k];
        let x = edge_vars(q, a, b, k);
        let (t0, u0) = (&seed.initial.t[k], &seed.initial.u[k]);
        let mfr = &load.magnetization[k];
        if let Some(h) = hess.as_mut() {
            let mut xj = [Jet::<7>::constant(0.0); 7];
            for i in 0..7 {
                xj[i] = Jet::var(x[i], i);
            }
            let e = zeeman(&xj, t0, u0, mfr, &load.field, volumes[k])?;
            energy += e.v;
            for r in 0..7 {
                force[st[r]] -= e.g[r];
                for c in 0..7 {
                    h.push(st[r], st[c], e.h[r][c]);
                }
            }
        } else {
            let mut xd = [Dual::<7>::constant(0.0); 7];
            for i in 0..7 {
                xd[i] = Dual::var(x[i], i);
            }
            let e = zeeman(&xd, t0, u0, mfr, &load.field, volumes[k])?;
            energy += e.v;
            for r in 0..7 {
                force[st[r]] -= e.g[r];
            }
        }
    }
    Ok((energy, force, hess))
}

/// Magnetic force `−∂E_m/∂q` at a configuration.
pub fn magnetic_force(
    topology: &NetTopology,
    seed: &FrameSeed,
    load: &MagneticLoad,
    q: &DofVector,
    volumes: &[f64],
) -> Result<Vec<f64>> {
    Ok(magnetic_assemble(topology, seed, load, q, volumes, false)?.1)
}

/// Magnetic Zeeman energy of a configuration.
pub fn magnetic_energy(
    topology: &NetTopology,
    seed: &FrameSeed,
    load: &MagneticLoad,
    q: &DofVector,
    volumes: &[f64],
) -> Result<f64> {
    let mut e = 0.0;
    for (k, &(a, b)) in topology.edges.iter().enumerate() {
        let x = edge_vars(q, a, b, k);
        e += zeeman(
            &x,
            &seed.initial.t[k],
            &seed.initial.u[k],
            &load.magnetization[k],
            &load.field,
            volumes[k],
        )?;
    }
    Ok(e)
}
