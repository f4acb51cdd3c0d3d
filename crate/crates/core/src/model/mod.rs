//! Elastic energies, forces and Jacobians for forward and inverse modes.
//!
//! Both modes differentiate one scalar: the energy of a current shape `q`
//! measured against natural strains extracted from a rest shape `q̄`.
//! Forward mode differentiates it in `q` with `q̄` fixed. Inverse mode fixes
//! `q` to the target shape, freezes its strain gradients, and solves for
//! `q̄`.

mod forward;
mod inverse;
mod sparse;

pub use inverse::DcStencils;
pub use sparse::{frobenius, frobenius_diff, SparseMatrix};

use crate::dofs::DofVector;
use crate::error::{Error, Result};
use crate::geometry::kernel::{bend_strains, bend_vars, unpack};
use crate::geometry::{FrameSeed, V3, Vec3};
use crate::topology::{ElementMaps, NetTopology};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Stiffness and inertia parameters of a rod, uniform over the topology.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    pub ea: f64,
    pub ei1: f64,
    pub ei2: f64,
    pub gj: f64,
    pub density: f64,
    pub radius: f64,
    pub young: f64,
}

impl MaterialParams {
    /// Poisson ratio used by [`MaterialParams::circular`]; incompressible
    /// elastomer, so `G = E/3`.
    pub const POISSON: f64 = 0.5;

    /// Solid circular cross-section of radius `r`.
    pub fn circular(young: f64, radius: f64, density: f64) -> Self {
        let a = PI * radius * radius;
        let i = PI * radius.powi(4) / 4.0;
        let j = PI * radius.powi(4) / 2.0;
        let shear = young / (2.0 * (1.0 + Self::POISSON));
        Self {
            ea: young * a,
            ei1: young * i,
            ei2: young * i,
            gj: shear * j,
            density,
            radius,
            young,
        }
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    /// Polar second moment `πr⁴/2`.
    pub fn polar_moment(&self) -> f64 {
        PI * self.radius.powi(4) / 2.0
    }

    pub fn validate(&self) -> Result<()> {
        for v in [self.ea, self.ei1, self.ei2, self.gj, self.density, self.radius, self.young] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::OutOfRange(v));
            }
        }
        Ok(())
    }
}

/// Natural (rest) strains extracted from an undeformed configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct NaturalStrains {
    pub rest_len: Vec<f64>,
    pub kappa1: Vec<f64>,
    pub kappa2: Vec<f64>,
    pub tau: Vec<f64>,
    pub voronoi: Vec<f64>,
}

/// Energy split by mode of deformation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyParts {
    pub stretch: f64,
    pub bend: f64,
    pub twist: f64,
}

impl EnergyParts {
    pub fn total(&self) -> f64 {
        self.stretch + self.bend + self.twist
    }
}

/// Result of one global assembly.
#[derive(Debug, Clone)]
pub struct Assembly {
    pub energy: EnergyParts,
    /// Elastic force: `−∂E/∂q` (forward) or the frozen-stencil inverse force.
    pub force: Vec<f64>,
    /// Forward: `∂²E/∂q²`. Inverse: `∂F_inv/∂q̄`.
    pub jacobian: Option<SparseMatrix>,
}

/// Euclidean length with the same arithmetic as the element kernels.
#[inline]
pub(crate) fn length(e: &Vec3) -> f64 {
    V3::<f64>::cst(e).norm()
}

/// Thread pool for element evaluation, sized by `INVROD_THREADS` when set.
pub(crate) fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let n = std::env::var("INVROD_THREADS")
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&n| n > 0)
            .unwrap_or(0);
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
    })
}

/// Evaluate `f` over `0..n` in parallel, returning results in index order.
pub(crate) fn par_map<T: Send, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T + Sync + Send,
{
    if n < 64 {
        return (0..n).map(f).collect();
    }
    pool().install(|| (0..n).into_par_iter().map(f).collect())
}

/// A rod or net with its material, frame seed and element stencils.
#[derive(Debug, Clone)]
pub struct ElasticModel {
    pub topology: NetTopology,
    pub material: MaterialParams,
    pub seed: FrameSeed,
    pub maps: ElementMaps,
    /// Position-only stencils of the stretch elements.
    pub(crate) stretch_maps: Vec<[usize; 6]>,
}

impl ElasticModel {
    /// Build a model whose frame seed is taken from `seed_config`.
    pub fn new(topology: NetTopology, material: MaterialParams, seed_config: &DofVector) -> Result<Self> {
        material.validate()?;
        if seed_config.len() != topology.dof_count() {
            return Err(Error::DimensionMismatch {
                expected: topology.dof_count(),
                got: seed_config.len(),
            });
        }
        let seed = FrameSeed::new(&topology, seed_config)?;
        let maps = topology.element_maps();
        let stretch_maps = maps
            .edges
            .iter()
            .map(|s| [s[0], s[1], s[2], s[3], s[4], s[5]])
            .collect();
        Ok(Self {
            topology,
            material,
            seed,
            maps,
            stretch_maps,
        })
    }

    pub fn dof_count(&self) -> usize {
        self.topology.dof_count()
    }

    pub fn edge_lengths(&self, q: &DofVector) -> Result<Vec<f64>> {
        self.topology
            .edges
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| {
                let l = length(&(q.position(b) - q.position(a)));
                if l > 0.0 {
                    Ok(l)
                } else {
                    Err(Error::DegenerateEdge(k))
                }
            })
            .collect()
    }

    /// Natural strains of an undeformed configuration.
    pub fn natural_strains(&self, uc: &DofVector) -> Result<NaturalStrains> {
        let rest_len = self.edge_lengths(uc)?;
        let nb = self.topology.bends.len();
        let mut n = NaturalStrains {
            kappa1: Vec::with_capacity(nb),
            kappa2: Vec::with_capacity(nb),
            tau: Vec::with_capacity(nb),
            voronoi: Vec::with_capacity(nb),
            rest_len,
        };
        for (i, bend) in self.topology.bends.iter().enumerate() {
            let (p, c, q) = self.topology.bend_nodes(i);
            let x = bend_vars(
                &uc.position(p),
                &uc.position(c),
                &uc.position(q),
                uc.theta(bend.edge_i),
                uc.theta(bend.edge_j),
            );
            let (e1, e2, ta, tb) = unpack(&x);
            let s = bend_strains(e1, e2, ta, tb, &self.seed.bends[i]).map_err(|e| e.at_bend(i))?;
            n.kappa1.push(s.kappa1);
            n.kappa2.push(s.kappa2);
            n.tau.push(s.tau);
            n.voronoi.push(0.5 * (s.len_a + s.len_b));
        }
        Ok(n)
    }

    /// `(Es, Eb, Et)` of `current` against `natural`.
    pub fn elastic_energy(&self, current: &DofVector, natural: &NaturalStrains) -> Result<EnergyParts> {
        let m = &self.material;
        let mut e = EnergyParts::default();
        for (k, &(a, b)) in self.topology.edges.iter().enumerate() {
            let l = length(&(current.position(b) - current.position(a)));
            let lb = natural.rest_len[k];
            e.stretch += 0.5 * m.ea * (l - lb) * (l - lb) / lb;
        }
        for (i, bend) in self.topology.bends.iter().enumerate() {
            let (p, c, q) = self.topology.bend_nodes(i);
            let x = bend_vars(
                &current.position(p),
                &current.position(c),
                &current.position(q),
                current.theta(bend.edge_i),
                current.theta(bend.edge_j),
            );
            let (e1, e2, ta, tb) = unpack(&x);
            let s = bend_strains(e1, e2, ta, tb, &self.seed.bends[i]).map_err(|e| e.at_bend(i))?;
            let dl = natural.voronoi[i];
            let d1 = s.kappa1 - natural.kappa1[i];
            let d2 = s.kappa2 - natural.kappa2[i];
            let dt = s.tau - natural.tau[i];
            e.bend += 0.5 * (m.ei1 * d1 * d1 + m.ei2 * d2 * d2) / dl;
            e.twist += 0.5 * m.gj * dt * dt / dl;
        }
        Ok(e)
    }
}

/// Per-element local result scattered into global arrays.
pub(crate) struct Local<const N: usize> {
    pub energy: [f64; 3],
    pub force: [f64; N],
    pub jac: Option<Box<[[f64; N]; N]>>,
}

/// Scatter element results in element order (deterministic summation).
pub(crate) fn scatter<const N: usize>(
    stencils: &[[usize; N]],
    locals: Vec<Local<N>>,
    energy: &mut EnergyParts,
    force: &mut [f64],
    jac: Option<&mut SparseMatrix>,
) {
    let mut jac = jac;
    for (st, loc) in stencils.iter().zip(locals) {
        energy.stretch += loc.energy[0];
        energy.bend += loc.energy[1];
        energy.twist += loc.energy[2];
        for (r, &gi) in st.iter().enumerate() {
            force[gi] += loc.force[r];
        }
        if let (Some(j), Some(lj)) = (jac.as_deref_mut(), loc.jac.as_ref()) {
            for (r, &gr) in st.iter().enumerate() {
                for (c, &gc) in st.iter().enumerate() {
                    j.push(gr, gc, lj[r][c]);
                }
            }
        }
    }
}
