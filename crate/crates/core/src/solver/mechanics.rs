use crate::dofs::DofVector;
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::loads::{
    assemble_inertia, gravity_force, magnetic_assemble, GravityLoad, InertiaModel, MagneticLoad,
};
use crate::model::{DcStencils, ElasticModel, EnergyParts, NaturalStrains, SparseMatrix};

/// External fields acting on a solve.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Loads {
    pub gravity: Option<GravityLoad>,
    pub magnetic: Option<MagneticLoad>,
}

impl Loads {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn gravity(g: Vec3) -> Self {
        Self {
            gravity: Some(GravityLoad { g }),
            magnetic: None,
        }
    }

    pub fn is_empty(&self) -> bool {
        let g0 = self.gravity.as_ref().is_none_or(|g| g.g == Vec3::zeros());
        let m0 = self.magnetic.as_ref().is_none_or(|m| m.field == Vec3::zeros());
        g0 && m0
    }
}

/// The static residual `G(q)` with `G = 0` at equilibrium, evaluated at
/// load factor `λ`.
pub struct Evaluation {
    pub energy: EnergyParts,
    pub external_potential: f64,
    pub residual: Vec<f64>,
    pub jacobian: Option<SparseMatrix>,
}

/// Mode-specific physics driven by the shared time stepper.
pub trait Mechanics: Sync {
    fn dof_count(&self) -> usize;
    /// Axial stiffness `EA`, the scale of the default Newton tolerance.
    fn axial_stiffness(&self) -> f64;
    fn inertia(&self) -> &InertiaModel;
    /// `‖F_ext‖` at full load.
    fn external_norm(&self) -> f64;
    fn has_loads(&self) -> bool;
    fn evaluate(&self, q: &DofVector, lambda: f64, with_jacobian: bool) -> Result<Evaluation>;
    /// Mode-specific admissibility of a state; `Some(reason)` stops the solve.
    fn check(&self, _q: &DofVector) -> Option<String> {
        None
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn volumes(model: &ElasticModel, lengths: &[f64]) -> Vec<f64> {
    lengths.iter().map(|l| l * model.material.area()).collect()
}

/// Forward problem: unknowns are the deformed configuration, the UC is the
/// reference.
pub struct ForwardMechanics<'a> {
    pub model: &'a ElasticModel,
    pub natural: NaturalStrains,
    inertia: InertiaModel,
    gravity: Vec<f64>,
    magnetic: Option<(MagneticLoad, Vec<f64>)>,
    ext_norm: f64,
}

impl<'a> ForwardMechanics<'a> {
    pub fn new(model: &'a ElasticModel, uc: &DofVector, loads: &Loads, damping: f64) -> Result<Self> {
        let natural = model.natural_strains(uc)?;
        let inertia = assemble_inertia(&model.topology, &model.material, &natural.rest_len, damping)?;
        let gravity = match &loads.gravity {
            Some(g) => gravity_force(&model.topology, &inertia, g),
            None => vec![0.0; model.dof_count()],
        };
        let magnetic = match &loads.magnetic {
            Some(m) => {
                check_magnetic(model, m)?;
                Some((m.clone(), volumes(model, &natural.rest_len)))
            }
            None => None,
        };
        let mut ext = gravity.clone();
        if let Some((m, vol)) = &magnetic {
            let f = magnetic_assemble(&model.topology, &model.seed, m, uc, vol, false)?.1;
            ext.iter_mut().zip(f).for_each(|(a, b)| *a += b);
        }
        Ok(Self {
            model,
            natural,
            inertia,
            gravity,
            magnetic,
            ext_norm: norm(&ext),
        })
    }
}

fn check_magnetic(model: &ElasticModel, m: &MagneticLoad) -> Result<()> {
    if m.magnetization.len() != model.topology.edges.len() {
        return Err(Error::DimensionMismatch {
            expected: model.topology.edges.len(),
            got: m.magnetization.len(),
        });
    }
    Ok(())
}

impl Mechanics for ForwardMechanics<'_> {
    fn dof_count(&self) -> usize {
        self.model.dof_count()
    }

    fn axial_stiffness(&self) -> f64 {
        self.model.material.ea
    }

    fn inertia(&self) -> &InertiaModel {
        &self.inertia
    }

    fn external_norm(&self) -> f64 {
        self.ext_norm
    }

    fn has_loads(&self) -> bool {
        self.ext_norm > 0.0
    }

    fn evaluate(&self, q: &DofVector, lambda: f64, with_jacobian: bool) -> Result<Evaluation> {
        let asm = self.model.forward_assemble(q, &self.natural, with_jacobian)?;
        let mut residual: Vec<f64> = asm
            .force
            .iter()
            .zip(&self.gravity)
            .map(|(f, g)| -(f + lambda * g))
            .collect();
        let mut potential: f64 = -lambda
            * q.as_slice()
                .iter()
                .zip(&self.gravity)
                .map(|(x, g)| x * g)
                .sum::<f64>();
        let mut jacobian = asm.jacobian;
        if let Some((m, vol)) = &self.magnetic {
            let (e, f, h) = magnetic_assemble(&self.model.topology, &self.model.seed, m, q, vol, with_jacobian)?;
            potential += lambda * e;
            residual.iter_mut().zip(f).for_each(|(r, fm)| *r -= lambda * fm);
            if let (Some(j), Some(h)) = (jacobian.as_mut(), h) {
                for k in 0..h.nnz() {
                    j.push(h.rows[k], h.cols[k], lambda * h.vals[k]);
                }
            }
        }
        Ok(Evaluation {
            energy: asm.energy,
            external_potential: potential,
            residual,
            jacobian,
        })
    }
}

/// Inverse problem: unknowns are the rest configuration; the DC is frozen
/// and plays the role of the reference.
pub struct InverseMechanics<'a> {
    pub model: &'a ElasticModel,
    pub stencils: DcStencils,
    inertia: InertiaModel,
    external: Vec<f64>,
    ext_norm: f64,
    potential: f64,
}

impl<'a> InverseMechanics<'a> {
    pub fn new(model: &'a ElasticModel, dc: &DofVector, loads: &Loads, damping: f64) -> Result<Self> {
        let stencils = model.dc_stencils(dc)?;
        let inertia = assemble_inertia(&model.topology, &model.material, &stencils.edge_len, damping)?;
        let mut external = match &loads.gravity {
            Some(g) => gravity_force(&model.topology, &inertia, g),
            None => vec![0.0; model.dof_count()],
        };
        let mut potential = -dc
            .as_slice()
            .iter()
            .zip(&external)
            .map(|(x, f)| x * f)
            .sum::<f64>();
        if let Some(m) = &loads.magnetic {
            check_magnetic(model, m)?;
            let vol = volumes(model, &stencils.edge_len);
            let (e, f, _) = magnetic_assemble(&model.topology, &model.seed, m, dc, &vol, false)?;
            external.iter_mut().zip(f).for_each(|(a, b)| *a += b);
            potential += e;
        }
        Ok(Self {
            model,
            ext_norm: norm(&external),
            stencils,
            inertia,
            external,
            potential,
        })
    }

    /// External force at load factor one, frozen at the target.
    pub fn external_force(&self) -> &[f64] {
        &self.external
    }
}

impl Mechanics for InverseMechanics<'_> {
    fn dof_count(&self) -> usize {
        self.model.dof_count()
    }

    fn axial_stiffness(&self) -> f64 {
        self.model.material.ea
    }

    fn inertia(&self) -> &InertiaModel {
        &self.inertia
    }

    fn external_norm(&self) -> f64 {
        self.ext_norm
    }

    fn has_loads(&self) -> bool {
        self.ext_norm > 0.0
    }

    fn evaluate(&self, q: &DofVector, lambda: f64, with_jacobian: bool) -> Result<Evaluation> {
        let asm = self.model.inverse_assemble(&self.stencils, q, with_jacobian)?;
        let residual = asm
            .force
            .iter()
            .zip(&self.external)
            .map(|(f, e)| f + lambda * e)
            .collect();
        Ok(Evaluation {
            energy: asm.energy,
            external_potential: lambda * self.potential,
            residual,
            jacobian: asm.jacobian,
        })
    }

    fn check(&self, q: &DofVector) -> Option<String> {
        let (k, c) = self.model.min_edge_alignment(&self.stencils, q);
        (!(c > 0.0)).then(|| format!("rest edge {k} turned against its target (cos = {c:.3e})"))
    }
}
