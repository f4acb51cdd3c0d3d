//! Benchmark fixtures shared by the criterion benches.

use invrod_core::scenario::{build_problem, find_scenario, Problem};
use invrod_core::{DcStencils, DofVector, NaturalStrains, Result};

/// A scenario with both assembly inputs prepared: the rest shape from a
/// converged inverse solve, its natural strains, and the target stencils.
pub struct AssemblyCase {
    pub problem: Problem,
    pub uc: DofVector,
    pub natural: NaturalStrains,
    pub stencils: DcStencils,
}

impl AssemblyCase {
    pub fn new(name: &str, nodes: Option<usize>) -> Result<Self> {
        let problem = build_problem(&find_scenario(name)?, nodes)?;
        let (uc, _) = problem.inverse()?;
        let natural = problem.model.natural_strains(&uc)?;
        let stencils = problem.model.dc_stencils(&problem.dc)?;
        Ok(Self {
            problem,
            uc,
            natural,
            stencils,
        })
    }

    /// Forward force and Hessian at the target shape.
    pub fn forward(&self) -> Result<usize> {
        let a = self.problem.model.forward_assemble(&self.problem.dc, &self.natural, true)?;
        Ok(a.jacobian.map_or(0, |j| j.nnz()))
    }

    /// Inverse force and Jacobian at the rest shape.
    pub fn inverse(&self) -> Result<usize> {
        let a = self.problem.model.inverse_assemble(&self.stencils, &self.uc, true)?;
        Ok(a.jacobian.map_or(0, |j| j.nnz()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_assemblies_produce_jacobians() {
        let c = AssemblyCase::new("spherical", Some(40)).unwrap();
        let (f, i) = (c.forward().unwrap(), c.inverse().unwrap());
        assert!(f > 0 && i > 0);
    }
}
