use crate::dofs::DofVector;
use crate::error::{Error, Result};
use crate::model::EnergyParts;

/// Statistics of one time step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    /// Static residual norm on free DOFs at the end of the step.
    pub residual: f64,
    pub newton_iters: usize,
    /// Wall-clock time of the Newton loop, ms.
    pub ms: f64,
    pub energy: EnergyParts,
    pub external_potential: f64,
    /// Newton residual history of the step (dynamic residual norms).
    pub newton_residuals: Vec<f64>,
}

/// How a relaxation ended.
#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    Converged,
    MaxSteps,
    Diverged(String),
}

/// Trajectory record of one solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub final_dofs: DofVector,
    pub initial_energy: EnergyParts,
    pub steps: Vec<StepRecord>,
    pub termination: Termination,
    pub relaxation_tol: f64,
}

impl SolveReport {
    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }

    pub fn diverged(&self) -> bool {
        matches!(self.termination, Termination::Diverged(_))
    }

    pub fn final_residual(&self) -> f64 {
        self.steps.last().map_or(f64::NAN, |s| s.residual)
    }

    pub fn total_ms(&self) -> f64 {
        self.steps.iter().map(|s| s.ms).sum()
    }

    pub fn ms_per_step(&self) -> f64 {
        if self.steps.is_empty() {
            0.0
        } else {
            self.total_ms() / self.steps.len() as f64
        }
    }

    pub fn final_energy(&self) -> EnergyParts {
        self.steps.last().map_or(self.initial_energy, |s| s.energy)
    }
}

/// Energies normalised by the final total, with the initial state as the
/// first point.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyProfile {
    pub step: Vec<usize>,
    pub stretch: Vec<f64>,
    pub bend: Vec<f64>,
    pub twist: Vec<f64>,
    pub total: Vec<f64>,
}

/// Normalise a report's energy trajectory by its final total energy.
pub fn energy_profile(report: &SolveReport) -> Result<EnergyProfile> {
    if report.steps.is_empty() {
        return Err(Error::DimensionMismatch { expected: 1, got: 0 });
    }
    let fin = report.final_energy().total();
    if !(fin >= 1e-14) {
        return Err(Error::ZeroFinalEnergy(fin));
    }
    let mut p = EnergyProfile {
        step: vec![0],
        stretch: vec![report.initial_energy.stretch / fin],
        bend: vec![report.initial_energy.bend / fin],
        twist: vec![report.initial_energy.twist / fin],
        total: vec![report.initial_energy.total() / fin],
    };
    for s in &report.steps {
        p.step.push(s.step);
        p.stretch.push(s.energy.stretch / fin);
        p.bend.push(s.energy.bend / fin);
        p.twist.push(s.energy.twist / fin);
        p.total.push(s.energy.total() / fin);
    }
    let last = p.total.len() - 1;
    p.total[last] = 1.0;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(step: usize, e: f64) -> StepRecord {
        StepRecord {
            step,
            residual: 0.0,
            newton_iters: 1,
            ms: 1.0,
            energy: EnergyParts {
                stretch: e,
                bend: 2.0 * e,
                twist: 0.0,
            },
            external_potential: 0.0,
            newton_residuals: vec![],
        }
    }

    fn report(steps: Vec<StepRecord>) -> SolveReport {
        SolveReport {
            final_dofs: DofVector::zeros(1, 0),
            initial_energy: EnergyParts::default(),
            steps,
            termination: Termination::Converged,
            relaxation_tol: 1e-8,
        }
    }

    #[test]
    fn profile_ends_at_one() {
        let p = energy_profile(&report(vec![rec(1, 0.3), rec(2, 0.7), rec(3, 0.9)])).unwrap();
        assert_eq!(*p.total.last().unwrap(), 1.0);
        assert_eq!(p.step, vec![0, 1, 2, 3]);
        assert!(p.step.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn single_step_gives_two_points() {
        let p = energy_profile(&report(vec![rec(1, 0.5)])).unwrap();
        assert_eq!(p.total.len(), 2);
    }

    #[test]
    fn zero_energy_is_rejected() {
        assert!(matches!(
            energy_profile(&report(vec![rec(1, 0.0)])),
            Err(Error::ZeroFinalEnergy(_))
        ));
    }
}
