use serde::{Deserialize, Serialize};

/// Time-stepping and termination parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Time step, s.
    pub dt: f64,
    /// Newton tolerance on the full dynamic residual, N. `None` selects
    /// `1e-6·EA`; the effective tolerance is additionally capped below
    /// the relaxation tolerance.
    pub newton_tol: Option<f64>,
    pub max_newton_iters: usize,
    pub max_steps: usize,
    /// Static-residual threshold, N. `None` selects `1e-4·‖F_ext‖`, or
    /// `1e-8` when there is no external load.
    pub relaxation_tol: Option<f64>,
    /// Consecutive residual increases that count as divergence.
    pub divergence_window: usize,
    /// Cumulative growth over the window that counts as divergence.
    pub divergence_factor: f64,
    /// Fraction of `max_steps` over which loads and prescribed motion ramp.
    pub ramp_fraction: f64,
    /// Characteristic step count in the damping `c = 2/(dt·N)`.
    pub damping_steps: f64,
    /// Run exactly `max_steps` steps (benchmarks).
    pub fixed_steps: bool,
    /// Stop with `Diverged` when the mode reports an inadmissible state
    /// (in inverse mode: a rest edge turned against its target).
    pub existence_check: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dt: 1e-2,
            newton_tol: None,
            max_newton_iters: 50,
            max_steps: 200,
            relaxation_tol: None,
            divergence_window: 20,
            divergence_factor: 1e3,
            ramp_fraction: 0.5,
            damping_steps: 10.0,
            fixed_steps: false,
            existence_check: true,
        }
    }
}

impl SolverConfig {
    pub fn damping(&self) -> f64 {
        2.0 / (self.dt * self.damping_steps)
    }

    /// Steps over which loads and schedules ramp (at least one).
    pub fn ramp_steps(&self) -> usize {
        ((self.ramp_fraction * self.max_steps as f64).ceil() as usize).max(1)
    }

    pub fn validate(&self) -> crate::Result<()> {
        let bad = |v: f64| Err(crate::Error::OutOfRange(v));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(self.dt);
        }
        if let Some(t) = self.newton_tol {
            if !(t > 0.0) {
                return bad(t);
            }
        }
        if let Some(t) = self.relaxation_tol {
            if !(t > 0.0) {
                return bad(t);
            }
        }
        if self.max_steps == 0 {
            return bad(0.0);
        }
        if self.max_newton_iters == 0 {
            return bad(0.0);
        }
        if !(self.ramp_fraction >= 0.0 && self.ramp_fraction <= 1.0) {
            return bad(self.ramp_fraction);
        }
        if !(self.damping_steps > 0.0) {
            return bad(self.damping_steps);
        }
        Ok(())
    }
}
