use super::config::SolverConfig;
use super::constraints::ConstraintSet;
use super::linear::SparseLu;
use super::mechanics::{Evaluation, ForwardMechanics, InverseMechanics, Loads, Mechanics};
use super::report::{SolveReport, StepRecord, Termination};
use crate::dofs::DofVector;
use crate::error::{Error, Result};
use crate::model::{ElasticModel, EnergyParts};
use faer::sparse::Triplet;
use std::time::Instant;

/// Positions/twists and their rates.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub q: DofVector,
    pub v: Vec<f64>,
}

impl State {
    pub fn at_rest(q: DofVector) -> Self {
        let v = vec![0.0; q.len()];
        Self { q, v }
    }
}

/// Outcome of one implicit step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepStats {
    pub newton_iters: usize,
    pub newton_residuals: Vec<f64>,
    /// Static residual on free DOFs at the new state.
    pub static_residual: f64,
    pub energy: EnergyParts,
    pub external_potential: f64,
}

fn norm(v: impl Iterator<Item = f64>) -> f64 {
    v.map(|x| x * x).sum::<f64>().sqrt()
}

/// Relaxation tolerance implied by `config` for a set of loads.
pub fn relaxation_tolerance(config: &SolverConfig, external_norm: f64) -> f64 {
    config.relaxation_tol.unwrap_or(if external_norm > 0.0 {
        1e-4 * external_norm
    } else {
        1e-8
    })
}

/// Implicit-Euler stepper with the prescribed DOFs eliminated.
pub struct Stepper<'a> {
    mech: &'a dyn Mechanics,
    constraints: &'a ConstraintSet,
    config: &'a SolverConfig,
    lu: SparseLu,
    /// Free index of each DOF, `None` when prescribed.
    free: Vec<Option<usize>>,
    free_count: usize,
    mass: Vec<f64>,
    tol: f64,
}

impl<'a> Stepper<'a> {
    pub fn new(mech: &'a dyn Mechanics, constraints: &'a ConstraintSet, config: &'a SolverConfig) -> Result<Self> {
        config.validate()?;
        let n = mech.dof_count();
        let mut free: Vec<Option<usize>> = vec![Some(0); n];
        for (d, _) in &constraints.entries {
            if *d >= n {
                return Err(Error::OutOfRange(*d as f64));
            }
            free[*d] = None;
        }
        let mut free_count = 0;
        for f in free.iter_mut().filter(|f| f.is_some()) {
            *f = Some(free_count);
            free_count += 1;
        }
        let relax = relaxation_tolerance(config, mech.external_norm());
        let tol = config
            .newton_tol
            .unwrap_or(1e-6 * mech.axial_stiffness())
            .min(0.1 * relax);
        Ok(Self {
            mech,
            constraints,
            config,
            lu: SparseLu::new(),
            free,
            free_count,
            mass: mech.inertia().mass_diagonal(),
            tol,
        })
    }

    pub fn newton_tolerance(&self) -> f64 {
        self.tol
    }

    /// Norm of `G` restricted to free DOFs.
    pub fn static_residual(&self, g: &[f64]) -> f64 {
        norm(g.iter().zip(&self.free).filter(|(_, f)| f.is_some()).map(|(v, _)| *v))
    }

    fn dynamic_residual(&self, prev: &State, x: &DofVector, g: &[f64]) -> Vec<f64> {
        let dt = self.config.dt;
        let c = self.mech.inertia().damping;
        let (xs, qs) = (x.as_slice(), prev.q.as_slice());
        let mut r = vec![0.0; self.free_count];
        for (i, f) in self.free.iter().enumerate() {
            if let Some(fi) = f {
                let dx = xs[i] - qs[i];
                r[*fi] = self.mass[i] * ((dx - dt * prev.v[i]) / (dt * dt) + c * dx / dt) + g[i];
            }
        }
        r
    }

    fn solve_update(&mut self, ev: &Evaluation, r: &[f64]) -> Result<Vec<f64>> {
        let dt = self.config.dt;
        let c = self.mech.inertia().damping;
        let jac = ev.jacobian.as_ref().expect("jacobian requested");
        let mut trip = Vec::with_capacity(jac.nnz() + self.free_count);
        for (i, f) in self.free.iter().enumerate() {
            if let Some(fi) = f {
                trip.push(Triplet::new(*fi, *fi, self.mass[i] * (1.0 / (dt * dt) + c / dt)));
            }
        }
        for k in 0..jac.nnz() {
            if let (Some(r), Some(c)) = (self.free[jac.rows[k]], self.free[jac.cols[k]]) {
                trip.push(Triplet::new(r, c, jac.vals[k]));
            }
        }
        let rhs: Vec<f64> = r.iter().map(|v| -v).collect();
        self.lu.solve(self.free_count, &trip, &rhs)
    }

    fn add_free(&self, x: &DofVector, dx: &[f64], alpha: f64) -> DofVector {
        let mut y = x.clone();
        let s = y.as_mut_slice();
        for (i, f) in self.free.iter().enumerate() {
            if let Some(fi) = f {
                s[i] += alpha * dx[*fi];
            }
        }
        y
    }

    fn newton(&mut self, prev: &State, x0: DofVector, lambda: f64, backtrack: bool) -> Result<(DofVector, Evaluation, Vec<f64>)> {
        let mut x = x0;
        let mut hist = Vec::new();
        let mut small_step = false;
        for it in 1..=self.config.max_newton_iters {
            let ev = self.mech.evaluate(&x, lambda, true)?;
            let r = self.dynamic_residual(prev, &x, &ev.residual);
            let rn = norm(r.iter().copied());
            hist.push(rn);
            if !rn.is_finite() {
                return Err(Error::NonFiniteState);
            }
            if rn <= self.tol || small_step || self.free_count == 0 {
                return Ok((x, ev, hist));
            }
            if it == self.config.max_newton_iters {
                break;
            }
            let dx = self.solve_update(&ev, &r)?;
            let mut alpha = 1.0;
            if backtrack {
                for _ in 0..8 {
                    let y = self.add_free(&x, &dx, alpha);
                    let ok = self.mech.evaluate(&y, lambda, false).is_ok_and(|e| {
                        norm(self.dynamic_residual(prev, &y, &e.residual).into_iter()) < rn
                    });
                    if ok {
                        break;
                    }
                    alpha *= 0.5;
                }
            }
            let dmax = dx.iter().fold(0.0f64, |m, v| m.max(v.abs())) * alpha;
            let xmax = x.as_slice().iter().fold(0.0f64, |m, v| m.max(v.abs()));
            small_step = dmax <= 1e-13 * (1.0 + xmax);
            x = self.add_free(&x, &dx, alpha);
            if !x.is_finite() {
                return Err(Error::NonFiniteState);
            }
        }
        Err(Error::NewtonStalled {
            iters: hist.len(),
            residual: *hist.last().unwrap_or(&f64::NAN),
        })
    }

    /// Advance one step to schedule index `index` at load factor `lambda`.
    pub fn step(&mut self, state: &State, index: usize, lambda: f64) -> Result<(State, StepStats)> {
        let mut x0 = state.q.clone();
        self.constraints.apply(&mut x0, index);
        // A full step can overshoot into a stall or an invalid geometry;
        // retry once with backtracking before giving up.
        let (x, ev, hist) = match self.newton(state, x0.clone(), lambda, false) {
            Ok(out) => out,
            Err(Error::LinearSolveSingular) => return Err(Error::LinearSolveSingular),
            Err(_) => self.newton(state, x0, lambda, true)?,
        };
        let dt = self.config.dt;
        let v = x
            .as_slice()
            .iter()
            .zip(state.q.as_slice())
            .map(|(a, b)| (a - b) / dt)
            .collect();
        let stats = StepStats {
            newton_iters: hist.len(),
            static_residual: self.static_residual(&ev.residual),
            newton_residuals: hist,
            energy: ev.energy,
            external_potential: ev.external_potential,
        };
        Ok((State { q: x, v }, stats))
    }
}

/// Step from `initial` until the static residual on free DOFs drops below
/// the relaxation tolerance once loads and schedules are fully applied, or
/// until `max_steps`, or divergence.
pub fn relax_to_statics(
    mech: &dyn Mechanics,
    initial: &DofVector,
    constraints: &ConstraintSet,
    config: &SolverConfig,
) -> Result<SolveReport> {
    relax_observed(mech, initial, constraints, config, &mut |_, _| {})
}

/// [`relax_to_statics`] that hands every accepted state to `observer`,
/// starting with the constrained initial state at step 0.
pub fn relax_observed(
    mech: &dyn Mechanics,
    initial: &DofVector,
    constraints: &ConstraintSet,
    config: &SolverConfig,
    observer: &mut dyn FnMut(usize, &DofVector),
) -> Result<SolveReport> {
    if initial.len() != mech.dof_count() {
        return Err(Error::DimensionMismatch {
            expected: mech.dof_count(),
            got: initial.len(),
        });
    }
    let mut stepper = Stepper::new(mech, constraints, config)?;
    let relax_tol = relaxation_tolerance(config, mech.external_norm());
    let mut q0 = initial.clone();
    constraints.apply(&mut q0, 0);
    let initial_energy = mech.evaluate(&q0, 0.0, false)?.energy;
    let mut state = State::at_rest(q0);
    observer(0, &state.q);

    let ramp_steps = config.ramp_steps();
    let ramp_end = if mech.has_loads() { ramp_steps } else { 0 }.max(constraints.last_step());
    let lambda_at = |k: usize| {
        if mech.has_loads() {
            (k as f64 / ramp_steps as f64).min(1.0)
        } else {
            1.0
        }
    };

    let mut steps = Vec::new();
    let mut termination = Termination::MaxSteps;
    let mut prev_res = f64::INFINITY;
    let mut rising = 0usize;
    let mut rise_base = 0.0;
    for k in 1..=config.max_steps {
        let t0 = Instant::now();
        let out = stepper.step(&state, k, lambda_at(k));
        let ms = (t0.elapsed().as_secs_f64() * 1e3).max(1e-6);
        let (next, stats) = match out {
            Ok(o) => o,
            Err(e) => {
                termination = Termination::Diverged(e.to_string());
                break;
            }
        };
        let res = stats.static_residual;
        steps.push(StepRecord {
            step: k,
            residual: res,
            newton_iters: stats.newton_iters,
            ms,
            energy: stats.energy,
            external_potential: stats.external_potential,
            newton_residuals: stats.newton_residuals,
        });
        state = next;
        observer(k, &state.q);
        if !res.is_finite() || !state.q.is_finite() {
            termination = Termination::Diverged(Error::NonFiniteState.to_string());
            break;
        }
        if let Some(reason) = config.existence_check.then(|| mech.check(&state.q)).flatten() {
            termination = Termination::Diverged(reason);
            break;
        }
        let ramp_done = k >= ramp_end;
        if ramp_done && !config.fixed_steps && res < relax_tol {
            termination = Termination::Converged;
            break;
        }
        if ramp_done {
            if res > prev_res {
                if rising == 0 {
                    rise_base = prev_res;
                }
                rising += 1;
                if rising >= config.divergence_window && res >= config.divergence_factor * rise_base {
                    termination = Termination::Diverged(format!(
                        "static residual grew from {rise_base:.3e} to {res:.3e} over {rising} steps"
                    ));
                    break;
                }
            } else {
                rising = 0;
            }
        }
        prev_res = res;
    }
    if config.fixed_steps && termination == Termination::MaxSteps {
        if let Some(last) = steps.last() {
            if last.residual < relax_tol {
                termination = Termination::Converged;
            }
        }
    }
    Ok(SolveReport {
        final_dofs: state.q,
        initial_energy,
        steps,
        termination,
        relaxation_tol: relax_tol,
    })
}

/// Find the rest shape whose loaded equilibrium is `dc`. The starting
/// guess is the target itself.
pub fn inverse_solve(
    model: &ElasticModel,
    dc: &DofVector,
    loads: &Loads,
    constraints: &ConstraintSet,
    config: &SolverConfig,
) -> Result<(DofVector, SolveReport)> {
    inverse_solve_observed(model, dc, loads, constraints, config, &mut |_, _| {})
}

pub fn inverse_solve_observed(
    model: &ElasticModel,
    dc: &DofVector,
    loads: &Loads,
    constraints: &ConstraintSet,
    config: &SolverConfig,
    observer: &mut dyn FnMut(usize, &DofVector),
) -> Result<(DofVector, SolveReport)> {
    constraints.validate(&model.topology)?;
    let mech = InverseMechanics::new(model, dc, loads, config.damping())?;
    let report = relax_observed(&mech, dc, constraints, config, observer)?;
    Ok((report.final_dofs.clone(), report))
}

/// Find the loaded equilibrium of the rest shape `uc`, starting from `uc`.
pub fn forward_solve(
    model: &ElasticModel,
    uc: &DofVector,
    loads: &Loads,
    constraints: &ConstraintSet,
    config: &SolverConfig,
) -> Result<(DofVector, SolveReport)> {
    forward_solve_observed(model, uc, loads, constraints, config, &mut |_, _| {})
}

pub fn forward_solve_observed(
    model: &ElasticModel,
    uc: &DofVector,
    loads: &Loads,
    constraints: &ConstraintSet,
    config: &SolverConfig,
    observer: &mut dyn FnMut(usize, &DofVector),
) -> Result<(DofVector, SolveReport)> {
    constraints.validate(&model.topology)?;
    let mech = ForwardMechanics::new(model, uc, loads, config.damping())?;
    let report = relax_observed(&mech, uc, constraints, config, observer)?;
    Ok((report.final_dofs.clone(), report))
}
