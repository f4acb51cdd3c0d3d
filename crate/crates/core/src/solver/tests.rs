use super::*;
use crate::model::{ElasticModel, MaterialParams};
use crate::topology::NetTopology;
use crate::{DofVector, Vec3};

fn cantilever(n: usize, len: f64) -> (ElasticModel, DofVector) {
    let pts: Vec<Vec3> = (0..n)
        .map(|i| Vec3::new(len * i as f64 / (n - 1) as f64, 0.0, 0.0))
        .collect();
    let mut t = NetTopology::build_chain(&pts).unwrap();
    t.clamped_nodes = vec![0, 1];
    t.clamped_edges = vec![0];
    let q = DofVector::from_positions(&pts, n - 1);
    let mat = MaterialParams::circular(1e6, 1e-2, 1e3);
    (ElasticModel::new(t, mat, &q).unwrap(), q)
}

fn quasi_static() -> SolverConfig {
    SolverConfig {
        dt: 1e2,
        max_steps: 60,
        ..SolverConfig::default()
    }
}

#[test]
fn rest_state_is_a_fixed_point() {
    let (model, q) = cantilever(8, 1.0);
    let mech = ForwardMechanics::new(&model, &q, &Loads::none(), 0.0).unwrap();
    let cons = ConstraintSet::clamps(&model.topology, &q);
    let cfg = SolverConfig::default();
    let mut stepper = Stepper::new(&mech, &cons, &cfg).unwrap();
    let (next, stats) = stepper.step(&State::at_rest(q.clone()), 1, 1.0).unwrap();
    assert_eq!(next.q, q);
    assert_eq!(stats.newton_iters, 1);

    let (_, report) = forward_solve(&model, &q, &Loads::none(), &cons, &cfg).unwrap();
    assert!(report.converged());
    assert!(report.steps.len() <= 2);
}

#[test]
fn newton_converges_superlinearly_under_gravity() {
    let (model, q) = cantilever(12, 1.0);
    let loads = Loads::gravity(Vec3::new(0.0, 0.0, -10.0));
    let mech = ForwardMechanics::new(&model, &q, &loads, 0.0).unwrap();
    let cons = ConstraintSet::clamps(&model.topology, &q);
    let cfg = SolverConfig {
        dt: 1e3,
        newton_tol: Some(1e-12),
        relaxation_tol: Some(1e-11),
        ..SolverConfig::default()
    };
    let mut stepper = Stepper::new(&mech, &cons, &cfg).unwrap();
    let (_, stats) = stepper.step(&State::at_rest(q), 1, 1.0).unwrap();
    let h = &stats.newton_residuals;
    assert!(h.len() >= 3, "{h:?}");
    let n = h.len();
    assert!(h[n - 1] / h[n - 2] < 0.5, "{h:?}");
    assert!(h[n - 2] / h[n - 3] < 0.5, "{h:?}");
}

#[test]
fn prescribed_values_are_exact() {
    let (model, q) = cantilever(6, 1.0);
    let mut target = q.clone();
    target.set_position(0, Vec3::new(0.1 / 3.0, 0.2, -0.05));
    target.set_position(1, Vec3::new(0.2 + 0.1 / 3.0, 0.2, -0.05));
    let cons = ConstraintSet::clamp_ramp(&model.topology, &q, &target, 7);
    let (_, report) = forward_solve(&model, &q, &Loads::none(), &cons, &quasi_static()).unwrap();
    assert!(report.converged(), "{:?}", report.termination);
    for (d, s) in &cons.entries {
        assert_eq!(report.final_dofs.as_slice()[*d], s.value_at(report.steps.len()));
    }
    let mech = ForwardMechanics::new(&model, &q, &Loads::none(), 0.0).unwrap();
    let cfg = SolverConfig::default();
    let mut stepper = Stepper::new(&mech, &cons, &cfg).unwrap();
    let mut st = State::at_rest(q);
    for k in 1..=3 {
        st = stepper.step(&st, k, 1.0).unwrap().0;
        for (d, s) in &cons.entries {
            assert_eq!(st.q.as_slice()[*d].to_bits(), s.value_at(k).to_bits());
        }
    }
}

#[test]
fn unloaded_inverse_returns_target() {
    let (model, q) = cantilever(10, 2.0);
    let mut dc = q.clone();
    for i in 0..10 {
        let p = dc.position(i);
        dc.set_position(i, Vec3::new(p.x, 0.1 * p.x * p.x, 0.02 * p.x));
    }
    let model = ElasticModel::new(model.topology.clone(), model.material, &dc).unwrap();
    let cons = ConstraintSet::clamps(&model.topology, &dc);
    let (uc, report) = inverse_solve(&model, &dc, &Loads::none(), &cons, &SolverConfig::default()).unwrap();
    assert!(report.converged());
    assert!(uc.max_abs_diff(&dc) < 1e-10);
}

#[test]
fn inverse_then_forward_recovers_target() {
    let (model, dc) = cantilever(15, 1.0);
    let loads = Loads::gravity(Vec3::new(0.0, 0.0, -0.05));
    let cons = ConstraintSet::clamps(&model.topology, &dc);
    let cfg = quasi_static();
    let (uc, inv) = inverse_solve(&model, &dc, &loads, &cons, &cfg).unwrap();
    assert!(inv.converged(), "{:?}", inv.termination);
    // The recovered rest shape curls upward against gravity.
    assert!(uc.position(14).z > 1e-3);
    let (back, fwd) = forward_solve(&model, &uc, &loads, &cons, &cfg).unwrap();
    assert!(fwd.converged(), "{:?}", fwd.termination);
    let err = (0..15)
        .map(|i| (back.position(i) - dc.position(i)).norm())
        .fold(0.0, f64::max);
    assert!(err < 1e-5, "{err}");
}

#[test]
fn solves_are_deterministic() {
    let (model, dc) = cantilever(9, 1.0);
    let loads = Loads::gravity(Vec3::new(0.0, 0.0, -0.05));
    let cons = ConstraintSet::clamps(&model.topology, &dc);
    let run = || {
        let r = inverse_solve(&model, &dc, &loads, &cons, &quasi_static()).unwrap().1;
        (r.final_dofs, r.steps.iter().map(|s| s.residual.to_bits()).collect::<Vec<_>>())
    };
    assert_eq!(run(), run());
}

#[test]
fn energies_are_nonnegative() {
    let (model, q) = cantilever(10, 1.0);
    let loads = Loads::gravity(Vec3::new(0.0, -3.0, -10.0));
    let cons = ConstraintSet::clamps(&model.topology, &q);
    let (_, report) = forward_solve(&model, &q, &loads, &cons, &quasi_static()).unwrap();
    assert!(report.converged());
    for s in &report.steps {
        assert!(s.energy.stretch >= 0.0 && s.energy.bend >= 0.0 && s.energy.twist >= 0.0);
        assert!(s.ms > 0.0);
    }
}
