use crate::config::{problem_for, Mode, RunConfig, Source};
use anyhow::{Context, Result};
use invrod_core::bench::{bench_csv, bench_report};
use invrod_core::export::{energies_csv, frame_name, obj_string, oracle_csv, roundtrip_csv};
use invrod_core::scenario::{build_problem, cantilever_angles, find_scenario, relative_angle_error, round_trip_observed};
use invrod_core::solver::{forward_solve_observed, inverse_solve_observed};
use invrod_core::{DofVector, NetTopology, SolveReport, Termination};
use serde_json::{json, Value};
use std::fs;
use std::path::{Path, PathBuf};

/// How a finished run ended, mapped onto the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Not converged, round trip over tolerance or timing parity violated.
    Failed,
    /// The inverse solve found no rest shape.
    Diverged,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Failed => 1,
            Status::Diverged => 3,
        }
    }

    fn of(report: &SolveReport) -> Self {
        match report.termination {
            Termination::Converged => Status::Ok,
            Termination::Diverged(_) => Status::Diverged,
            Termination::MaxSteps => Status::Failed,
        }
    }
}

/// Writes OBJ snapshots at step 0, every `every` steps and the last step.
struct FrameWriter<'a> {
    dir: PathBuf,
    topology: &'a NetTopology,
    every: usize,
    last: Option<usize>,
    error: Option<std::io::Error>,
}

impl<'a> FrameWriter<'a> {
    fn new(dir: &Path, topology: &'a NetTopology, every: usize) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            topology,
            every,
            last: None,
            error: None,
        })
    }

    fn write(&mut self, step: usize, q: &DofVector) {
        if self.error.is_some() || self.last == Some(step) {
            return;
        }
        if let Err(e) = fs::write(self.dir.join(frame_name(step)), obj_string(self.topology, q)) {
            self.error = Some(e);
        }
        self.last = Some(step);
    }

    fn observe(&mut self, step: usize, q: &DofVector) {
        if step % self.every == 0 {
            self.write(step, q);
        }
    }

    fn finish(mut self, report: &SolveReport) -> Result<()> {
        self.write(report.steps.len(), &report.final_dofs);
        if let Some(e) = self.error {
            return Err(e).context("writing OBJ frame");
        }
        fs::write(self.dir.join("energies.csv"), energies_csv(report)).context("writing energies.csv")?;
        Ok(())
    }
}

fn termination(report: &SolveReport) -> Value {
    match &report.termination {
        Termination::Converged => json!("converged"),
        Termination::MaxSteps => json!("max_steps"),
        Termination::Diverged(why) => json!({ "diverged": why }),
    }
}

fn report_json(report: &SolveReport) -> Value {
    let e = report.final_energy();
    json!({
        "termination": termination(report),
        "steps": report.steps.len(),
        "final_residual": report.final_residual(),
        "relaxation_tol": report.relaxation_tol,
        "energy": { "stretch": e.stretch, "bend": e.bend, "twist": e.twist, "total": e.total() },
        "total_ms": report.total_ms(),
        "ms_per_step": report.ms_per_step(),
    })
}

fn write_json(path: &Path, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

fn create_out(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

/// Run a resolved configuration, writing all outputs under `cfg.out`.
pub fn execute(cfg: &RunConfig) -> Result<Status> {
    match cfg.mode {
        Mode::Forward | Mode::Inverse => single(cfg),
        Mode::Roundtrip => roundtrip(cfg),
        Mode::Bench => bench(cfg),
        Mode::Oracle => oracle(cfg),
    }
}

fn source(cfg: &RunConfig) -> Result<&Source> {
    cfg.source.as_ref().context("no scenario selected")
}

fn single(cfg: &RunConfig) -> Result<Status> {
    let (p, _) = problem_for(source(cfg)?, cfg.nodes, &cfg.solver)?;
    create_out(&cfg.out)?;
    let mut frames = FrameWriter::new(&cfg.out, &p.model.topology, cfg.export_every)?;
    let mut obs = |k: usize, q: &DofVector| frames.observe(k, q);
    let (_, report) = if cfg.mode == Mode::Inverse {
        inverse_solve_observed(&p.model, &p.dc, &p.loads, &p.inverse_constraints, &p.config, &mut obs)?
    } else {
        // The target geometry serves as the rest shape here.
        let c = p.mirrored_constraints();
        forward_solve_observed(&p.model, &p.dc, &p.loads, &c, &p.config, &mut obs)?
    };
    frames.finish(&report)?;
    let status = Status::of(&report);
    write_json(
        &cfg.out.join("summary.json"),
        &json!({
            "scenario": p.name,
            "mode": cfg.mode,
            "vertices": p.model.topology.node_count,
            "edges": p.model.topology.edge_count(),
            "report": report_json(&report),
            "status": status.code(),
        }),
    )?;
    Ok(status)
}

fn roundtrip(cfg: &RunConfig) -> Result<Status> {
    let (p, _) = problem_for(source(cfg)?, cfg.nodes, &cfg.solver)?;
    create_out(&cfg.out)?;
    let t = &p.model.topology;
    let mut inv = FrameWriter::new(&cfg.out.join("inverse"), t, cfg.export_every)?;
    let mut fwd = FrameWriter::new(&cfg.out.join("forward"), t, cfg.export_every)?;
    let rt = round_trip_observed(&p, &mut |k, q| inv.observe(k, q), &mut |k, q| fwd.observe(k, q))?;
    inv.finish(&rt.inverse)?;
    if let Some(f) = &rt.forward {
        fwd.finish(f)?;
    }
    let status = match Status::of(&rt.inverse) {
        Status::Ok if rt.passed(p.char_length) => Status::Ok,
        Status::Ok => Status::Failed,
        other => other,
    };
    if rt.forward.is_some() {
        fs::write(cfg.out.join("roundtrip.csv"), roundtrip_csv(&rt)).context("writing roundtrip.csv")?;
    }
    write_json(
        &cfg.out.join("summary.json"),
        &json!({
            "scenario": p.name,
            "mode": cfg.mode,
            "rms": if rt.rms.is_finite() { json!(rt.rms) } else { Value::Null },
            "tolerance": 1e-3 * p.char_length,
            "inverse": report_json(&rt.inverse),
            "forward": rt.forward.as_ref().map(report_json),
            "status": status.code(),
        }),
    )?;
    Ok(status)
}

fn bench(cfg: &RunConfig) -> Result<Status> {
    let problems = match &cfg.source {
        Some(s) => vec![problem_for(s, cfg.nodes, &cfg.solver)?.0],
        None => ["spherical", "ring"]
            .iter()
            .map(|n| Ok(build_problem(&find_scenario(n)?, None)?))
            .collect::<Result<Vec<_>>>()?,
    };
    let rows = bench_report(&problems)?;
    create_out(&cfg.out)?;
    fs::write(cfg.out.join("bench.csv"), bench_csv(&rows)).context("writing bench.csv")?;
    Ok(if rows.iter().all(|r| r.within_parity()) {
        Status::Ok
    } else {
        Status::Failed
    })
}

fn oracle(cfg: &RunConfig) -> Result<Status> {
    let (p, oracle) = problem_for(source(cfg)?, None, &cfg.solver)?;
    let oracle = oracle.context("oracle mode needs the cantilever")?;
    let (uc, report) = p.inverse()?;
    let status = Status::of(&report);
    create_out(&cfg.out)?;
    let mut summary = json!({
        "scenario": p.name,
        "mode": cfg.mode,
        "report": report_json(&report),
        "status": status.code(),
    });
    if status == Status::Ok {
        let samples = cantilever_angles(&oracle, &uc)?;
        fs::write(cfg.out.join("oracle.csv"), oracle_csv(&samples)).context("writing oracle.csv")?;
        summary["relative_angle_error"] = json!(relative_angle_error(&samples));
    }
    write_json(&cfg.out.join("summary.json"), &summary)?;
    Ok(status)
}
