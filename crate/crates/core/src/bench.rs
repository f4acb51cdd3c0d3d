//! Forward-versus-inverse per-step timing.

use crate::error::Result;
use crate::scenario::Problem;
use crate::solver::{SolveReport, SolverConfig};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Largest accepted inverse/forward per-step time ratio.
pub const PARITY_RATIO: f64 = 2.0;

pub const BENCH_HEADER: &str = "case,vertices,edges,bends,forward_s,forward_ms_per_step,inverse_s,inverse_ms_per_step";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub case: String,
    pub vertices: usize,
    pub edges: usize,
    pub bends: usize,
    pub forward_s: f64,
    pub forward_ms_per_step: f64,
    pub inverse_s: f64,
    pub inverse_ms_per_step: f64,
}

impl BenchRow {
    pub fn ratio(&self) -> f64 {
        self.inverse_ms_per_step / self.forward_ms_per_step
    }

    pub fn within_parity(&self) -> bool {
        self.ratio() <= PARITY_RATIO
    }
}

fn timed(report: &SolveReport) -> (f64, f64) {
    (report.total_ms() * 1e-3, report.ms_per_step())
}

/// Run the inverse solve, then the forward solve from its rest shape for
/// the same number of steps, and time the Newton loops.
pub fn bench_case(problem: &Problem) -> Result<BenchRow> {
    let (uc, inverse) = problem.inverse()?;
    let mut p = problem.clone();
    p.config = SolverConfig {
        max_steps: inverse.steps.len().max(1),
        fixed_steps: true,
        ..p.config
    };
    let (_, forward) = p.forward(&uc)?;
    let (inverse_s, inverse_ms_per_step) = timed(&inverse);
    let (forward_s, forward_ms_per_step) = timed(&forward);
    let t = &p.model.topology;
    Ok(BenchRow {
        case: p.name.clone(),
        vertices: t.node_count,
        edges: t.edge_count(),
        bends: t.bend_count(),
        forward_s,
        forward_ms_per_step,
        inverse_s,
        inverse_ms_per_step,
    })
}

/// One row per case, in order. Cases run one after another.
pub fn bench_report(cases: &[Problem]) -> Result<Vec<BenchRow>> {
    cases.iter().map(bench_case).collect()
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut s = format!("{BENCH_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.case, r.vertices, r.edges, r.bends, r.forward_s, r.forward_ms_per_step, r.inverse_s, r.inverse_ms_per_step
        );
    }
    s
}
