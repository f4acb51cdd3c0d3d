//! Polyline OBJ snapshots and CSV logs.

use crate::dofs::DofVector;
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::scenario::{AngleSample, RoundTrip};
use crate::solver::SolveReport;
use crate::topology::NetTopology;
use std::fmt::Write as _;
use std::path::Path;

pub const ENERGIES_HEADER: &str = "step,Es,Eb,Et,total,residual,ms";

/// Snapshot file name for step `k`.
pub fn frame_name(step: usize) -> String {
    format!("frame_{step:06}.obj")
}

/// Split the edge graph into maximal polylines through valence-2 nodes.
/// Closed loops without a branch node come out as cycles that repeat their
/// first node at the end. Indices are 0-based.
pub fn polylines(topology: &NetTopology) -> Vec<Vec<usize>> {
    let n = topology.node_count;
    let mut incident = vec![Vec::new(); n];
    for (k, &(a, b)) in topology.edges.iter().enumerate() {
        incident[a].push(k);
        incident[b].push(k);
    }
    let other = |k: usize, v: usize| {
        let (a, b) = topology.edges[k];
        if a == v {
            b
        } else {
            a
        }
    };
    let mut used = vec![false; topology.edges.len()];
    let mut out = Vec::new();
    let walk = |start: usize, first: usize, used: &mut Vec<bool>| {
        let mut line = vec![start];
        let (mut v, mut k) = (start, first);
        loop {
            used[k] = true;
            v = other(k, v);
            line.push(v);
            if incident[v].len() != 2 {
                break;
            }
            match incident[v].iter().find(|&&e| !used[e]) {
                Some(&e) => k = e,
                None => break,
            }
        }
        line
    };
    for v in 0..n {
        if incident[v].len() == 2 {
            continue;
        }
        for &k in &incident[v] {
            if !used[k] {
                out.push(walk(v, k, &mut used));
            }
        }
    }
    for k in 0..topology.edges.len() {
        if !used[k] {
            out.push(walk(topology.edges[k].0, k, &mut used));
        }
    }
    out
}

/// OBJ text: one `v` line per node and one `l` record per polyline.
pub fn obj_string(topology: &NetTopology, q: &DofVector) -> String {
    let mut s = String::new();
    for p in q.positions() {
        let _ = writeln!(s, "v {} {} {}", p.x, p.y, p.z);
    }
    for line in polylines(topology) {
        s.push('l');
        for i in line {
            let _ = write!(s, " {}", i + 1);
        }
        s.push('\n');
    }
    s
}

/// Vertices and polylines (0-based) of an OBJ file. Other records are ignored.
pub fn parse_obj(text: &str) -> Result<(Vec<Vec3>, Vec<Vec<usize>>)> {
    let mut verts = Vec::new();
    let mut lines = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let bad = |msg: &str| Error::Parse {
            line: ln + 1,
            msg: msg.to_string(),
        };
        let mut tok = raw.split_whitespace();
        match tok.next() {
            Some("v") => {
                let c: Vec<f64> = tok
                    .map(|t| t.parse::<f64>().map_err(|_| bad("bad coordinate")))
                    .collect::<Result<_>>()?;
                if c.len() != 3 {
                    return Err(bad("vertex needs three coordinates"));
                }
                verts.push(Vec3::new(c[0], c[1], c[2]));
            }
            Some("l") => {
                let idx: Vec<usize> = tok
                    .map(|t| match t.parse::<usize>() {
                        Ok(i) if i >= 1 => Ok(i - 1),
                        _ => Err(bad("bad vertex index")),
                    })
                    .collect::<Result<_>>()?;
                if idx.len() < 2 {
                    return Err(bad("polyline needs two vertices"));
                }
                lines.push(idx);
            }
            _ => {}
        }
    }
    if let Some(&i) = lines.iter().flatten().find(|&&i| i >= verts.len()) {
        return Err(Error::Parse {
            line: 0,
            msg: format!("vertex index {} out of range", i + 1),
        });
    }
    Ok((verts, lines))
}

pub fn write_obj(path: &Path, topology: &NetTopology, q: &DofVector) -> Result<()> {
    std::fs::write(path, obj_string(topology, q))?;
    Ok(())
}

/// `energies.csv` body, one row per step.
pub fn energies_csv(report: &SolveReport) -> String {
    let mut s = format!("{ENERGIES_HEADER}\n");
    for r in &report.steps {
        let e = &r.energy;
        let _ = writeln!(
            s,
            "{},{:e},{:e},{:e},{:e},{:e},{:.3}",
            r.step,
            e.stretch,
            e.bend,
            e.twist,
            e.total(),
            r.residual,
            r.ms
        );
    }
    s
}

/// Per-node round-trip error followed by an `rms` row.
pub fn roundtrip_csv(rt: &RoundTrip) -> String {
    let mut s = String::from("node,error\n");
    for (i, e) in rt.node_errors.iter().enumerate() {
        let _ = writeln!(s, "{i},{e:e}");
    }
    let _ = writeln!(s, "rms,{:e}", rt.rms);
    s
}

pub fn oracle_csv(samples: &[AngleSample]) -> String {
    let mut s = String::from("s,simulated,oracle,abs_error\n");
    for a in samples {
        let _ = writeln!(s, "{},{:e},{:e},{:e}", a.s, a.simulated, a.oracle, (a.simulated - a.oracle).abs());
    }
    s
}
