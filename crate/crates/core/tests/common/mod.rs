//! Small fixtures shared by the integration tests.
#![allow(dead_code)]

use invrod_core::scenario::net_from_graph;
use invrod_core::*;

/// Deterministic pseudo-random value in [-0.5, 0.5).
pub fn jitter(i: usize, salt: usize) -> f64 {
    let h = (i as u64 + 1).wrapping_mul(6364136223846793005).wrapping_add((salt as u64).wrapping_mul(1442695040888963407));
    ((h >> 11) as f64 / (1u64 << 53) as f64) - 0.5
}

pub fn perturbed(q: &DofVector, amp: f64, twist: f64, salt: usize) -> DofVector {
    let mut out = q.clone();
    let nv3 = 3 * q.node_count();
    for (i, v) in out.as_mut_slice().iter_mut().enumerate() {
        *v += if i < nv3 { amp } else { twist } * jitter(i, salt);
    }
    out
}

/// Open helix of 12 nodes.
pub fn helix_chain() -> (NetTopology, DofVector) {
    let pts: Vec<Vec3> = (0..12)
        .map(|i| {
            let a = 0.5 * i as f64;
            Vec3::new(a.cos(), a.sin(), 0.15 * i as f64)
        })
        .collect();
    let t = NetTopology::build_chain(&pts).unwrap();
    let q = DofVector::from_positions(&pts, t.edges.len());
    (t, q)
}

/// Three bent arms meeting at a valence-3 node plus a four-arm crossing
/// at the end of one arm, 16 nodes.
pub fn joint_net() -> (NetTopology, DofVector) {
    let mut pos = vec![Vec3::zeros()];
    let mut edges = Vec::new();
    let dirs = [Vec3::new(1.0, 0.0, 0.1), Vec3::new(-0.5, 0.85, -0.1), Vec3::new(-0.5, -0.8, 0.2)];
    let mut tips = Vec::new();
    for (a, d) in dirs.iter().enumerate() {
        let mut prev = 0;
        for s in 1..=3 {
            let bend = Vec3::new(0.0, 0.0, 0.08 * (s * s) as f64 * (a as f64 - 1.0));
            pos.push(d * (0.4 * s as f64) + bend);
            edges.push((prev, pos.len() - 1));
            prev = pos.len() - 1;
        }
        tips.push(prev);
    }
    // Crossing rod through the tip of the first arm.
    let c = pos[tips[0]];
    for off in [Vec3::new(0.1, 0.35, 0.0), Vec3::new(-0.05, -0.4, 0.05), Vec3::new(0.4, 0.02, -0.06)] {
        pos.push(c + off);
        let k = pos.len() - 1;
        if off.y > 0.3 {
            edges.push((tips[0], k));
        } else {
            edges.push((k, tips[0]));
        }
    }
    pos.push(pos[pos.len() - 1] + Vec3::new(0.35, 0.1, 0.05));
    edges.push((pos.len() - 2, pos.len() - 1));
    let net = net_from_graph(pos, edges, vec![]).unwrap();
    let q = DofVector::from_positions(&net.positions, net.topology.edges.len());
    (net.topology, q)
}

pub fn fixtures() -> Vec<(&'static str, NetTopology, DofVector)> {
    let (t1, q1) = helix_chain();
    let (t2, q2) = joint_net();
    assert!(t2.node_count >= 10 && t2.node_count <= 20);
    assert!(t2.bends.iter().any(|b| b.sign_i != b.sign_j));
    vec![("helix chain", t1, q1), ("joint net", t2, q2)]
}

pub fn model(t: &NetTopology, q: &DofVector) -> ElasticModel {
    ElasticModel::new(t.clone(), MaterialParams::circular(1e6, 2e-2, 1e3), q).unwrap()
}

pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let err = a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    err / scale.max(1e-300)
}

pub fn dense_err(a: &SparseMatrix, fd: &[Vec<f64>]) -> f64 {
    let d = a.to_dense();
    let scale = fd.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let err = d
        .iter()
        .flatten()
        .zip(fd.iter().flatten())
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    err / scale
}

/// Central-difference Jacobian of `f` with columns over the DOFs.
pub fn fd_jacobian(q: &DofVector, h: f64, f: impl Fn(&DofVector) -> Vec<f64>) -> Vec<Vec<f64>> {
    let n = q.len();
    let mut jac = vec![vec![0.0; n]; n];
    for j in 0..n {
        let (mut a, mut b) = (q.clone(), q.clone());
        a.as_mut_slice()[j] += h;
        b.as_mut_slice()[j] -= h;
        let (fa, fb) = (f(&a), f(&b));
        for i in 0..n {
            jac[i][j] = (fa[i] - fb[i]) / (2.0 * h);
        }
    }
    jac
}

pub fn fd_gradient(q: &DofVector, h: f64, e: impl Fn(&DofVector) -> f64) -> Vec<f64> {
    (0..q.len())
        .map(|j| {
            let (mut a, mut b) = (q.clone(), q.clone());
            a.as_mut_slice()[j] += h;
            b.as_mut_slice()[j] -= h;
            (e(&a) - e(&b)) / (2.0 * h)
        })
        .collect()
}

/// Worst relative error of each derivative check over both fixtures, with
/// its tolerance.
pub fn oracle_errors() -> Vec<(&'static str, f64, f64)> {
    use invrod_core::loads::{magnetic_energy, magnetic_force};
    let mut worst = [0.0f64; 5];
    for (_, t, rest) in fixtures() {
        let m = model(&t, &rest);
        let nat = m.natural_strains(&rest).unwrap();
        let q = perturbed(&rest, 0.03, 0.2, 1);
        let f = m.forward_forces(&q, &nat).unwrap();
        let g: Vec<f64> = fd_gradient(&q, 1e-6, |x| m.elastic_energy(x, &nat).unwrap().total())
            .iter()
            .map(|v| -v)
            .collect();
        worst[0] = worst[0].max(rel_err(&f, &g));
        let h = m.forward_hessian(&q, &nat).unwrap();
        let fd = fd_jacobian(&q, 1e-6, |x| m.forward_forces(x, &nat).unwrap().iter().map(|v| -v).collect());
        worst[1] = worst[1].max(dense_err(&h, &fd));
        let st = m.dc_stencils(&rest).unwrap();
        let inv = m.inverse_forces(&st, &q).unwrap();
        let dual = m.forward_forces(&rest, &m.natural_strains(&q).unwrap()).unwrap();
        worst[2] = worst[2].max(rel_err(&inv, &dual));
        let j = m.inverse_jacobian(&st, &q).unwrap();
        let fd = fd_jacobian(&q, 1e-6, |x| m.inverse_forces(&st, x).unwrap());
        worst[3] = worst[3].max(dense_err(&j, &fd));
        let ne = t.edges.len();
        let load = MagneticLoad {
            magnetization: (0..ne).map(|k| Vec3::new(jitter(k, 5), 1e3 * jitter(k, 6), 5e2)).collect(),
            field: Vec3::new(3e-3, -1e-3, 5e-3),
        };
        let vol = vec![m.material.area() * 0.4; ne];
        let fm = magnetic_force(&t, &m.seed, &load, &q, &vol).unwrap();
        let gm: Vec<f64> = fd_gradient(&q, 1e-6, |x| magnetic_energy(&t, &m.seed, &load, x, &vol).unwrap())
            .iter()
            .map(|v| -v)
            .collect();
        worst[4] = worst[4].max(rel_err(&fm, &gm));
    }
    vec![
        ("forward forces", worst[0], 1e-5),
        ("forward Hessian", worst[1], 1e-4),
        ("inverse forces (duality)", worst[2], 1e-10),
        ("inverse Jacobian", worst[3], 1e-4),
        ("magnetic force", worst[4], 1e-5),
    ]
}
