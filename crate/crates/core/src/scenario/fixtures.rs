//! Desk-scale net fixtures. The shipped `.net` files are the output of the
//! generators below; a test keeps them in sync.

use crate::error::Result;
use crate::geometry::Vec3;
use crate::topology::{parse_net, Net, NetTopology};
use std::f64::consts::PI;

pub const RING_NET: &str = include_str!("../../fixtures/ring.net");
pub const KNOT_NET: &str = include_str!("../../fixtures/knot.net");
pub const FULLERENE_NET: &str = include_str!("../../fixtures/fullerene.net");

/// Parse a shipped fixture by name (`ring`, `knot`, `fullerene`).
pub fn load_fixture(name: &str) -> Result<Net> {
    match name {
        "ring" => parse_net(RING_NET),
        "knot" => parse_net(KNOT_NET),
        "fullerene" => parse_net(FULLERENE_NET),
        other => Err(crate::Error::UnknownKind(other.to_string())),
    }
}

/// Net over a graph with one bend for every pair of edges meeting at a
/// node. Edges with both ends clamped are clamped too.
pub fn net_from_graph(positions: Vec<Vec3>, edges: Vec<(usize, usize)>, clamped_nodes: Vec<usize>) -> Result<Net> {
    let n = positions.len();
    let bare = NetTopology::new(n, edges.clone(), vec![], vec![], vec![])?;
    let mut incident = vec![Vec::new(); n];
    for (k, &(a, b)) in edges.iter().enumerate() {
        incident[a].push(k);
        incident[b].push(k);
    }
    let mut bends = Vec::new();
    for (c, inc) in incident.iter().enumerate() {
        for i in 0..inc.len() {
            for j in i + 1..inc.len() {
                bends.push(bare.make_bend(inc[i], inc[j], c)?);
            }
        }
    }
    let mut is_clamped = vec![false; n];
    for &c in &clamped_nodes {
        is_clamped[c] = true;
    }
    let clamped_edges = edges
        .iter()
        .enumerate()
        .filter(|(_, (a, b))| is_clamped[*a] && is_clamped[*b])
        .map(|(k, _)| k)
        .collect();
    let topology = NetTopology::new(n, edges, bends, clamped_nodes, clamped_edges)?;
    Ok(Net { topology, positions })
}

/// Diameter of the sphere about the centroid that encloses all points.
pub fn bounding_diameter(points: &[Vec3]) -> f64 {
    let c = points.iter().fold(Vec3::zeros(), |a, p| a + p) / points.len() as f64;
    2.0 * points.iter().map(|p| (p - c).norm()).fold(0.0, f64::max)
}

/// Cylindrical cage of vertical rods and horizontal hoops, hanging from
/// its clamped top hoop. Vertical segments between hoops are split in two.
pub fn generate_ring_net() -> Result<Net> {
    let (m, k) = (32usize, 5usize);
    let (radius, height) = (1.0, 0.6);
    let at = |u: usize, z: f64| {
        let phi = 2.0 * PI * u as f64 / m as f64;
        Vec3::new(radius * phi.cos(), radius * phi.sin(), -z)
    };
    let dz = height / k as f64;
    let mut pos: Vec<Vec3> = Vec::new();
    for v in 0..=k {
        for u in 0..m {
            pos.push(at(u, v as f64 * dz));
        }
    }
    let joint = |u: usize, v: usize| v * m + u % m;
    let mut edges = Vec::new();
    for v in 0..=k {
        for u in 0..m {
            edges.push((joint(u, v), joint(u + 1, v)));
        }
    }
    let mut clamped: Vec<usize> = (0..m).collect();
    for v in 0..k {
        for u in 0..m {
            let mid = pos.len();
            pos.push(at(u, (v as f64 + 0.5) * dz));
            if v == 0 {
                clamped.push(mid);
            }
            edges.push((joint(u, v), mid));
            edges.push((mid, joint(u, v + 1)));
        }
    }
    net_from_graph(pos, edges, clamped)
}

/// Three strands braided around a trefoil, tied by triangular rungs at
/// regular stations. One station and its neighbourhood are clamped.
pub fn generate_knot_net() -> Result<Net> {
    let (samples, every, tube) = (96usize, 4usize, 0.25);
    let c = |t: f64| Vec3::new(t.sin() + 2.0 * (2.0 * t).sin(), t.cos() - 2.0 * (2.0 * t).cos(), -(3.0 * t).sin());
    let d1 = |t: f64| Vec3::new(t.cos() + 4.0 * (2.0 * t).cos(), -t.sin() + 4.0 * (2.0 * t).sin(), -3.0 * (3.0 * t).cos());
    let d2 = |t: f64| Vec3::new(-t.sin() - 8.0 * (2.0 * t).sin(), -t.cos() + 8.0 * (2.0 * t).cos(), 9.0 * (3.0 * t).sin());
    let mut pos = Vec::with_capacity(3 * samples);
    for s in 0..3 {
        let alpha = 2.0 * PI * s as f64 / 3.0;
        for i in 0..samples {
            let t = 2.0 * PI * i as f64 / samples as f64;
            let tan = d1(t).normalize();
            let b = d1(t).cross(&d2(t)).normalize();
            let n = b.cross(&tan);
            pos.push(c(t) + (n * alpha.cos() + b * alpha.sin()) * tube);
        }
    }
    let scale = 6.4 / bounding_diameter(&pos);
    for p in pos.iter_mut() {
        *p *= scale;
    }
    let id = |s: usize, i: usize| s * samples + i % samples;
    let mut edges = Vec::new();
    for s in 0..3 {
        for i in 0..samples {
            edges.push((id(s, i), id(s, i + 1)));
        }
    }
    for i in (0..samples).step_by(every) {
        for s in 0..3 {
            edges.push((id(s, i), id((s + 1) % 3, i)));
        }
    }
    let clamped = (0..3).flat_map(|s| [id(s, 0), id(s, 1)]).collect();
    net_from_graph(pos, edges, clamped)
}

/// Truncated icosahedron with every edge split into six, scaled to a
/// 7.1 m bounding sphere. The bottom rod is clamped.
pub fn generate_fullerene_net() -> Result<Net> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let base = [
        [0.0, 1.0, 3.0 * phi],
        [1.0, 2.0 + phi, 2.0 * phi],
        [phi, 2.0, phi * phi * phi],
    ];
    let mut verts: Vec<Vec3> = Vec::new();
    for b in base {
        for perm in [[0, 1, 2], [1, 2, 0], [2, 0, 1]] {
            for sx in [1.0, -1.0] {
                for sy in [1.0, -1.0] {
                    for sz in [1.0, -1.0] {
                        let p = Vec3::new(sx * b[perm[0]], sy * b[perm[1]], sz * b[perm[2]]);
                        if !verts.iter().any(|q| (q - p).norm() < 1e-9) {
                            verts.push(p);
                        }
                    }
                }
            }
        }
    }
    let scale = 3.55 / (9.0 * phi + 10.0).sqrt();
    let mut pos: Vec<Vec3> = verts.iter().map(|v| v * scale).collect();
    let mut edges = Vec::new();
    let nv = verts.len();
    for a in 0..nv {
        for b in a + 1..nv {
            if ((verts[a] - verts[b]).norm() - 2.0).abs() > 1e-9 {
                continue;
            }
            let mut prev = a;
            for s in 1..6 {
                let id = pos.len();
                pos.push(pos[a] + (pos[b] - pos[a]) * (s as f64 / 6.0));
                edges.push((prev, id));
                prev = id;
            }
            edges.push((prev, b));
        }
    }
    let zmin = pos.iter().map(|p| p.z).fold(f64::INFINITY, f64::min);
    let clamped = (0..pos.len()).filter(|&i| pos[i].z < zmin + 1e-9).collect();
    net_from_graph(pos, edges, clamped)
}
