//! Connectivity of rods and rod networks.
//!
//! Bend signs are stated relative to the bend's traversal `p → c → q`:
//! `sign_i = +1` when edge `i` is stored `p → c`, `sign_j = +1` when edge
//! `j` is stored `c → q`. A chain built by [`NetTopology::build_chain`]
//! therefore has all signs `+1`.

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

/// A bend element joining two edges at a shared node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bend {
    pub edge_i: usize,
    pub edge_j: usize,
    pub center: usize,
    pub sign_i: i8,
    pub sign_j: i8,
}

/// Nodes, directed edges, bends and clamp sets of a rod or net.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetTopology {
    pub node_count: usize,
    pub edges: Vec<(usize, usize)>,
    pub bends: Vec<Bend>,
    pub clamped_nodes: Vec<usize>,
    pub clamped_edges: Vec<usize>,
}

/// Global DOF stencils of every element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementMaps {
    /// `[x_a (3), x_b (3), θ]` per edge.
    pub edges: Vec<[usize; 7]>,
    /// `[x_p (3), x_c (3), x_q (3), θ_i, θ_j]` per bend.
    pub bends: Vec<[usize; 11]>,
}

/// `+1` when `edge` is directed away from `center`, `−1` when toward it.
pub fn orientation_sign(edge: (usize, usize), edge_index: usize, center: usize) -> Result<i8> {
    if edge.0 == center {
        Ok(1)
    } else if edge.1 == center {
        Ok(-1)
    } else {
        Err(Error::NotIncident {
            edge: edge_index,
            node: center,
        })
    }
}

impl NetTopology {
    /// Validate and build a topology. Clamp sets are sorted and deduplicated.
    pub fn new(
        node_count: usize,
        edges: Vec<(usize, usize)>,
        bends: Vec<Bend>,
        mut clamped_nodes: Vec<usize>,
        mut clamped_edges: Vec<usize>,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        for (k, &(a, b)) in edges.iter().enumerate() {
            if a >= node_count || b >= node_count {
                return Err(Error::InvalidEdge {
                    edge: k,
                    reason: "endpoint out of range".into(),
                });
            }
            if a == b {
                return Err(Error::InvalidEdge {
                    edge: k,
                    reason: "self loop".into(),
                });
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidEdge {
                    edge: k,
                    reason: "duplicate edge".into(),
                });
            }
        }
        clamped_nodes.sort_unstable();
        clamped_nodes.dedup();
        clamped_edges.sort_unstable();
        clamped_edges.dedup();
        if let Some(&n) = clamped_nodes.iter().find(|&&n| n >= node_count) {
            return Err(Error::OutOfRange(n as f64));
        }
        if let Some(&e) = clamped_edges.iter().find(|&&e| e >= edges.len()) {
            return Err(Error::OutOfRange(e as f64));
        }
        let topo = Self {
            node_count,
            edges,
            bends,
            clamped_nodes,
            clamped_edges,
        };
        for b in &topo.bends {
            topo.check_bend(b)?;
        }
        Ok(topo)
    }

    /// A single open rod through the given nodes.
    pub fn build_chain(node_positions: &[Vec3]) -> Result<Self> {
        let n = node_positions.len();
        if n < 2 {
            return Err(Error::TooFewNodes(n));
        }
        let edges = (0..n - 1).map(|i| (i, i + 1)).collect();
        let bends = (0..n.saturating_sub(2))
            .map(|i| Bend {
                edge_i: i,
                edge_j: i + 1,
                center: i + 1,
                sign_i: 1,
                sign_j: 1,
            })
            .collect();
        Self::new(n, edges, bends, vec![], vec![])
    }

    /// Build a bend between two edges sharing `center`, deriving signs.
    pub fn make_bend(&self, edge_i: usize, edge_j: usize, center: usize) -> Result<Bend> {
        let invalid = |reason: &str| Error::InvalidBend {
            edge_i,
            edge_j,
            center,
            reason: reason.into(),
        };
        let ei = *self.edges.get(edge_i).ok_or_else(|| invalid("edge out of range"))?;
        let ej = *self.edges.get(edge_j).ok_or_else(|| invalid("edge out of range"))?;
        let si = -orientation_sign(ei, edge_i, center).map_err(|_| invalid("edge i not at center"))?;
        let sj = orientation_sign(ej, edge_j, center).map_err(|_| invalid("edge j not at center"))?;
        let b = Bend {
            edge_i,
            edge_j,
            center,
            sign_i: si,
            sign_j: sj,
        };
        self.check_bend(&b)?;
        Ok(b)
    }

    fn check_bend(&self, b: &Bend) -> Result<()> {
        let invalid = |reason: &str| Error::InvalidBend {
            edge_i: b.edge_i,
            edge_j: b.edge_j,
            center: b.center,
            reason: reason.into(),
        };
        if b.edge_i == b.edge_j {
            return Err(invalid("edges coincide"));
        }
        let ei = *self.edges.get(b.edge_i).ok_or_else(|| invalid("edge out of range"))?;
        let ej = *self.edges.get(b.edge_j).ok_or_else(|| invalid("edge out of range"))?;
        let si = orientation_sign(ei, b.edge_i, b.center).map_err(|_| invalid("edges not adjacent at center"))?;
        let sj = orientation_sign(ej, b.edge_j, b.center).map_err(|_| invalid("edges not adjacent at center"))?;
        if b.sign_i != -si || b.sign_j != sj {
            return Err(invalid("signs disagree with edge directions"));
        }
        Ok(())
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn bend_count(&self) -> usize {
        self.bends.len()
    }

    pub fn dof_count(&self) -> usize {
        3 * self.node_count + self.edges.len()
    }

    /// Nodes `(p, c, q)` of bend `b` in traversal order.
    pub fn bend_nodes(&self, b: usize) -> (usize, usize, usize) {
        let bend = &self.bends[b];
        let other = |e: usize| {
            let (a, bb) = self.edges[e];
            if a == bend.center {
                bb
            } else {
                a
            }
        };
        (other(bend.edge_i), bend.center, other(bend.edge_j))
    }

    pub fn element_maps(&self) -> ElementMaps {
        let nv = self.node_count;
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| [3 * a, 3 * a + 1, 3 * a + 2, 3 * b, 3 * b + 1, 3 * b + 2, 3 * nv + k])
            .collect();
        let bends = (0..self.bends.len())
            .map(|i| {
                let (p, c, q) = self.bend_nodes(i);
                let b = &self.bends[i];
                [
                    3 * p,
                    3 * p + 1,
                    3 * p + 2,
                    3 * c,
                    3 * c + 1,
                    3 * c + 2,
                    3 * q,
                    3 * q + 1,
                    3 * q + 2,
                    3 * nv + b.edge_i,
                    3 * nv + b.edge_j,
                ]
            })
            .collect();
        ElementMaps { edges, bends }
    }

    /// Indices of every DOF fixed by the clamp sets, sorted.
    pub fn clamped_dofs(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .clamped_nodes
            .iter()
            .flat_map(|&n| [3 * n, 3 * n + 1, 3 * n + 2])
            .chain(self.clamped_edges.iter().map(|&e| 3 * self.node_count + e))
            .collect();
        out.sort_unstable();
        out
    }

    /// Reverse the stored direction of edge `k`, fixing the signs of every
    /// bend that uses it.
    pub fn reverse_edge(&mut self, k: usize) {
        let (a, b) = self.edges[k];
        self.edges[k] = (b, a);
        for bend in &mut self.bends {
            if bend.edge_i == k {
                bend.sign_i = -bend.sign_i;
            }
            if bend.edge_j == k {
                bend.sign_j = -bend.sign_j;
            }
        }
    }
}

/// A net description: topology plus node positions.
#[derive(Debug, Clone, PartialEq)]
pub struct Net {
    pub topology: NetTopology,
    pub positions: Vec<Vec3>,
}

impl Net {
    /// Serialise in the line-oriented net format.
    pub fn to_net_string(&self) -> String {
        let mut s = String::new();
        for p in &self.positions {
            let _ = writeln!(s, "v {} {} {}", p.x, p.y, p.z);
        }
        for &(a, b) in &self.topology.edges {
            let _ = writeln!(s, "e {a} {b}");
        }
        for b in &self.topology.bends {
            let _ = writeln!(
                s,
                "b {} {} {} {} {}",
                b.edge_i, b.edge_j, b.center, b.sign_i, b.sign_j
            );
        }
        for n in &self.topology.clamped_nodes {
            let _ = writeln!(s, "clamp_node {n}");
        }
        for e in &self.topology.clamped_edges {
            let _ = writeln!(s, "clamp_edge {e}");
        }
        s
    }
}

/// Parse a net file.
pub fn parse_net(text: &str) -> Result<Net> {
    let mut positions = Vec::new();
    let mut edges = Vec::new();
    let mut bends = Vec::new();
    let mut clamp_nodes = Vec::new();
    let mut clamp_edges = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut it = body.split_whitespace();
        let tag = it.next().unwrap_or_default();
        let fields: Vec<&str> = it.collect();
        let perr = |msg: String| Error::Parse { line, msg };
        let want = |n: usize| {
            if fields.len() == n {
                Ok(())
            } else {
                Err(perr(format!("'{tag}' expects {n} fields, got {}", fields.len())))
            }
        };
        let uint = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| perr(format!("bad index '{s}'")))
        };
        let sign = |s: &str| match s {
            "1" | "+1" => Ok(1i8),
            "-1" => Ok(-1i8),
            _ => Err(perr(format!("bad sign '{s}'"))),
        };
        match tag {
            "v" => {
                want(3)?;
                let mut xyz = [0.0; 3];
                for (k, f) in fields.iter().enumerate() {
                    xyz[k] = f
                        .parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| perr(format!("bad coordinate '{f}'")))?;
                }
                positions.push(Vec3::from(xyz));
            }
            "e" => {
                want(2)?;
                edges.push((uint(fields[0])?, uint(fields[1])?));
            }
            "b" => {
                want(5)?;
                bends.push(Bend {
                    edge_i: uint(fields[0])?,
                    edge_j: uint(fields[1])?,
                    center: uint(fields[2])?,
                    sign_i: sign(fields[3])?,
                    sign_j: sign(fields[4])?,
                });
            }
            "clamp_node" => {
                want(1)?;
                clamp_nodes.push(uint(fields[0])?);
            }
            "clamp_edge" => {
                want(1)?;
                clamp_edges.push(uint(fields[0])?);
            }
            other => return Err(perr(format!("unknown record '{other}'"))),
        }
    }
    let topology = NetTopology::new(positions.len(), edges, bends, clamp_nodes, clamp_edges)?;
    Ok(Net {
        topology,
        positions,
    })
}

/// Read and parse a net file from disk.
pub fn load_net(path: impl AsRef<Path>) -> Result<Net> {
    parse_net(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const X_JOINT: &str = "\
# two rods crossing at node 4
v -1 0 0
v 1 0 0
v 0 -1 0
v 0 1 0
v 0 0 0
e 0 4
e 4 1
e 2 4
e 3 4
b 0 1 4 1 1
b 2 3 4 1 -1
";

    #[test]
    fn chain_counts() {
        let pts = |n: usize| (0..n).map(|i| Vec3::new(i as f64, 0.0, 0.0)).collect::<Vec<_>>();
        let t = NetTopology::build_chain(&pts(2)).unwrap();
        assert_eq!((t.edges.len(), t.bends.len()), (1, 0));
        let t = NetTopology::build_chain(&pts(500)).unwrap();
        assert_eq!((t.edges.len(), t.bends.len()), (499, 498));
        assert!(t.bends.iter().all(|b| b.sign_i == 1 && b.sign_j == 1));
        assert_eq!(NetTopology::build_chain(&pts(1)), Err(Error::TooFewNodes(1)));
    }

    #[test]
    fn x_joint_fixture() {
        let net = parse_net(X_JOINT).unwrap();
        let t = &net.topology;
        assert_eq!(t.bends.len(), 2);
        assert_eq!((t.bends[0].sign_i, t.bends[0].sign_j), (1, 1));
        assert_eq!((t.bends[1].sign_i, t.bends[1].sign_j), (1, -1));
        assert_eq!(t.bend_nodes(1), (2, 4, 3));
    }

    #[test]
    fn chain_file_matches_builder() {
        let pts: Vec<Vec3> = (0..5).map(|i| Vec3::new(i as f64, 0.0, 0.0)).collect();
        let chain = NetTopology::build_chain(&pts).unwrap();
        let text = Net {
            topology: chain.clone(),
            positions: pts.clone(),
        }
        .to_net_string();
        let parsed = parse_net(&text).unwrap();
        assert_eq!(parsed.topology, chain);
        assert_eq!(parsed.positions, pts);
    }

    #[test]
    fn bad_bends_and_lines() {
        let bad = "v 0 0 0\nv 1 0 0\nv 2 0 0\nv 3 0 0\ne 0 1\ne 2 3\nb 0 1 1 1 1\n";
        assert!(matches!(parse_net(bad), Err(Error::InvalidBend { edge_i: 0, edge_j: 1, center: 1, .. })));
        let wrong_sign = "v 0 0 0\nv 1 0 0\nv 2 0 0\ne 0 1\ne 1 2\nb 0 1 1 -1 1\n";
        assert!(matches!(parse_net(wrong_sign), Err(Error::InvalidBend { .. })));
        let garbage = "v 0 0 0\nv 1 x 0\n";
        assert!(matches!(parse_net(garbage), Err(Error::Parse { line: 2, .. })));
        let dup = "v 0 0 0\nv 1 0 0\ne 0 1\ne 1 0\n";
        assert!(matches!(parse_net(dup), Err(Error::InvalidEdge { edge: 1, .. })));
    }

    #[test]
    fn orientation_sign_rule() {
        assert_eq!(orientation_sign((3, 7), 0, 3), Ok(1));
        assert_eq!(orientation_sign((7, 3), 0, 3), Ok(-1));
        assert_eq!(orientation_sign((3, 7), 0, 7), Ok(-1));
        assert_eq!(
            orientation_sign((1, 2), 4, 5),
            Err(Error::NotIncident { edge: 4, node: 5 })
        );
    }

    #[test]
    fn stencils_and_reversal() {
        let mut t = parse_net(X_JOINT).unwrap().topology;
        let maps = t.element_maps();
        assert_eq!(maps.edges[1], [12, 13, 14, 3, 4, 5, 16]);
        assert_eq!(maps.bends[1][9..], [17, 18]);
        t.reverse_edge(3);
        assert_eq!(t.edges[3], (4, 3));
        assert_eq!(t.bends[1].sign_j, 1);
        assert!(t.check_bend(&t.bends[1]).is_ok());
    }
}
