//! Closed-form rest shape of a planar cantilever whose loaded shape is a
//! straight horizontal beam.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CantileverOracle {
    /// Elasto-gravitational parameter `ρAgL³/EI`.
    pub gamma: f64,
    /// Beam length, m.
    pub length: f64,
}

/// Largest `γ` for which a rest shape exists.
pub fn max_gamma() -> f64 {
    3.0 * PI
}

/// Rest-shape tangent angle at normalised arclength `s`.
pub fn oracle_theta(oracle: &CantileverOracle, s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::OutOfRange(s));
    }
    Ok(oracle.gamma * s * (s * s - 3.0 * s + 3.0) / 6.0)
}

/// Rest-shape centreline in the (x, z) plane, integrated from the angle
/// field with composite Gauss-Legendre quadrature. Returns `n` points at
/// uniform arclength.
pub fn oracle_shape(oracle: &CantileverOracle, n: usize) -> Result<Vec<[f64; 2]>> {
    if n < 2 {
        return Err(Error::OutOfRange(n as f64));
    }
    // 5-point rule on each of `sub` sub-intervals per sample interval.
    const X: [f64; 5] = [
        0.0,
        -0.538_469_310_105_683,
        0.538_469_310_105_683,
        -0.906_179_845_938_664,
        0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.568_888_888_888_889,
        0.478_628_670_499_366,
        0.478_628_670_499_366,
        0.236_926_885_056_189,
        0.236_926_885_056_189,
    ];
    let sub = 8;
    let g = oracle.gamma;
    let th = |s: f64| g * s * (s * s - 3.0 * s + 3.0) / 6.0;
    let mut out = vec![[0.0, 0.0]];
    let (mut x, mut z) = (0.0, 0.0);
    let ds = 1.0 / (n - 1) as f64;
    for i in 0..n - 1 {
        for j in 0..sub {
            let a = (i as f64 + j as f64 / sub as f64) * ds;
            let h = ds / sub as f64;
            for k in 0..5 {
                let s = a + 0.5 * h * (1.0 + X[k]);
                let t = th(s);
                x += 0.5 * h * W[k] * t.cos();
                z += 0.5 * h * W[k] * t.sin();
            }
        }
        out.push([x * oracle.length, z * oracle.length]);
    }
    Ok(out)
}
