//! Scalar-generic element kernels shared by the value, gradient and Hessian
//! code paths. Every strain the model uses is evaluated through these
//! functions so the three paths agree bit-for-bit on values.

use super::v3::V3;
use super::Vec3;
use crate::autodiff::Real;
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Threshold on `t1·t2 + 1` below which transport is undefined.
pub const DELTA_PAR: f64 = 1e-10;
/// Relative threshold on `|e1||e2| + e1·e2` for the curvature binormal.
pub const DELTA_KB: f64 = 1e-12;

/// Minimal rotation of `a` carrying unit tangent `t1` onto `t2`.
#[inline]
pub fn transport<T: Real>(a: V3<T>, t1: V3<T>, t2: V3<T>) -> Result<V3<T>> {
    let b = t1.cross(&t2);
    let c = t1.dot(&t2);
    if !(c.value() > -1.0 + DELTA_PAR) {
        return Err(Error::AntiparallelTangents);
    }
    let ba = b.dot(&a);
    Ok(a.scale(c) + b.cross(&a) + b.scale(ba / (c + 1.0)))
}

/// `2 e1×e2 / (|e1||e2| + e1·e2)`.
#[inline]
pub fn binormal<T: Real>(e1: V3<T>, e2: V3<T>, l1: T, l2: T) -> Result<V3<T>> {
    let ll = l1 * l2;
    let denom = ll + e1.dot(&e2);
    if !(denom.value() > DELTA_KB * ll.value()) {
        return Err(Error::TurningSingularity { bend: None });
    }
    Ok(e1.cross(&e2).scale(T::cst(2.0) / denom))
}

/// Signed angle from the transported `u1` to `u2` about `t2`, raw
/// `atan2` branch in `[-π, π]`.
#[inline]
pub fn twist_angle<T: Real>(u1: V3<T>, u2: V3<T>, t1: V3<T>, t2: V3<T>) -> Result<T> {
    let pu = transport(u1, t1, t2)?;
    Ok(pu.cross(&u2).dot(&t2).atan2(pu.dot(&u2)))
}

/// Shift `phi` by a multiple of 2π so it lies within π of `anchor`.
#[inline]
pub fn unwrap_near<T: Real>(phi: T, anchor: f64) -> T {
    let k = ((anchor - phi.value()) / (2.0 * PI)).round();
    if k == 0.0 {
        phi
    } else {
        phi + 2.0 * PI * k
    }
}

/// Material directors from reference director `u`, tangent `t`, angle `th`.
#[inline]
pub fn material_frame<T: Real>(u: V3<T>, t: V3<T>, th: T) -> (V3<T>, V3<T>) {
    let v = t.cross(&u);
    let (c, s) = (th.cos(), th.sin());
    (u.scale(c) + v.scale(s), v.scale(c) - u.scale(s))
}

/// Frame seed of one edge as seen from a bend: tangent and reference
/// director at the seed configuration, already sign-corrected so the
/// tangent follows the bend traversal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeSeed {
    pub t0: Vec3,
    pub u0: Vec3,
    pub sign: f64,
}

/// Seed data for a bend element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BendSeed {
    pub a: EdgeSeed,
    pub b: EdgeSeed,
    /// Reference twist of the seed configuration; later evaluations are
    /// unwrapped to the branch nearest this value.
    pub twist_offset: f64,
}

/// Strains and lengths of one bend element.
#[derive(Debug, Clone, Copy)]
pub struct BendStrains<T> {
    pub kappa1: T,
    pub kappa2: T,
    pub tau: T,
    pub len_a: T,
    pub len_b: T,
}

/// Number of local variables of the bend kernel: `e1`, `e2`, `θa`, `θb`.
pub const BEND_VARS: usize = 8;

/// Evaluate bend strains from traversal-ordered edge vectors
/// `e1 = x_c − x_p`, `e2 = x_q − x_c` and stored twist angles.
pub fn bend_strains<T: Real>(
    e1: V3<T>,
    e2: V3<T>,
    th_a: T,
    th_b: T,
    seed: &BendSeed,
) -> Result<BendStrains<T>> {
    let l1 = e1.norm();
    let l2 = e2.norm();
    let t1 = e1.div(l1);
    let t2 = e2.div(l2);
    let u1 = transport(V3::cst(&seed.a.u0), V3::cst(&seed.a.t0), t1)?;
    let u2 = transport(V3::cst(&seed.b.u0), V3::cst(&seed.b.t0), t2)?;
    let (m1a, m2a) = material_frame(u1, t1, th_a * seed.a.sign);
    let (m1b, m2b) = material_frame(u2, t2, th_b * seed.b.sign);
    let kb = binormal(e1, e2, l1, l2)?;
    let kappa1 = (m1a + m1b).dot(&kb) * 0.5;
    let kappa2 = -((m2a + m2b).dot(&kb) * 0.5);
    let phi = unwrap_near(twist_angle(u1, u2, t1, t2)?, seed.twist_offset);
    let tau = th_b * seed.b.sign - th_a * seed.a.sign + phi;
    Ok(BendStrains {
        kappa1,
        kappa2,
        tau,
        len_a: l1,
        len_b: l2,
    })
}

/// Split the 8 local variables into kernel arguments.
#[inline]
pub fn unpack<T: Real>(x: &[T; BEND_VARS]) -> (V3<T>, V3<T>, T, T) {
    (
        V3::new(x[0], x[1], x[2]),
        V3::new(x[3], x[4], x[5]),
        x[6],
        x[7],
    )
}

/// Local bend variables from the three node positions and two angles.
pub fn bend_vars(p: &Vec3, c: &Vec3, q: &Vec3, th_a: f64, th_b: f64) -> [f64; BEND_VARS] {
    let e1 = c - p;
    let e2 = q - c;
    [e1.x, e1.y, e1.z, e2.x, e2.y, e2.z, th_a, th_b]
}

/// Map a gradient over the 8 bend variables onto the 11 node/angle DOFs
/// ordered `[x_p, x_c, x_q, θa, θb]`.
pub fn expand_gradient(g: &[f64; BEND_VARS]) -> [f64; 11] {
    let mut out = [0.0; 11];
    for k in 0..3 {
        out[k] = -g[k];
        out[3 + k] = g[k] - g[3 + k];
        out[6 + k] = g[3 + k];
    }
    out[9] = g[6];
    out[10] = g[7];
    out
}

/// Congruence `Bᵀ H B` of a Hessian over bend variables into node DOFs.
pub fn expand_hessian(h: &[[f64; BEND_VARS]; BEND_VARS]) -> [[f64; 11]; 11] {
    // Row map: each node DOF is a signed sum of bend variables.
    let mut rows = [[0.0; 11]; BEND_VARS];
    for (r, row) in h.iter().enumerate() {
        rows[r] = expand_gradient(row);
    }
    let mut out = [[0.0; 11]; 11];
    for j in 0..11 {
        let mut col = [0.0; BEND_VARS];
        for r in 0..BEND_VARS {
            col[r] = rows[r][j];
        }
        let e = expand_gradient(&col);
        for i in 0..11 {
            out[i][j] = e[i];
        }
    }
    out
}
