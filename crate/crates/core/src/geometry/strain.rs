use super::frames::FrameSeed;
use super::kernel::{self, bend_strains, bend_vars, unpack};
use super::v3::V3;
use super::Vec3;
use crate::dofs::DofVector;
use crate::error::{Error, Result};
use crate::topology::NetTopology;

/// Discrete curvature binormal `2 e1×e2 / (|e1||e2| + e1·e2)`.
pub fn curvature_binormal(e1: &Vec3, e2: &Vec3) -> Result<Vec3> {
    let (a, b) = (V3::<f64>::cst(e1), V3::cst(e2));
    kernel::binormal(a, b, a.norm(), b.norm()).map(|k| k.value())
}

/// Material curvatures of a bend from its binormal and the material
/// directors `(m1, m2)` of both incident edges.
pub fn material_curvatures(kb: &Vec3, edge_a: (&Vec3, &Vec3), edge_b: (&Vec3, &Vec3)) -> (f64, f64) {
    let k1 = 0.5 * (edge_a.0 + edge_b.0).dot(kb);
    let k2 = -0.5 * (edge_a.1 + edge_b.1).dot(kb);
    (k1, k2)
}

/// Axial strain `|e|/ℓ̄ − 1`.
pub fn stretch_strain(e: &Vec3, rest_len: f64) -> Result<f64> {
    if !(rest_len > 0.0) {
        return Err(Error::ZeroRestLength { edge: None });
    }
    Ok(e.norm() / rest_len - 1.0)
}

/// Twist strain `θ2 − θ1 + φ_ref`; angles are not wrapped.
pub fn twist_strain(theta1: f64, theta2: f64, phi_ref: f64) -> f64 {
    theta2 - theta1 + phi_ref
}

/// Strain measures of one configuration.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StrainState {
    pub eps: Vec<f64>,
    pub kappa1: Vec<f64>,
    pub kappa2: Vec<f64>,
    pub tau: Vec<f64>,
    /// Voronoi length per bend: mean of the two incident rest lengths.
    pub voronoi: Vec<f64>,
}

/// Evaluate every strain measure of `dofs` against the frame seed and the
/// supplied per-edge rest lengths.
pub fn compute_strain_state(
    topology: &NetTopology,
    dofs: &DofVector,
    seed: &FrameSeed,
    rest_lengths: &[f64],
) -> Result<StrainState> {
    if rest_lengths.len() != topology.edges.len() {
        return Err(Error::DimensionMismatch {
            expected: topology.edges.len(),
            got: rest_lengths.len(),
        });
    }
    let mut out = StrainState::default();
    for (k, &(a, b)) in topology.edges.iter().enumerate() {
        let e = dofs.position(b) - dofs.position(a);
        out.eps
            .push(stretch_strain(&e, rest_lengths[k]).map_err(|e| e.at_edge(k))?);
    }
    for (i, bend) in topology.bends.iter().enumerate() {
        let (p, c, q) = topology.bend_nodes(i);
        let x = bend_vars(
            &dofs.position(p),
            &dofs.position(c),
            &dofs.position(q),
            dofs.theta(bend.edge_i),
            dofs.theta(bend.edge_j),
        );
        let (e1, e2, ta, tb) = unpack(&x);
        let s = bend_strains(e1, e2, ta, tb, &seed.bends[i]).map_err(|e| e.at_bend(i))?;
        out.kappa1.push(s.kappa1);
        out.kappa2.push(s.kappa2);
        out.tau.push(s.tau);
        out.voronoi
            .push(0.5 * (rest_lengths[bend.edge_i] + rest_lengths[bend.edge_j]));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::NetTopology;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn binormal_examples() {
        let x = Vec3::x();
        assert_eq!(curvature_binormal(&x, &x).unwrap(), Vec3::zeros());
        assert_eq!(
            curvature_binormal(&x, &Vec3::y()).unwrap(),
            Vec3::new(0.0, 0.0, 2.0)
        );
        assert!(matches!(
            curvature_binormal(&x, &-x),
            Err(Error::TurningSingularity { .. })
        ));
    }

    #[test]
    fn material_curvature_examples() {
        let z = Vec3::z();
        let y = Vec3::y();
        assert_eq!(
            material_curvatures(&Vec3::zeros(), (&z, &y), (&z, &y)),
            (0.0, 0.0)
        );
        let kb = Vec3::new(0.0, 0.0, 2.0);
        assert_eq!(material_curvatures(&kb, (&z, &y), (&z, &y)), (2.0, 0.0));
        let m2 = Vec3::new(0.0, 0.3, 0.7);
        let (a1, a2) = material_curvatures(&kb, (&z, &m2), (&z, &m2));
        let (b1, b2) = material_curvatures(&kb, (&z, &-m2), (&z, &-m2));
        assert_eq!(a1, b1);
        assert_eq!(a2, -b2);
    }

    #[test]
    fn stretch_and_twist_examples() {
        assert_eq!(stretch_strain(&Vec3::x(), 1.0).unwrap(), 0.0);
        assert!((stretch_strain(&Vec3::new(1.1, 0.0, 0.0), 1.0).unwrap() - 0.1).abs() < 1e-15);
        assert!(matches!(
            stretch_strain(&Vec3::x(), 0.0),
            Err(Error::ZeroRestLength { .. })
        ));
        assert_eq!(twist_strain(0.0, 0.0, 0.0), 0.0);
        assert!((twist_strain(0.1, 0.4, 0.05) - 0.35).abs() < 1e-15);
        assert_eq!(twist_strain(0.0, 2.0 * PI, 0.0), 2.0 * PI);
    }

    fn polyline(points: &[Vec3]) -> (NetTopology, DofVector) {
        let topo = NetTopology::build_chain(points).unwrap();
        let dofs = DofVector::from_positions(points, topo.edges.len());
        (topo, dofs)
    }

    #[test]
    fn straight_rod_is_unstrained() {
        let pts: Vec<Vec3> = (0..6).map(|i| Vec3::new(0.3 * i as f64, 0.1, -0.2)).collect();
        let (topo, dofs) = polyline(&pts);
        let seed = FrameSeed::new(&topo, &dofs).unwrap();
        let s = compute_strain_state(&topo, &dofs, &seed, &vec![0.3; 5]).unwrap();
        for v in s.eps.iter().chain(&s.kappa1).chain(&s.kappa2).chain(&s.tau) {
            assert!(v.abs() < 1e-14);
        }
    }

    #[test]
    fn regular_polygon_curvature() {
        let n = 7;
        let r = 0.5 / (PI / n as f64).sin();
        let pts: Vec<Vec3> = (0..=n)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / n as f64;
                Vec3::new(r * a.cos(), r * a.sin(), 0.0)
            })
            .collect();
        let (topo, dofs) = polyline(&pts);
        let seed = FrameSeed::new(&topo, &dofs).unwrap();
        let s = compute_strain_state(&topo, &dofs, &seed, &vec![1.0; n]).unwrap();
        let expect = 2.0 * (PI / n as f64).tan();
        for b in 0..topo.bends.len() {
            let k = s.kappa1[b].hypot(s.kappa2[b]);
            assert!((k - expect).abs() < 1e-12);
            assert!(s.eps.iter().all(|e| e.abs() < 1e-12));
        }
    }

    #[test]
    fn folded_bend_reports_index() {
        let seed_pts = [
            Vec3::zeros(),
            Vec3::x(),
            Vec3::new(2.0, 0.0, 0.0),
            Vec3::new(1.3, 0.7, 0.0),
        ];
        let (topo, mut dofs) = polyline(&seed_pts);
        let seed = FrameSeed::new(&topo, &dofs).unwrap();
        dofs.set_position(3, Vec3::new(1.0, 0.0, 0.0));
        let r = compute_strain_state(&topo, &dofs, &seed, &[1.0; 3]);
        assert_eq!(r, Err(Error::TurningSingularity { bend: Some(1) }));
    }

    proptest! {
        #[test]
        fn binormal_antisymmetric(a in prop::array::uniform3(-1.0..1.0f64), b in prop::array::uniform3(-1.0..1.0f64)) {
            let e1 = Vec3::from(a);
            let e2 = Vec3::from(b);
            prop_assume!(e1.norm() > 1e-2 && e2.norm() > 1e-2);
            prop_assume!(e1.normalize().dot(&e2.normalize()) > -0.9);
            let k12 = curvature_binormal(&e1, &e2).unwrap();
            let k21 = curvature_binormal(&e2, &e1).unwrap();
            prop_assert!((k12 + k21).norm() <= 1e-12 * (1.0 + k12.norm()));
        }

        #[test]
        fn twist_invariant_under_common_shift(t1 in -10.0..10.0f64, t2 in -10.0..10.0f64, c in -10.0..10.0f64, phi in -3.0..3.0f64) {
            let a = twist_strain(t1, t2, phi);
            let b = twist_strain(t1 + c, t2 + c, phi);
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
