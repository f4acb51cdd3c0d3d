use super::{length, par_map, scatter, Assembly, ElasticModel, EnergyParts, Local, NaturalStrains, SparseMatrix};
use crate::autodiff::{Dual, Jet, Real};
use crate::dofs::DofVector;
use crate::error::Result;
use crate::geometry::kernel::BendSeed;
use crate::model::MaterialParams;
use crate::geometry::kernel::{bend_strains, bend_vars, expand_gradient, expand_hessian, unpack, BEND_VARS};
use nalgebra::Matrix3;

impl ElasticModel {
    /// Forward elastic force `−∂E/∂q` and, optionally, Hessian `∂²E/∂q²`
    /// at the current configuration.
    pub fn forward_assemble(
        &self,
        current: &DofVector,
        natural: &NaturalStrains,
        with_jacobian: bool,
    ) -> Result<Assembly> {
        let n = self.dof_count();
        let m = self.material;
        let topo = &self.topology;

        let stretch: Vec<Local<6>> = par_map(topo.edges.len(), |k| {
            let (a, b) = topo.edges[k];
            let e = current.position(b) - current.position(a);
            let l = length(&e);
            let t = e / l;
            let lb = natural.rest_len[k];
            let p = m.ea * (l - lb) / lb;
            let mut loc = Local {
                energy: [0.5 * m.ea * (l - lb) * (l - lb) / lb, 0.0, 0.0],
                force: [0.0; 6],
                jac: None,
            };
            for c in 0..3 {
                loc.force[c] = p * t[c];
                loc.force[3 + c] = -p * t[c];
            }
            if with_jacobian {
                let tt = t * t.transpose();
                let kb = tt * (m.ea / lb) + (Matrix3::identity() - tt) * (p / l);
                let mut h = Box::new([[0.0; 6]; 6]);
                for r in 0..3 {
                    for c in 0..3 {
                        let v = kb[(r, c)];
                        h[r][c] = v;
                        h[3 + r][3 + c] = v;
                        h[r][3 + c] = -v;
                        h[3 + r][c] = -v;
                    }
                }
                loc.jac = Some(h);
            }
            loc
        });

        let bends: Vec<Result<Local<11>>> = par_map(topo.bends.len(), |i| {
            let bend = &topo.bends[i];
            let (p, c, q) = topo.bend_nodes(i);
            let x = bend_vars(
                &current.position(p),
                &current.position(c),
                &current.position(q),
                current.theta(bend.edge_i),
                current.theta(bend.edge_j),
            );
            let seed = &self.seed.bends[i];
            let loc = if with_jacobian {
                let mut xj = [Jet::<BEND_VARS>::constant(0.0); BEND_VARS];
                for (k, v) in x.iter().enumerate() {
                    xj[k] = Jet::var(*v, k);
                }
                let (eb, et) = bend_energy(&xj, seed, natural, i, &m)?;
                let total = eb + et;
                Local {
                    energy: [0.0, eb.v, et.v],
                    force: negate(expand_gradient(&total.g)),
                    jac: Some(Box::new(expand_hessian(&total.h))),
                }
            } else {
                let mut xd = [Dual::<BEND_VARS>::constant(0.0); BEND_VARS];
                for (k, v) in x.iter().enumerate() {
                    xd[k] = Dual::var(*v, k);
                }
                let (eb, et) = bend_energy(&xd, seed, natural, i, &m)?;
                let total = eb + et;
                Local {
                    energy: [0.0, eb.v, et.v],
                    force: negate(expand_gradient(&total.g)),
                    jac: None,
                }
            };
            Ok(loc)
        });
        let bends = bends.into_iter().collect::<Result<Vec<_>>>()?;

        let mut energy = EnergyParts::default();
        let mut force = vec![0.0; n];
        let mut jac = with_jacobian.then(|| SparseMatrix::with_capacity(n, 36 * topo.edges.len() + 121 * topo.bends.len()));
        scatter(&self.stretch_maps, stretch, &mut energy, &mut force, jac.as_mut());
        scatter(&self.maps.bends, bends, &mut energy, &mut force, jac.as_mut());
        Ok(Assembly {
            energy,
            force,
            jacobian: jac,
        })
    }

    /// `−∂E/∂q` at the current configuration.
    pub fn forward_forces(&self, current: &DofVector, natural: &NaturalStrains) -> Result<Vec<f64>> {
        Ok(self.forward_assemble(current, natural, false)?.force)
    }

    /// `∂²E/∂q²` at the current configuration.
    pub fn forward_hessian(&self, current: &DofVector, natural: &NaturalStrains) -> Result<SparseMatrix> {
        Ok(self
            .forward_assemble(current, natural, true)?
            .jacobian
            .expect("requested"))
    }
}

/// Bend and twist energy of one element as a function of its local variables.
fn bend_energy<T: Real>(
    x: &[T; BEND_VARS],
    seed: &BendSeed,
    natural: &NaturalStrains,
    i: usize,
    m: &MaterialParams,
) -> Result<(T, T)> {
    let (e1, e2, ta, tb) = unpack(x);
    let s = bend_strains(e1, e2, ta, tb, seed).map_err(|e| e.at_bend(i))?;
    let half_inv = 0.5 / natural.voronoi[i];
    let d1 = s.kappa1 - natural.kappa1[i];
    let d2 = s.kappa2 - natural.kappa2[i];
    let dt = s.tau - natural.tau[i];
    let eb = (d1 * d1 * m.ei1 + d2 * d2 * m.ei2) * half_inv;
    let et = dt * dt * (m.gj * half_inv);
    Ok((eb, et))
}

fn negate<const N: usize>(mut g: [f64; N]) -> [f64; N] {
    for v in g.iter_mut() {
        *v = -*v;
    }
    g
}
