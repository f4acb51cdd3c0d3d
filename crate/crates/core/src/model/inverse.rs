use super::{length, par_map, scatter, Assembly, ElasticModel, EnergyParts, Local, SparseMatrix};
use crate::autodiff::Dual;
use crate::dofs::DofVector;
use crate::error::Result;
use crate::geometry::kernel::{bend_strains, bend_vars, expand_gradient, unpack, BendStrains, BEND_VARS};
use crate::geometry::Vec3;

/// Strain values and strain gradients of the target (deformed)
/// configuration. They are constants of an inverse solve.
#[derive(Debug, Clone)]
pub struct DcStencils {
    pub dc: DofVector,
    pub edge_len: Vec<f64>,
    pub edge_dir: Vec<Vec3>,
    /// `[κ1, κ2, τ]` per bend.
    pub bend_vals: Vec<[f64; 3]>,
    /// Gradients of `[κ1, κ2, τ]` over the 11 bend DOFs.
    pub bend_grads: Vec<[[f64; 11]; 3]>,
}

fn dual_vars(x: &[f64; BEND_VARS]) -> [Dual<BEND_VARS>; BEND_VARS] {
    let mut d = [Dual::constant(0.0); BEND_VARS];
    for (k, v) in x.iter().enumerate() {
        d[k] = Dual::var(*v, k);
    }
    d
}

impl ElasticModel {
    fn bend_duals(&self, q: &DofVector, i: usize) -> Result<BendStrains<Dual<BEND_VARS>>> {
        let bend = &self.topology.bends[i];
        let (p, c, r) = self.topology.bend_nodes(i);
        let x = bend_vars(
            &q.position(p),
            &q.position(c),
            &q.position(r),
            q.theta(bend.edge_i),
            q.theta(bend.edge_j),
        );
        let (e1, e2, ta, tb) = unpack(&dual_vars(&x));
        bend_strains(e1, e2, ta, tb, &self.seed.bends[i]).map_err(|e| e.at_bend(i))
    }

    /// Precompute the frozen strain stencils of the target configuration.
    pub fn dc_stencils(&self, dc: &DofVector) -> Result<DcStencils> {
        let edge_len = self.edge_lengths(dc)?;
        let edge_dir = self
            .topology
            .edges
            .iter()
            .zip(&edge_len)
            .map(|(&(a, b), l)| (dc.position(b) - dc.position(a)) / *l)
            .collect();
        let duals = par_map(self.topology.bends.len(), |i| self.bend_duals(dc, i));
        let mut bend_vals = Vec::with_capacity(duals.len());
        let mut bend_grads = Vec::with_capacity(duals.len());
        for s in duals {
            let s = s?;
            bend_vals.push([s.kappa1.v, s.kappa2.v, s.tau.v]);
            bend_grads.push([
                expand_gradient(&s.kappa1.g),
                expand_gradient(&s.kappa2.g),
                expand_gradient(&s.tau.g),
            ]);
        }
        Ok(DcStencils {
            dc: dc.clone(),
            edge_len,
            edge_dir,
            bend_vals,
            bend_grads,
        })
    }

    /// Inverse elastic force on the target configuration for the candidate
    /// rest shape `uc`, and optionally its Jacobian `∂F/∂q̄`.
    pub fn inverse_assemble(&self, st: &DcStencils, uc: &DofVector, with_jacobian: bool) -> Result<Assembly> {
        let n = self.dof_count();
        let m = self.material;
        let topo = &self.topology;

        let stretch: Vec<Local<6>> = par_map(topo.edges.len(), |k| {
            let (a, b) = topo.edges[k];
            let eb = uc.position(b) - uc.position(a);
            let lb = length(&eb);
            let l = st.edge_len[k];
            let t = st.edge_dir[k];
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
                let tb = eb / lb;
                let kp = m.ea * l / (lb * lb);
                let mut h = Box::new([[0.0; 6]; 6]);
                for r in 0..3 {
                    for c in 0..3 {
                        let v = kp * t[r] * tb[c];
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
            let s = self.bend_duals(uc, i)?;
            let dl = (s.len_a + s.len_b) * 0.5;
            let vals = st.bend_vals[i];
            let grads = &st.bend_grads[i];
            let stiff = [m.ei1, m.ei2, m.gj];
            let nat = [s.kappa1, s.kappa2, s.tau];
            let mut force = [0.0; 11];
            let mut energy = [0.0; 3];
            let mut jac = with_jacobian.then(|| Box::new([[0.0; 11]; 11]));
            for k in 0..3 {
                let diff = Dual::constant(vals[k]) - nat[k];
                let pre = diff * stiff[k] / dl;
                let e = 0.5 * pre.v * diff.v;
                if k < 2 {
                    energy[1] += e;
                } else {
                    energy[2] += e;
                }
                for r in 0..11 {
                    force[r] -= pre.v * grads[k][r];
                }
                if let Some(j) = jac.as_mut() {
                    let gp = expand_gradient(&pre.g);
                    for r in 0..11 {
                        let gr = grads[k][r];
                        if gr == 0.0 {
                            continue;
                        }
                        for c in 0..11 {
                            j[r][c] -= gr * gp[c];
                        }
                    }
                }
            }
            Ok(Local {
                energy,
                force,
                jac,
            })
        });
        let bends = bends.into_iter().collect::<Result<Vec<_>>>()?;

        let mut energy = EnergyParts::default();
        let mut force = vec![0.0; n];
        let mut jac = with_jacobian
            .then(|| SparseMatrix::with_capacity(n, 36 * topo.edges.len() + 121 * topo.bends.len()));
        scatter(&self.stretch_maps, stretch, &mut energy, &mut force, jac.as_mut());
        scatter(&self.maps.bends, bends, &mut energy, &mut force, jac.as_mut());
        Ok(Assembly {
            energy,
            force,
            jacobian: jac,
        })
    }

    /// Frozen-stencil inverse force for candidate rest shape `uc`.
    pub fn inverse_forces(&self, st: &DcStencils, uc: &DofVector) -> Result<Vec<f64>> {
        Ok(self.inverse_assemble(st, uc, false)?.force)
    }

    /// Exact derivative of [`ElasticModel::inverse_forces`] in `uc`.
    pub fn inverse_jacobian(&self, st: &DcStencils, uc: &DofVector) -> Result<SparseMatrix> {
        Ok(self
            .inverse_assemble(st, uc, true)?
            .jacobian
            .expect("requested"))
    }

    /// Smallest cosine between a target edge and its candidate rest edge,
    /// with the edge index. A non-positive value means the element-local
    /// inverse stretch Jacobian has lost its restoring character.
    pub fn min_edge_alignment(&self, st: &DcStencils, uc: &DofVector) -> (usize, f64) {
        let mut worst = (0, f64::INFINITY);
        for (k, &(a, b)) in self.topology.edges.iter().enumerate() {
            let eb = uc.position(b) - uc.position(a);
            let c = st.edge_dir[k].dot(&eb) / length(&eb);
            if c < worst.1 || c.is_nan() {
                worst = (k, c);
            }
        }
        worst
    }
}
