use crate::error::{Error, Result};
use faer::prelude::*;
use faer::sparse::linalg::solvers::{Lu, SymbolicLu};
use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;

/// General (non-symmetric) sparse LU with a cached symbolic analysis.
/// Used unchanged by both modes.
#[derive(Default)]
pub struct SparseLu {
    cached: Option<(Vec<usize>, Vec<usize>, SymbolicLu<usize>)>,
}

impl SparseLu {
    pub fn new() -> Self {
        Self::default()
    }

    /// Solve `A x = b` for `A` given as triplets (duplicates summed).
    pub fn solve(&mut self, n: usize, triplets: &[Triplet<usize, usize, f64>], b: &[f64]) -> Result<Vec<f64>> {
        let a = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, triplets)
            .map_err(|_| Error::LinearSolveSingular)?;
        let col_ptr = a.symbolic().col_ptr();
        let row_idx = a.symbolic().row_idx();
        let reuse = matches!(&self.cached, Some((cp, ri, _)) if cp.as_slice() == col_ptr && ri.as_slice() == row_idx);
        if !reuse {
            let sym = SymbolicLu::try_new(a.symbolic()).map_err(|_| Error::LinearSolveSingular)?;
            self.cached = Some((col_ptr.to_vec(), row_idx.to_vec(), sym));
        }
        let sym = self.cached.as_ref().expect("cached").2.clone();
        let lu = Lu::try_new_with_symbolic(sym, a.as_ref()).map_err(|_| Error::LinearSolveSingular)?;
        let mut x = Mat::<f64>::from_fn(n, 1, |i, _| b[i]);
        lu.solve_in_place(x.as_mut());
        let out: Vec<f64> = (0..n).map(|i| x[(i, 0)]).collect();
        if out.iter().all(|v| v.is_finite()) {
            Ok(out)
        } else {
            Err(Error::LinearSolveSingular)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_nonsymmetric_and_flags_singular() {
        let t = vec![
            Triplet::new(0, 0, 2.0),
            Triplet::new(0, 1, 1.0),
            Triplet::new(1, 1, 3.0),
        ];
        let mut lu = SparseLu::new();
        let x = lu.solve(2, &t, &[4.0, 3.0]).unwrap();
        assert!((x[0] - 1.5).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);
        let x = lu.solve(2, &t, &[2.0, 0.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14);
        let s = vec![Triplet::new(0, 0, 1.0), Triplet::new(1, 1, 0.0)];
        assert_eq!(lu.solve(2, &s, &[1.0, 1.0]), Err(Error::LinearSolveSingular));
    }
}
