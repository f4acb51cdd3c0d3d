/// Square sparse matrix in coordinate form. Duplicate entries are summed
/// on use.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseMatrix {
    pub n: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
}

impl SparseMatrix {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            ..Default::default()
        }
    }

    pub fn with_capacity(n: usize, nnz: usize) -> Self {
        Self {
            n,
            rows: Vec::with_capacity(nnz),
            cols: Vec::with_capacity(nnz),
            vals: Vec::with_capacity(nnz),
        }
    }

    #[inline]
    pub fn push(&mut self, r: usize, c: usize, v: f64) {
        self.rows.push(r);
        self.cols.push(c);
        self.vals.push(v);
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// `y = A x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for k in 0..self.vals.len() {
            y[self.rows[k]] += self.vals[k] * x[self.cols[k]];
        }
        y
    }

    /// Dense row-major copy (tests and small diagnostics).
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.n]; self.n];
        for k in 0..self.vals.len() {
            d[self.rows[k]][self.cols[k]] += self.vals[k];
        }
        d
    }

    pub fn transpose(&self) -> Self {
        Self {
            n: self.n,
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            vals: self.vals.clone(),
        }
    }

    /// Set of structurally non-zero `(row, col)` positions.
    pub fn pattern(&self) -> std::collections::BTreeSet<(usize, usize)> {
        self.rows.iter().copied().zip(self.cols.iter().copied()).collect()
    }
}

/// Frobenius norm of a dense matrix.
pub fn frobenius(a: &[Vec<f64>]) -> f64 {
    a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

/// Frobenius norm of `a − b`.
pub fn frobenius_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_sum() {
        let mut a = SparseMatrix::new(2);
        a.push(0, 1, 1.0);
        a.push(0, 1, 2.0);
        a.push(1, 0, -1.0);
        assert_eq!(a.to_dense(), vec![vec![0.0, 3.0], vec![-1.0, 0.0]]);
        assert_eq!(a.mul_vec(&[1.0, 1.0]), vec![3.0, -1.0]);
        assert_eq!(a.transpose().to_dense()[1][0], 3.0);
    }
}
