use crate::geometry::Vec3;

/// Generalised coordinates of one configuration: `3·Nv` positions then
/// `Ne` twist angles.
#[derive(Debug, Clone, PartialEq)]
pub struct DofVector {
    nv: usize,
    data: Vec<f64>,
}

impl DofVector {
    pub fn zeros(nv: usize, ne: usize) -> Self {
        Self {
            nv,
            data: vec![0.0; 3 * nv + ne],
        }
    }

    /// Positions with all twist angles zero.
    pub fn from_positions(positions: &[Vec3], ne: usize) -> Self {
        let mut d = Self::zeros(positions.len(), ne);
        for (i, p) in positions.iter().enumerate() {
            d.set_position(i, *p);
        }
        d
    }

    /// Wrap a raw vector laid out as positions then angles.
    pub fn from_raw(nv: usize, data: Vec<f64>) -> Self {
        assert!(data.len() >= 3 * nv, "raw DOF vector shorter than position block");
        Self { nv, data }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.nv
    }

    pub fn edge_count(&self) -> usize {
        self.data.len() - 3 * self.nv
    }

    #[inline]
    pub fn position(&self, i: usize) -> Vec3 {
        Vec3::new(self.data[3 * i], self.data[3 * i + 1], self.data[3 * i + 2])
    }

    #[inline]
    pub fn set_position(&mut self, i: usize, p: Vec3) {
        self.data[3 * i..3 * i + 3].copy_from_slice(p.as_slice());
    }

    #[inline]
    pub fn theta(&self, k: usize) -> f64 {
        self.data[3 * self.nv + k]
    }

    #[inline]
    pub fn set_theta(&mut self, k: usize, v: f64) {
        self.data[3 * self.nv + k] = v;
    }

    pub fn positions(&self) -> Vec<Vec3> {
        (0..self.nv).map(|i| self.position(i)).collect()
    }

    pub fn thetas(&self) -> &[f64] {
        &self.data[3 * self.nv..]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Largest absolute componentwise difference.
    pub fn max_abs_diff(&self, other: &DofVector) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_is_positions_then_angles() {
        let mut d = DofVector::from_positions(&[Vec3::new(1.0, 2.0, 3.0), Vec3::new(4.0, 5.0, 6.0)], 1);
        d.set_theta(0, 0.5);
        assert_eq!(d.as_slice(), &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 0.5]);
        assert_eq!(d.len(), 3 * d.node_count() + d.edge_count());
        assert_eq!(d.position(1), Vec3::new(4.0, 5.0, 6.0));
        assert_eq!(d.thetas(), &[0.5]);
    }
}
