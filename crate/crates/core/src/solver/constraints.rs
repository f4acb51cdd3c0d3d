use crate::dofs::DofVector;
use crate::error::{Error, Result};
use crate::topology::NetTopology;

/// Piecewise-linear prescribed value over the step index; held constant
/// outside the knot range.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    knots: Vec<(f64, f64)>,
}

impl Schedule {
    pub fn constant(v: f64) -> Self {
        Self {
            knots: vec![(0.0, v)],
        }
    }

    /// Linear ramp from `from` at step 0 to `to` at `steps`.
    pub fn ramp(from: f64, to: f64, steps: usize) -> Self {
        Self {
            knots: vec![(0.0, from), (steps.max(1) as f64, to)],
        }
    }

    /// Knots `(step, value)` with strictly increasing steps.
    pub fn from_knots(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        if knots.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::OutOfRange(knots[0].0));
        }
        Ok(Self { knots })
    }

    pub fn value_at(&self, step: usize) -> f64 {
        let s = step as f64;
        let k = &self.knots;
        if s <= k[0].0 {
            return k[0].1;
        }
        for w in k.windows(2) {
            let ((s0, v0), (s1, v1)) = (w[0], w[1]);
            if s <= s1 {
                if s == s1 {
                    return v1;
                }
                return v0 + (v1 - v0) * (s - s0) / (s1 - s0);
            }
        }
        k[k.len() - 1].1
    }

    pub fn is_constant(&self) -> bool {
        self.knots.iter().all(|&(_, v)| v == self.knots[0].1)
    }

    /// Same knot steps, values in reverse order.
    pub fn reversed(&self) -> Self {
        let vals: Vec<f64> = self.knots.iter().rev().map(|k| k.1).collect();
        Self {
            knots: self.knots.iter().zip(vals).map(|(k, v)| (k.0, v)).collect(),
        }
    }

    /// Same knot steps, values reflected through `about`.
    pub fn mirrored(&self, about: f64) -> Self {
        Self {
            knots: self.knots.iter().map(|&(k, v)| (k, 2.0 * about - v)).collect(),
        }
    }

    /// Step of the last knot.
    pub fn last_step(&self) -> usize {
        self.knots[self.knots.len() - 1].0.ceil().max(0.0) as usize
    }

    pub fn final_value(&self) -> f64 {
        self.knots[self.knots.len() - 1].1
    }
}

/// Prescribed DOFs and their schedules.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConstraintSet {
    pub entries: Vec<(usize, Schedule)>,
}

impl ConstraintSet {
    /// Hold the clamped DOFs of `topology` at their values in `q`.
    pub fn clamps(topology: &NetTopology, q: &DofVector) -> Self {
        Self {
            entries: topology
                .clamped_dofs()
                .into_iter()
                .map(|d| (d, Schedule::constant(q.as_slice()[d])))
                .collect(),
        }
    }

    /// Move the clamped DOFs of `topology` linearly from `from` to `to`.
    pub fn clamp_ramp(topology: &NetTopology, from: &DofVector, to: &DofVector, steps: usize) -> Self {
        Self {
            entries: topology
                .clamped_dofs()
                .into_iter()
                .map(|d| {
                    let (a, b) = (from.as_slice()[d], to.as_slice()[d]);
                    let s = if a == b {
                        Schedule::constant(a)
                    } else {
                        Schedule::ramp(a, b, steps)
                    };
                    (d, s)
                })
                .collect(),
        }
    }

    pub fn reversed(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|(d, s)| (*d, s.reversed())).collect(),
        }
    }

    pub fn is_static(&self) -> bool {
        self.entries.iter().all(|(_, s)| s.is_constant())
    }

    /// Step after which every schedule holds its final value.
    pub fn last_step(&self) -> usize {
        self.entries
            .iter()
            .filter(|(_, s)| !s.is_constant())
            .map(|(_, s)| s.last_step())
            .max()
            .unwrap_or(0)
    }

    pub fn dofs(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.0).collect()
    }

    /// Write the prescribed values for `step` into `q`.
    pub fn apply(&self, q: &mut DofVector, step: usize) {
        let s = q.as_mut_slice();
        for (d, sched) in &self.entries {
            s[*d] = sched.value_at(step);
        }
    }

    /// Check indices and that clamp sets are fully covered.
    pub fn validate(&self, topology: &NetTopology) -> Result<()> {
        let n = topology.dof_count();
        let mut seen = vec![false; n];
        for (d, _) in &self.entries {
            if *d >= n {
                return Err(Error::OutOfRange(*d as f64));
            }
            if seen[*d] {
                return Err(Error::OutOfRange(*d as f64));
            }
            seen[*d] = true;
        }
        for d in topology.clamped_dofs() {
            if !seen[d] {
                return Err(Error::OutOfRange(d as f64));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_interpolates_and_holds() {
        let s = Schedule::ramp(1.0, 3.0, 4);
        assert_eq!(s.value_at(0), 1.0);
        assert_eq!(s.value_at(2), 2.0);
        assert_eq!(s.value_at(4), 3.0);
        assert_eq!(s.value_at(9), 3.0);
        let r = s.reversed();
        assert_eq!(r.value_at(0), 3.0);
        assert_eq!(r.value_at(4), 1.0);
        assert!(Schedule::constant(2.0).is_constant());
        assert!(Schedule::from_knots(vec![(1.0, 0.0), (1.0, 2.0)]).is_err());
    }
}
