use crate::error::{Error, Result};
use crate::geometry::Vec3;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::str::FromStr;

/// Closed-form target curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    /// Spiral on the unit sphere, 9 turns pole to pole.
    Spherical,
    /// Spiral on a cone.
    Conical,
    /// Spiral on a hyperboloid of one sheet.
    Hyperbolic,
    /// Helix of unit radius about the x axis.
    Helix,
    /// Spiral on a flared surface, descending along z.
    HyperbolicSurface,
}

impl CurveKind {
    pub const ALL: [CurveKind; 5] = [
        CurveKind::Spherical,
        CurveKind::Conical,
        CurveKind::Hyperbolic,
        CurveKind::Helix,
        CurveKind::HyperbolicSurface,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CurveKind::Spherical => "spherical",
            CurveKind::Conical => "conical",
            CurveKind::Hyperbolic => "hyperbolic",
            CurveKind::Helix => "helix",
            CurveKind::HyperbolicSurface => "hyperbolic_surface",
        }
    }

    /// Native parameter interval.
    pub fn default_range(self) -> (f64, f64) {
        match self {
            CurveKind::Hyperbolic => (0.1, 1.9),
            _ => (0.0, 1.0),
        }
    }

    /// Point at parameter `s`, unit scale.
    pub fn eval(self, s: f64) -> Vec3 {
        match self {
            CurveKind::Spherical => {
                let (a, b) = (18.0 * PI * s, PI * s);
                Vec3::new(a.cos() * b.sin(), a.sin() * b.sin(), b.cos())
            }
            CurveKind::Conical => {
                let (r, a) = (1.0 - s / 3.0, 8.0 * PI * s / 3.0);
                Vec3::new(r * a.cos(), r * a.sin(), 2.0 * s / 3.0)
            }
            CurveKind::Hyperbolic => {
                let (r, a) = ((s - 1.0) * (s - 1.0) + 0.5, 6.0 * PI * s);
                Vec3::new(r * a.cos(), r * a.sin(), s / 2.0)
            }
            CurveKind::Helix => {
                let a = 8.0 * PI * s;
                Vec3::new(4.0 * s, a.sin(), a.cos())
            }
            CurveKind::HyperbolicSurface => {
                let (r, a) = (4.0 * s * s + 0.6, 16.0 * PI * s);
                Vec3::new(r * a.cos(), r * a.sin(), -4.0 * s)
            }
        }
    }
}

impl FromStr for CurveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CurveKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

/// Uniformly sampled parametric curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParametricCurveSpec {
    pub kind: CurveKind,
    pub sample_count: usize,
    pub range: (f64, f64),
    /// Length scale, m.
    pub scale: f64,
}

impl ParametricCurveSpec {
    pub fn new(kind: CurveKind, sample_count: usize) -> Self {
        Self {
            kind,
            sample_count,
            range: kind.default_range(),
            scale: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sample_count < 2 {
            return Err(Error::TooFewNodes(self.sample_count));
        }
        let (s0, s1) = self.range;
        if !(s1 > s0) || !s0.is_finite() || !s1.is_finite() {
            return Err(Error::OutOfRange(s1 - s0));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::OutOfRange(self.scale));
        }
        Ok(())
    }
}

/// Sample the curve uniformly in its parameter.
pub fn generate_curve(spec: &ParametricCurveSpec) -> Result<Vec<Vec3>> {
    spec.validate()?;
    let (s0, s1) = spec.range;
    let n = spec.sample_count;
    Ok((0..n)
        .map(|i| spec.kind.eval(s0 + (s1 - s0) * i as f64 / (n - 1) as f64) * spec.scale)
        .collect())
}

/// Polyline length.
pub fn polyline_length(points: &[Vec3]) -> f64 {
    points.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn named_points() {
        let close = |a: Vec3, b: Vec3| (a - b).norm() < 1e-12;
        assert!(close(CurveKind::Spherical.eval(0.0), Vec3::new(0.0, 0.0, 1.0)));
        assert!(close(CurveKind::Spherical.eval(0.5), Vec3::new(-1.0, 0.0, 0.0)));
        assert!(close(CurveKind::Helix.eval(0.0), Vec3::new(0.0, 0.0, 1.0)));
        assert_eq!("conical".parse::<CurveKind>().unwrap(), CurveKind::Conical);
        assert!(matches!("trefoil".parse::<CurveKind>(), Err(Error::UnknownKind(_))));
    }

    #[test]
    fn sampling_and_validation() {
        let spec = ParametricCurveSpec::new(CurveKind::Hyperbolic, 11);
        let pts = generate_curve(&spec).unwrap();
        assert_eq!(pts.len(), 11);
        assert!((pts[10] - CurveKind::Hyperbolic.eval(1.9)).norm() < 1e-12);
        let bad = ParametricCurveSpec {
            sample_count: 1,
            ..spec.clone()
        };
        assert_eq!(generate_curve(&bad), Err(Error::TooFewNodes(1)));
        let bad = ParametricCurveSpec {
            range: (1.0, 1.0),
            ..spec
        };
        assert!(generate_curve(&bad).is_err());
    }

    #[test]
    fn unit_scale_lengths() {
        let len = |k| polyline_length(&generate_curve(&ParametricCurveSpec::new(k, 4000)).unwrap());
        assert!((len(CurveKind::Spherical) - 36.3).abs() < 0.1);
        assert!((len(CurveKind::Conical) - 7.0).abs() < 0.1);
        assert!((len(CurveKind::Helix) - 25.4).abs() < 0.1);
        assert!((len(CurveKind::HyperbolicSurface) - 97.4).abs() < 0.2);
    }

    proptest! {
        #[test]
        fn default_sampling_has_no_degenerate_edges(k in 0usize..5, n in 2usize..600) {
            let pts = generate_curve(&ParametricCurveSpec::new(CurveKind::ALL[k], n)).unwrap();
            prop_assert!(pts.windows(2).all(|w| (w[1] - w[0]).norm() > 1e-9));
        }
    }
}
