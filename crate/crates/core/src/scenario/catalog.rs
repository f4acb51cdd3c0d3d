use super::curves::{CurveKind, ParametricCurveSpec};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Where a scenario's target geometry comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    Curve(ParametricCurveSpec),
    /// A shipped net fixture, by name.
    Net(String),
    /// A net file on disk.
    File(String),
}

/// Boundary conditions of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Support {
    /// Both end edges clamped. In the rest shape the ends sit further
    /// apart by `end_shift` times the target end-to-end distance, so the
    /// target is a compressed state.
    ClampedClamped { end_shift: f64 },
    /// First edge clamped, other end free.
    ClampedFree,
    /// Clamp sets read from the net fixture.
    Fixture,
}

/// One row of the parameter table plus the geometry and support it implies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    /// Short lookup key.
    pub name: String,
    /// Row label as tabulated.
    pub label: String,
    /// Characteristic length, m.
    pub char_length: f64,
    pub radius: f64,
    pub modulus: f64,
    pub density: f64,
    /// m/s².
    pub gravity: Option<[f64; 3]>,
    /// A/m, components in each edge's material frame `(m1, m2, t)`.
    pub magnetization: Option<[f64; 3]>,
    /// mT.
    pub field_mt: Option<[f64; 3]>,
    pub geometry: Geometry,
    pub support: Support,
    /// Suggested time step and step budget.
    pub dt: f64,
    pub max_steps: usize,
}

const CURVE_NODES: usize = 500;

fn curve(
    name: &str,
    label: &str,
    kind: CurveKind,
    char_length: f64,
    radius: f64,
    modulus: f64,
    support: Support,
) -> ScenarioSpec {
    ScenarioSpec {
        name: name.into(),
        label: label.into(),
        char_length,
        radius,
        modulus,
        density: 1e3,
        gravity: None,
        magnetization: None,
        field_mt: None,
        geometry: Geometry::Curve(ParametricCurveSpec::new(kind, CURVE_NODES)),
        support,
        dt: 1e3,
        max_steps: 80,
    }
}

fn net(name: &str, label: &str, char_length: f64, radius: f64, modulus: f64, density: f64) -> ScenarioSpec {
    ScenarioSpec {
        name: name.into(),
        label: label.into(),
        char_length,
        radius,
        modulus,
        density,
        gravity: Some([0.0, 0.0, -10.0]),
        magnetization: None,
        field_mt: None,
        geometry: Geometry::Net(name.into()),
        support: Support::Fixture,
        dt: 1e3,
        max_steps: 40,
    }
}

/// The tabulated cases, in table order.
pub fn scenario_catalog() -> Vec<ScenarioSpec> {
    let squeeze = Support::ClampedClamped { end_shift: 0.1 };
    let mut helix = curve("helix", "Helix (gravity)", CurveKind::Helix, 25.4, 1e-1, 1e8, Support::ClampedFree);
    helix.gravity = Some([0.0, 0.0, -10.0]);
    let mut hyperbole = curve(
        "hyperbole_magnetic",
        "Hyperbole (magnetic)",
        CurveKind::HyperbolicSurface,
        97.4,
        1e-1,
        1e8,
        Support::ClampedFree,
    );
    hyperbole.magnetization = Some([0.0, 0.0, -1e5]);
    hyperbole.field_mt = Some([-5.0, 0.0, 0.0]);
    let mut fullerene = net("fullerene", "Fulleren", 7.1, 1e-2, 6e6, 5e2);
    fullerene.magnetization = Some([0.0, 5e5, 0.0]);
    fullerene.field_mt = Some([0.0, 0.0, -1.0]);
    vec![
        curve("spherical", "Spherical curve", CurveKind::Spherical, 36.3, 1e-2, 1e7, squeeze),
        curve("conical", "Conical curve", CurveKind::Conical, 7.0, 1e-2, 1e7, squeeze),
        curve("hyperbolic", "Hyperbolic curve", CurveKind::Hyperbolic, 15.8, 1e-2, 1e7, squeeze),
        helix,
        hyperbole,
        net("ring", "Ring", 2.1, 1.5e-3, 5e6, 2e2),
        net("knot", "Knot", 6.4, 1.5e-3, 5e7, 4e2),
        fullerene,
    ]
}

/// Look up a catalog entry by key or label (case-insensitive).
pub fn find_scenario(name: &str) -> Result<ScenarioSpec> {
    scenario_catalog()
        .into_iter()
        .find(|s| s.name.eq_ignore_ascii_case(name) || s.label.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownKind(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tabulated_rows() {
        let cat = scenario_catalog();
        assert_eq!(cat.len(), 8);
        let s = find_scenario("Spherical curve").unwrap();
        assert_eq!((s.char_length, s.radius, s.modulus, s.density), (36.3, 1e-2, 1e7, 1e3));
        let f = find_scenario("fullerene").unwrap();
        assert_eq!(f.label, "Fulleren");
        assert_eq!(f.gravity, Some([0.0, 0.0, -10.0]));
        assert_eq!(f.magnetization, Some([0.0, 5e5, 0.0]));
        assert_eq!(f.field_mt, Some([0.0, 0.0, -1.0]));
        assert!(find_scenario("torus").is_err());
    }
}
