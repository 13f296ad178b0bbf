//! Scenario documents: what to scan, on which grid, and which artifacts to write.
//!
//! A scenario is a TOML document. Parsing is two-staged: the text is first
//! read into a permissive mirror of the file layout (unknown keys are still
//! rejected), then every invariant is checked at once so that a broken file
//! reports all of its problems together.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use slitpath_core::slit_model::{SlitGeometry, SlitMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    OneSlit,
    TwoSlit,
}

impl Mode {
    fn slit_mode(self) -> SlitMode {
        match self {
            Mode::OneSlit => SlitMode::Single,
            Mode::TwoSlit => SlitMode::Double,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    Exact,
    Asymptotic,
    Decomposition,
    RegimeReport,
    OracleCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `P·λ(L+D)`, the ordinate of the published figures.
    #[default]
    FigureUnits,
    /// Density in 1/length² of the geometry's own units.
    RawDensity,
    /// Screen density given passage through the slit, per unit of `x/a`.
    Conditional,
}

/// Slit geometry in physical lengths (any consistent unit).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalGeometry {
    pub half_width: f64,
    #[serde(default)]
    pub center: f64,
    pub slit_to_screen: f64,
    pub source_to_slit: f64,
    pub wavelength: f64,
}

/// `N_F(a)`, `η` and `β = b/a`; `beta` is omitted for a single slit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dimensionless {
    pub nf_a: f64,
    pub eta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeometrySpec {
    Physical(PhysicalGeometry),
    Dimensionless(Dimensionless),
}

/// Screen positions in units of the slit half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub x_min_over_a: f64,
    pub x_max_over_a: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: Option<String>,
    pub mode: Mode,
    pub geometry: GeometrySpec,
    pub grid: Grid,
    pub outputs: BTreeSet<Output>,
    pub normalization: Normalization,
    /// Source width σ/a for conditional normalization; absent means the σ → 0 limit.
    pub sigma_over_a: Option<f64>,
}

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("cannot parse scenario: {0}")]
    Parse(String),
    #[error("invalid scenario:\n  - {}", .0.join("\n  - "))]
    Validation(Vec<String>),
}

/// On-disk layout; every field optional so that validation can name what is missing.
#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    normalization: Option<Normalization>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sigma_over_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    outputs: Option<Vec<Output>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    geometry: Option<PhysicalGeometry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dimensionless: Option<Dimensionless>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    grid: Option<Grid>,
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let doc: Document = toml::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
    validate(doc)
}

fn validate(doc: Document) -> Result<Scenario, ScenarioError> {
    let mut problems = Vec::new();

    if doc.mode.is_none() {
        problems.push("missing `mode` (one_slit or two_slit)".to_string());
    }
    let geometry = match (doc.geometry, doc.dimensionless) {
        (Some(g), None) => Some(GeometrySpec::Physical(g)),
        (None, Some(d)) => Some(GeometrySpec::Dimensionless(d)),
        (Some(_), Some(_)) => {
            problems.push("give either [geometry] or [dimensionless], not both".to_string());
            None
        }
        (None, None) => {
            problems.push("missing slit parameters: add [geometry] or [dimensionless]".to_string());
            None
        }
    };
    if let (Some(mode), Some(geometry)) = (doc.mode, geometry) {
        check_geometry(mode, &geometry, &mut problems);
    }

    match &doc.grid {
        None => problems.push("missing [grid]".to_string()),
        Some(g) => {
            if !(g.x_min_over_a.is_finite() && g.x_max_over_a.is_finite()) {
                problems.push("grid bounds must be finite".to_string());
            } else if g.x_min_over_a >= g.x_max_over_a {
                problems.push(format!(
                    "grid needs x_min_over_a < x_max_over_a, got [{}, {}]",
                    g.x_min_over_a, g.x_max_over_a
                ));
            }
            if g.n_points < 2 {
                problems.push(format!("grid needs at least 2 points, got {}", g.n_points));
            }
        }
    }

    let outputs: BTreeSet<Output> = doc.outputs.unwrap_or_else(|| vec![Output::Exact]).into_iter().collect();
    if outputs.is_empty() {
        problems.push("`outputs` is empty".to_string());
    }
    if outputs.contains(&Output::Decomposition) && doc.mode == Some(Mode::OneSlit) {
        problems.push("decomposition needs mode = two_slit".to_string());
    }

    let normalization = doc.normalization.unwrap_or_default();
    if normalization == Normalization::Conditional {
        if doc.mode == Some(Mode::TwoSlit) {
            problems.push("conditional normalization is defined for one_slit only".to_string());
        }
        if outputs.contains(&Output::Asymptotic) {
            problems.push("asymptotic curves are not available under conditional normalization".to_string());
        }
        if let Some(s) = doc.sigma_over_a {
            if !(s.is_finite() && s > 0.0) {
                problems.push(format!("sigma_over_a must be positive, got {s}"));
            }
        }
    } else if doc.sigma_over_a.is_some() {
        problems.push("sigma_over_a only applies with normalization = \"conditional\"".to_string());
    }

    if !problems.is_empty() {
        return Err(ScenarioError::Validation(problems));
    }
    Ok(Scenario {
        name: doc.name,
        mode: doc.mode.expect("checked above"),
        geometry: geometry.expect("checked above"),
        grid: doc.grid.expect("checked above"),
        outputs,
        normalization,
        sigma_over_a: doc.sigma_over_a,
    })
}

fn check_geometry(mode: Mode, geometry: &GeometrySpec, problems: &mut Vec<String>) {
    match (mode, geometry) {
        (Mode::OneSlit, GeometrySpec::Dimensionless(d)) if d.beta.is_some_and(|b| b != 0.0) => {
            problems.push("one_slit takes no beta".to_string());
            return;
        }
        (Mode::TwoSlit, GeometrySpec::Dimensionless(d)) if d.beta.is_none() => {
            problems.push("two_slit needs dimensionless.beta".to_string());
            return;
        }
        _ => {}
    }
    match build_geometry(geometry) {
        Err(e) => problems.push(e.to_string()),
        Ok(g) if g.mode() != mode.slit_mode() => problems.push(match mode {
            Mode::OneSlit => format!("one_slit needs the slit centred at 0, got center {}", g.center),
            Mode::TwoSlit => "two_slit needs a slit center beyond the half-width".to_string(),
        }),
        Ok(_) => {}
    }
}

fn build_geometry(spec: &GeometrySpec) -> slitpath_core::Result<SlitGeometry> {
    match *spec {
        GeometrySpec::Physical(p) => {
            let g = SlitGeometry {
                half_width: p.half_width,
                center: p.center,
                slit_to_screen: p.slit_to_screen,
                source_to_slit: p.source_to_slit,
                wavelength: p.wavelength,
            };
            g.validate()?;
            Ok(g)
        }
        GeometrySpec::Dimensionless(d) => SlitGeometry::from_dimensionless(d.nf_a, d.eta, d.beta.unwrap_or(0.0)),
    }
}

impl Scenario {
    pub fn slit_geometry(&self) -> SlitGeometry {
        build_geometry(&self.geometry).expect("geometry was validated on construction")
    }

    pub fn wants(&self, output: Output) -> bool {
        self.outputs.contains(&output)
    }

    /// TOML text that parses back to this scenario.
    pub fn emit(&self) -> String {
        let (geometry, dimensionless) = match self.geometry {
            GeometrySpec::Physical(g) => (Some(g), None),
            GeometrySpec::Dimensionless(d) => (None, Some(d)),
        };
        let doc = Document {
            name: self.name.clone(),
            mode: Some(self.mode),
            normalization: Some(self.normalization),
            sigma_over_a: self.sigma_over_a,
            outputs: Some(self.outputs.iter().copied().collect()),
            geometry,
            dimensionless,
            grid: Some(self.grid),
        };
        toml::to_string(&doc).expect("scenario fields are all representable in TOML")
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::OneSlit => "one_slit",
            Mode::TwoSlit => "two_slit",
        })
    }
}
