//! Scenario configuration: TOML with defaults, presets and field-path
//! diagnostics.

use std::fmt;
use std::path::Path;

use recoil_core::entanglement::{Case, EntanglementScenario, Readings};
use recoil_core::field::{coherent_distribution, fock_distribution, FieldDistribution};
use recoil_core::grid::linspace;
use recoil_core::spatial::{SpatialScenario, MIN_POINTS_PER_SPREAD};
use serde::{Deserialize, Serialize};

/// A configuration problem, located by its dotted field path.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    fn at(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

/// Maps a core validation error onto the section it came from.
fn core_error(section: &str, err: recoil_core::Error) -> ConfigError {
    match err {
        recoil_core::Error::InvalidParameter { name, reason } => {
            ConfigError::at(format!("{section}.{name}"), reason)
        }
        other => ConfigError::at(section, other.to_string()),
    }
}

pub const PRESETS: [(&str, &str); 6] = [
    ("fig2", include_str!("../presets/fig2.toml")),
    ("fig3", include_str!("../presets/fig3.toml")),
    ("fig4", include_str!("../presets/fig4.toml")),
    ("fig5", include_str!("../presets/fig5.toml")),
    ("fig6", include_str!("../presets/fig6.toml")),
    ("node", include_str!("../presets/node.toml")),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Fock,
    Coherent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FieldConfig {
    pub kind: FieldKind,
    pub alpha: f64,
    pub n0: usize,
    pub tail_tol: f64,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig {
            kind: FieldKind::Coherent,
            alpha: 10.0,
            n0: 0,
            tail_tol: recoil_core::field::DEFAULT_TAIL_TOL,
        }
    }
}

/// Packet geometry for the factor, density and Wigner commands. `d`
/// defaults to `a/10`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpatialConfig {
    pub a: f64,
    pub d: Option<f64>,
    pub lambda: f64,
    pub recoil_sigma: f64,
}

impl Default for SpatialConfig {
    fn default() -> Self {
        SpatialConfig {
            a: 0.25,
            d: None,
            lambda: 1.0,
            recoil_sigma: 0.5,
        }
    }
}

/// Internal-state scenario for the concurrence command. `d` defaults to
/// `a/100`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EntanglementConfig {
    pub case: u8,
    pub gamma: f64,
    pub a: f64,
    pub d: Option<f64>,
    pub lambda: f64,
    pub recoil_sigma: f64,
    pub omega: f64,
    pub literal_d00: bool,
    pub printed_w: bool,
}

impl Default for EntanglementConfig {
    fn default() -> Self {
        EntanglementConfig {
            case: 1,
            gamma: std::f64::consts::FRAC_PI_4,
            a: 0.25,
            d: None,
            lambda: 1.0,
            recoil_sigma: 0.5,
            omega: 0.0,
            literal_d00: false,
            printed_w: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeConfig {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl RangeConfig {
    pub fn nodes(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.points)
    }

    fn validate(&self, path: &str) -> Result<(), ConfigError> {
        if self.points == 0 {
            return Err(ConfigError::at(format!("{path}.points"), "grid is empty"));
        }
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(ConfigError::at(path, "bounds must be finite"));
        }
        if self.points > 1 && self.max <= self.min {
            return Err(ConfigError::at(format!("{path}.max"), "must exceed min"));
        }
        Ok(())
    }
}

/// Sampling grids. Density grids span `±density_extent·a`; momentum grids
/// span `±momentum_extent/d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub x: RangeConfig,
    pub t: RangeConfig,
    pub density_points: usize,
    pub density_extent: f64,
    pub momentum_points: usize,
    pub momentum_extent: f64,
    pub snapshot_t: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            x: RangeConfig {
                min: 0.0,
                max: 2.0,
                points: 201,
            },
            t: RangeConfig {
                min: 0.0,
                max: 5.0,
                points: 101,
            },
            density_points: recoil_core::spatial::DEFAULT_GRID_POINTS,
            density_extent: 2.0,
            momentum_points: recoil_core::wigner::DEFAULT_MOMENTUM_POINTS,
            momentum_extent: recoil_core::wigner::DEFAULT_MOMENTUM_EXTENT,
            snapshot_t: 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Binary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub format: Format,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { format: Format::Csv }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub field: FieldConfig,
    pub spatial: SpatialConfig,
    pub entanglement: EntanglementConfig,
    pub grids: GridConfig,
    pub output: OutputConfig,
}

impl ScenarioConfig {
    /// Parses, fills derived defaults and validates.
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let mut config: ScenarioConfig =
            toml::from_str(text).map_err(|e| ConfigError::at("", e.message().to_string()))?;
        config.resolve();
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::at("", format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn preset(name: &str) -> Result<Self, ConfigError> {
        let (_, text) = PRESETS.iter().find(|(n, _)| *n == name).ok_or_else(|| {
            let known: Vec<_> = PRESETS.iter().map(|(n, _)| *n).collect();
            ConfigError::at(
                "",
                format!("unknown preset `{name}` (known: {})", known.join(", ")),
            )
        })?;
        Self::from_toml(text)
    }

    fn resolve(&mut self) {
        self.spatial.d.get_or_insert(self.spatial.a / 10.0);
        self.entanglement.d.get_or_insert(self.entanglement.a / 100.0);
    }

    /// The fully resolved configuration as TOML, defaults included.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.field()?;
        self.spatial()?;
        self.entanglement()?;
        let g = &self.grids;
        g.x.validate("grids.x")?;
        g.t.validate("grids.t")?;
        if g.t.min < 0.0 {
            return Err(ConfigError::at("grids.t.min", "times must be non-negative"));
        }
        if !(g.snapshot_t >= 0.0 && g.snapshot_t.is_finite()) {
            return Err(ConfigError::at("grids.snapshot_t", "must be a non-negative time"));
        }
        if g.density_points < 2 {
            return Err(ConfigError::at("grids.density_points", "need at least 2 points"));
        }
        if !(g.density_extent >= 2.0 && g.density_extent.is_finite()) {
            return Err(ConfigError::at(
                "grids.density_extent",
                "must be at least 2 so the grid covers both packets",
            ));
        }
        let spatial = self.spatial()?;
        let spacing = 2.0 * g.density_extent * spatial.a() / (g.density_points - 1) as f64;
        let limit = spatial.d() / MIN_POINTS_PER_SPREAD as f64;
        if spacing > limit * (1.0 + 1e-12) {
            return Err(ConfigError::at(
                "grids.density_points",
                format!("spacing {spacing} exceeds d/{MIN_POINTS_PER_SPREAD} = {limit}"),
            ));
        }
        if g.momentum_points < 2 {
            return Err(ConfigError::at("grids.momentum_points", "need at least 2 points"));
        }
        if !(g.momentum_extent > 0.0 && g.momentum_extent.is_finite()) {
            return Err(ConfigError::at("grids.momentum_extent", "must be positive"));
        }
        let e = &self.entanglement;
        if e.literal_d00 && e.case != 1 {
            return Err(ConfigError::at(
                "entanglement.literal_d00",
                "applies to case 1 only",
            ));
        }
        if e.printed_w && e.case != 2 {
            return Err(ConfigError::at(
                "entanglement.printed_w",
                "applies to case 2 only",
            ));
        }
        Ok(())
    }

    pub fn field(&self) -> Result<FieldDistribution, ConfigError> {
        let f = &self.field;
        match f.kind {
            FieldKind::Fock => Ok(fock_distribution(f.n0)),
            FieldKind::Coherent => {
                coherent_distribution(f.alpha, f.tail_tol).map_err(|e| core_error("field", e))
            }
        }
    }

    pub fn spatial(&self) -> Result<SpatialScenario, ConfigError> {
        let s = &self.spatial;
        let d = s.d.unwrap_or(s.a / 10.0);
        SpatialScenario::new(s.a, d, s.lambda, s.recoil_sigma).map_err(|e| core_error("spatial", e))
    }

    pub fn entanglement(&self) -> Result<EntanglementScenario, ConfigError> {
        let e = &self.entanglement;
        let d = e.d.unwrap_or(e.a / 100.0);
        self.case()?;
        EntanglementScenario::new(e.gamma, e.a, d, e.lambda, e.recoil_sigma, e.omega)
            .map_err(|err| core_error("entanglement", err))
    }

    pub fn case(&self) -> Result<Case, ConfigError> {
        match self.entanglement.case {
            1 => Ok(Case::One),
            2 => Ok(Case::Two),
            other => Err(ConfigError::at(
                "entanglement.case",
                format!("must be 1 or 2, got {other}"),
            )),
        }
    }

    pub fn readings(&self) -> Readings {
        Readings {
            literal_d00: self.entanglement.literal_d00,
            printed_w: self.entanglement.printed_w,
        }
    }

    /// Density grid `±density_extent·a`.
    pub fn density_grid(&self) -> Result<Vec<f64>, ConfigError> {
        let r = self.grids.density_extent * self.spatial()?.a();
        Ok(linspace(-r, r, self.grids.density_points))
    }

    /// Momentum grid `±momentum_extent/d`.
    pub fn momentum_grid(&self) -> Result<Vec<f64>, ConfigError> {
        let pmax = self.grids.momentum_extent / self.spatial()?.d();
        Ok(linspace(-pmax, pmax, self.grids.momentum_points))
    }
}
