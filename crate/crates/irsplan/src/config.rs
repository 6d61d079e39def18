//! Experiment configuration in TOML. Unknown keys are rejected and every
//! error names the offending field.

use std::path::Path;

use serde::{Deserialize, Serialize};

use irsplan_core::ao::AoConfig;
use irsplan_core::channel::{ArrayShape, ChannelModel};
use irsplan_core::geometry::{NetworkGeometry, PathLossModel, Point3, Region};
use irsplan_core::polyblock::PolyblockOptions;
use irsplan_core::rates::{DecodingOrder, Scheme};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.into(),
        message: message.into(),
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeName {
    Noma,
    Fdma,
    Tdma,
}

impl From<SchemeName> for Scheme {
    fn from(s: SchemeName) -> Self {
        match s {
            SchemeName::Noma => Scheme::Noma,
            SchemeName::Fdma => Scheme::Fdma,
            SchemeName::Tdma => Scheme::Tdma,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    Ao,
    MoBound,
    Exhaustive,
}

impl Solver {
    pub fn name(self) -> &'static str {
        match self {
            Solver::Ao => "ao",
            Solver::MoBound => "mo-bound",
            Solver::Exhaustive => "exhaustive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParam {
    #[serde(rename = "M")]
    Elements,
    #[serde(rename = "p_max_dbm")]
    PMaxDbm,
    #[serde(rename = "x_grid")]
    XGrid,
}

impl std::str::FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "M" => Ok(SweepParam::Elements),
            "p_max_dbm" => Ok(SweepParam::PMaxDbm),
            "x_grid" => Ok(SweepParam::XGrid),
            other => Err(format!("unknown sweep parameter {other:?}, expected M, p_max_dbm or x_grid")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    pub ap: [f64; 3],
    pub users: Vec<[f64; 3]>,
    pub region_lower: [f64; 3],
    pub region_upper: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSection {
    /// Number of IRS elements.
    pub elements: usize,
    /// Elements per horizontal row.
    pub m_h: usize,
    /// Element spacing in wavelengths.
    pub spacing: f64,
    pub rho0_db: f64,
    pub alpha_ai: f64,
    pub alpha_iu: f64,
    pub rician_ai_db: f64,
    pub rician_iu_db: f64,
    pub los_only: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub scheme: SchemeName,
    pub solver: Solver,
    pub weights: Vec<f64>,
    pub p_max_dbm: f64,
    pub sigma2_dbm: f64,
    pub realizations: usize,
    pub seed: u64,
    /// Worker threads; zero uses every core.
    #[serde(default)]
    pub workers: usize,
    /// Record wall-clock time. Off by default so output is reproducible.
    #[serde(default)]
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AoSection {
    pub delta: f64,
    pub eps_max: f64,
    pub starts: Vec<[f64; 3]>,
    pub xi: f64,
    pub max_iters: usize,
    pub samples: usize,
    /// Decoding order from weakest to strongest user, zero-based.
    pub order: Option<Vec<usize>>,
}

impl Default for AoSection {
    fn default() -> Self {
        let d = AoConfig::default();
        Self {
            delta: d.delta,
            eps_max: d.eps_max,
            starts: d.starts.iter().map(|p| p.to_array()).collect(),
            xi: d.xi,
            max_iters: d.max_iters,
            samples: d.samples,
            order: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MoSection {
    pub eps: f64,
    pub bisection_eps: f64,
    pub max_iters: usize,
    /// Spacing of candidate positions along x for the exhaustive solver.
    pub grid_step: f64,
}

impl Default for MoSection {
    fn default() -> Self {
        let d = PolyblockOptions::default();
        Self {
            eps: d.eps,
            bisection_eps: d.bisection_eps,
            max_iters: d.max_iters,
            grid_step: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub geometry: GeometrySection,
    pub channel: ChannelSection,
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub ao: AoSection,
    #[serde(default)]
    pub mo: MoSection,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
}

impl Default for ExperimentConfig {
    /// Four users on a line, a 50-element IRS movable along x between 30 m
    /// and 45 m, and 100 Rician realizations.
    fn default() -> Self {
        Self {
            geometry: GeometrySection {
                ap: [0.0, 0.0, 5.0],
                users: (1..=4).map(|k| [25.0 + 5.0 * k as f64, 0.0, 1.5]).collect(),
                region_lower: [30.0, 5.0, 5.0],
                region_upper: [45.0, 5.0, 5.0],
            },
            channel: ChannelSection {
                elements: 50,
                m_h: 5,
                spacing: 0.5,
                rho0_db: -30.0,
                alpha_ai: 2.2,
                alpha_iu: 2.2,
                rician_ai_db: 3.0,
                rician_iu_db: 3.0,
                los_only: false,
            },
            experiment: ExperimentSection {
                scheme: SchemeName::Noma,
                solver: Solver::Ao,
                weights: vec![0.1, 0.2, 0.3, 0.4],
                p_max_dbm: 30.0,
                sigma2_dbm: -90.0,
                realizations: 100,
                seed: 1,
                workers: 0,
                timing: false,
            },
            ao: AoSection::default(),
            mo: MoSection::default(),
            sweep: None,
        }
    }
}

fn point(a: [f64; 3]) -> Point3 {
    Point3::from_array(a)
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let de = toml::Deserializer::new(text);
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| ConfigError::Parse {
            path: e.path().to_string(),
            message: e.inner().message().to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn num_users(&self) -> usize {
        self.geometry.users.len()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let k = self.num_users();
        if k == 0 {
            return Err(invalid("geometry.users", "at least one user is required"));
        }
        self.network().map_err(|e| invalid("geometry", e.to_string()))?;
        let e = &self.experiment;
        if e.weights.len() != k {
            return Err(invalid("experiment.weights", format!("{} weights for {k} users", e.weights.len())));
        }
        if let Some(i) = e.weights.iter().position(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(invalid(&format!("experiment.weights[{i}]"), "weights must be finite and non-negative"));
        }
        if e.realizations == 0 {
            return Err(invalid("experiment.realizations", "at least one realization is required"));
        }
        let c = &self.channel;
        if c.m_h == 0 || c.elements == 0 || c.elements % c.m_h != 0 {
            return Err(invalid(
                "channel.elements",
                format!("{} elements are not a multiple of m_h = {}", c.elements, c.m_h),
            ));
        }
        for (name, v) in [("channel.alpha_ai", c.alpha_ai), ("channel.alpha_iu", c.alpha_iu), ("channel.spacing", c.spacing)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(invalid(name, "must be positive"));
            }
        }
        if !e.p_max_dbm.is_finite() || !e.sigma2_dbm.is_finite() {
            return Err(invalid("experiment", "p_max_dbm and sigma2_dbm must be finite"));
        }
        if let Some(order) = &self.ao.order {
            DecodingOrder::from_sequence(order)
                .ok()
                .filter(|o| o.len() == k)
                .ok_or_else(|| invalid("ao.order", format!("{order:?} is not an order of {k} users")))?;
        }
        self.ao_config(0).validate().map_err(|e| invalid("ao", e.to_string()))?;
        if !(self.mo.grid_step > 0.0) {
            return Err(invalid("mo.grid_step", "must be positive"));
        }
        if let Some(s) = &self.sweep {
            if s.values.is_empty() {
                return Err(invalid("sweep.values", "empty sweep"));
            }
        }
        Ok(())
    }

    pub fn network(&self) -> irsplan_core::Result<NetworkGeometry> {
        let g = &self.geometry;
        NetworkGeometry::new(
            point(g.ap),
            g.users.iter().copied().map(point).collect(),
            Region::new(point(g.region_lower), point(g.region_upper))?,
        )
    }

    pub fn channel_model(&self) -> irsplan_core::Result<ChannelModel> {
        let c = &self.channel;
        Ok(ChannelModel {
            array: ArrayShape::new(c.elements, c.m_h, c.spacing)?,
            path_loss: PathLossModel::new(db_to_linear(c.rho0_db), c.alpha_ai, c.alpha_iu),
            rician_ai: db_to_linear(c.rician_ai_db),
            rician_iu: db_to_linear(c.rician_iu_db),
            los_only: c.los_only,
        })
    }

    pub fn p_max(&self) -> f64 {
        dbm_to_watts(self.experiment.p_max_dbm)
    }

    pub fn sigma2(&self) -> f64 {
        dbm_to_watts(self.experiment.sigma2_dbm)
    }

    pub fn ao_config(&self, seed: u64) -> AoConfig {
        let a = &self.ao;
        AoConfig {
            delta: a.delta,
            eps_max: a.eps_max,
            starts: a.starts.iter().copied().map(point).collect(),
            xi: a.xi,
            max_iters: a.max_iters,
            samples: a.samples,
            seed,
            order: a.order.as_ref().and_then(|o| DecodingOrder::from_sequence(o).ok()),
            ..AoConfig::default()
        }
    }

    pub fn polyblock_options(&self) -> PolyblockOptions {
        PolyblockOptions {
            eps: self.mo.eps,
            bisection_eps: self.mo.bisection_eps,
            max_iters: self.mo.max_iters,
            ..PolyblockOptions::default()
        }
    }

    /// Copy with one sweep parameter replaced.
    pub fn with_param(&self, param: SweepParam, value: f64) -> Result<Self, ConfigError> {
        let mut c = self.clone();
        match param {
            SweepParam::Elements => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(invalid("sweep.values", format!("{value} is not an element count")));
                }
                c.channel.elements = value as usize;
            }
            SweepParam::PMaxDbm => c.experiment.p_max_dbm = value,
            SweepParam::XGrid => {
                let (lo, hi) = (c.geometry.region_lower[0], c.geometry.region_upper[0]);
                if value < lo || value > hi {
                    return Err(invalid("sweep.values", format!("x = {value} lies outside [{lo}, {hi}]")));
                }
                // pin the IRS at x with a zero-radius local region
                let y = 0.5 * (c.geometry.region_lower[1] + c.geometry.region_upper[1]);
                let z = 0.5 * (c.geometry.region_lower[2] + c.geometry.region_upper[2]);
                c.ao.starts = vec![[value, y, z]];
                c.ao.delta = 0.0;
            }
        }
        c.validate()?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips_through_toml() {
        let c = ExperimentConfig::default();
        let back = ExperimentConfig::from_toml_str(&c.to_toml_string()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn unknown_keys_name_their_path() {
        let mut text = ExperimentConfig::default().to_toml_string();
        text = text.replace("[ao]\n", "[ao]\ndeltta = 0.1\n");
        let err = ExperimentConfig::from_toml_str(&text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("ao") && msg.contains("deltta"), "{msg}");
    }

    #[test]
    fn element_count_must_fill_rows() {
        let mut c = ExperimentConfig::default();
        c.channel.elements = 12;
        let err = c.validate().unwrap_err().to_string();
        assert!(err.starts_with("channel.elements"), "{err}");
    }

    #[test]
    fn unit_conversions() {
        assert!((dbm_to_watts(30.0) - 1.0).abs() < 1e-15);
        assert!((dbm_to_watts(-90.0) - 1e-12).abs() < 1e-27);
        assert!((db_to_linear(3.0) - 1.9952623149688795).abs() < 1e-15);
    }
}
