//! Run configuration: an embedded default TOML file, optionally overlaid by
//! a user file, then by command-line flags.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use modheat::spectral::SpectralRoute;
use modheat::verify::{Axis, Identity, SuiteConfig};
use serde::{Deserialize, Serialize};

pub const DEFAULT_CONFIG: &str = include_str!("../config/default.toml");
pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub series: f64,
    pub quadrature: f64,
    #[serde(default)]
    pub identity: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSection {
    pub m: Option<Vec<f64>>,
    pub samples: Option<usize>,
    pub grid: Option<Axis>,
    pub route: Option<SpectralRoute>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    pub format: Format,
    pub seed: u64,
    pub tolerances: Tolerances,
    #[serde(default)]
    pub suites: BTreeMap<String, SuiteSection>,
}

fn merge(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

impl RunConfig {
    pub fn load(user: Option<&Path>) -> Result<Self> {
        let mut table: toml::Table = DEFAULT_CONFIG.parse().context("embedded default config")?;
        if let Some(path) = user {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let over: toml::Table = text.parse().with_context(|| format!("parsing {}", path.display()))?;
            merge(&mut table, over);
        }
        let cfg: RunConfig = toml::Value::Table(table).try_into().context("config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_VERSION {
            bail!("unsupported config version {} (expected {CONFIG_VERSION})", self.version);
        }
        let t = &self.tolerances;
        for (name, v) in [("series", t.series), ("quadrature", t.quadrature)] {
            if !(v > 0.0) {
                bail!("tolerance '{name}' must be > 0, got {v}");
            }
        }
        for (name, v) in &t.identity {
            name.parse::<Identity>()?;
            if !(*v > 0.0) {
                bail!("tolerance for '{name}' must be > 0, got {v}");
            }
        }
        for (name, s) in &self.suites {
            name.parse::<Identity>()?;
            if let Some(g) = &s.grid {
                g.validate().with_context(|| format!("grid of suite '{name}'"))?;
            }
        }
        Ok(())
    }

    /// Suite inputs for `identity` from the core defaults and this file.
    pub fn suite(&self, identity: Identity) -> SuiteConfig {
        let mut s = SuiteConfig::for_identity(identity);
        s.seed = self.seed;
        if let Some(t) = self.tolerances.identity.get(identity.name()) {
            s.tolerance = *t;
        }
        if let Some(sec) = self.suites.get(identity.name()) {
            if let Some(m) = &sec.m {
                s.m_values = m.clone();
            }
            if let Some(n) = sec.samples {
                s.samples = n;
            }
            if let Some(g) = sec.grid {
                s.y_axis = g;
            }
            if let Some(r) = sec.route {
                s.route = r;
            }
        }
        s
    }
}
