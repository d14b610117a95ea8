//! Grid suites for the functional identities and the report they produce.
//!
//! Every suite expands its configuration into a list of points, evaluates
//! them in parallel and folds the residuals in input order, so a report
//! depends only on the configuration (including the seed).

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::h_family::{h_alpha, HFamilyArgs, HRoute, MultiIndex};
use crate::special_fn::{contiguous_residuals, transform_check, GaussParams};
use crate::spectral::{self, SpectralRoute};
use crate::{Error, Result};

/// Schema tag written into every report.
pub const REPORT_SCHEMA: &str = "modheat-report/1";

/// Fixed CSV header.
pub const CSV_HEADER: &str = "identity,y1,y2,m,residual";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    Contiguous,
    Transforms,
    Reduction,
    RecursionM,
    GaussBonnet,
    CmRelation,
    RouteAgreement,
}

impl Identity {
    pub const ALL: [Identity; 7] = [
        Identity::Contiguous,
        Identity::Transforms,
        Identity::Reduction,
        Identity::RecursionM,
        Identity::GaussBonnet,
        Identity::CmRelation,
        Identity::RouteAgreement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Contiguous => "contiguous",
            Identity::Transforms => "transforms",
            Identity::Reduction => "reduction",
            Identity::RecursionM => "recursion-m",
            Identity::GaussBonnet => "gauss-bonnet",
            Identity::CmRelation => "cm-relation",
            Identity::RouteAgreement => "route-agreement",
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            Identity::Contiguous | Identity::Transforms | Identity::GaussBonnet => 1e-10,
            Identity::Reduction | Identity::CmRelation | Identity::RouteAgreement => 1e-8,
            Identity::RecursionM => 1e-9,
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == key)
            .ok_or_else(|| Error::domain(format!("unknown identity '{s}'")))
    }
}

/// One grid axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub log: bool,
}

impl Axis {
    pub fn linear(min: f64, max: f64, count: usize) -> Self {
        Self { min, max, count, log: false }
    }

    pub fn log(min: f64, max: f64, count: usize) -> Self {
        Self { min, max, count, log: true }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::domain("grid count must be at least 1"));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min <= self.max) {
            return Err(Error::domain(format!("bad grid range [{}, {}]", self.min, self.max)));
        }
        if self.log && !(self.min > 0.0) {
            return Err(Error::domain("log-spaced grids need a positive lower end"));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let t = i as f64 / n;
                if self.log {
                    (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp()
                } else {
                    self.min + t * (self.max - self.min)
                }
            })
            .collect()
    }
}

/// Inputs of a suite. Fields a suite does not use are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub m_values: Vec<f64>,
    /// Modular-variable axis; two-variable suites use it for both `y₁` and `y₂`.
    pub y_axis: Axis,
    /// Random points per parameter set.
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub route: SpectralRoute,
}

impl SuiteConfig {
    pub fn for_identity(identity: Identity) -> Self {
        let (m_values, y_axis, samples) = match identity {
            Identity::Contiguous | Identity::Transforms => (vec![], Axis::linear(-0.9, 0.9, 21), 100),
            Identity::Reduction => (vec![2.5, 3.0, 4.0, 6.0], Axis::linear(-0.9, 0.9, 21), 10),
            Identity::RecursionM => (vec![2.5, 3.0, 4.0], Axis::linear(0.2, 5.0, 21), 20),
            Identity::GaussBonnet => (vec![2.0], Axis::log(0.1, 10.0, 21), 0),
            Identity::CmRelation => (vec![2.5, 3.0, 4.0, 5.5, 10.0], Axis::linear(0.3, 3.0, 21), 0),
            Identity::RouteAgreement => (vec![2.5, 3.0, 4.0, 5.5, 10.0], Axis::linear(0.2, 5.0, 21), 0),
        };
        Self {
            m_values,
            y_axis,
            samples,
            seed: 7,
            tolerance: identity.default_tolerance(),
            route: SpectralRoute::Closed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.y_axis.validate()?;
        if !(self.tolerance > 0.0) {
            return Err(Error::domain(format!("tolerance must be > 0, got {}", self.tolerance)));
        }
        if let Some(m) = self.m_values.iter().find(|m| !m.is_finite()) {
            return Err(Error::domain(format!("bad dimension {m}")));
        }
        Ok(())
    }
}

/// One evaluated point. Parameter suites put their argument in `y1` and
/// describe the remaining parameters in `detail`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualRow {
    pub y1: f64,
    pub y2: Option<f64>,
    pub m: Option<f64>,
    #[serde(with = "nonfinite")]
    pub residual: f64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl ResidualRow {
    fn new(y1: f64, y2: Option<f64>, m: Option<f64>, residual: f64, detail: String) -> Self {
        Self { y1, y2, m, residual, detail }
    }
}

/// JSON has no infinities: non-finite residuals are written as `null` and
/// read back as `+∞`.
mod nonfinite {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: Identity,
    pub config: SuiteConfig,
    pub points: usize,
    #[serde(with = "nonfinite")]
    pub max_residual: f64,
    pub passed: bool,
    pub worst: Option<ResidualRow>,
    pub rows: Vec<ResidualRow>,
}

impl IdentityReport {
    fn from_rows(identity: Identity, config: SuiteConfig, rows: Vec<ResidualRow>) -> Self {
        let mut worst: Option<&ResidualRow> = None;
        let mut max_residual = 0.0f64;
        for r in &rows {
            let v = if r.residual.is_nan() { f64::INFINITY } else { r.residual.abs() };
            if worst.is_none() || v > max_residual {
                max_residual = v;
                worst = Some(r);
            }
        }
        let worst = worst.cloned();
        let passed = !rows.is_empty() && max_residual < config.tolerance;
        Self { identity, points: rows.len(), max_residual, passed, worst, rows, config }
    }

    pub fn csv_rows(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        self.rows
            .iter()
            .map(|r| format!("{},{:e},{},{},{:e}", self.identity, r.y1, opt(r.y2), opt(r.m), r.residual))
            .collect()
    }

    /// One line summary with the worst point.
    pub fn summary(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!(
            "{status} {}: max residual {:.3e} (tol {:.1e}) over {} points",
            self.identity, self.max_residual, self.config.tolerance, self.points
        );
        if let Some(w) = &self.worst {
            s.push_str(&format!("; worst at y1 = {}", w.y1));
            if let Some(y2) = w.y2 {
                s.push_str(&format!(", y2 = {y2}"));
            }
            if let Some(m) = w.m {
                s.push_str(&format!(", m = {m}"));
            }
            if !w.detail.is_empty() {
                s.push_str(&format!(" [{}]", w.detail));
            }
        }
        s
    }
}

/// A collection of suite outcomes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub passed: bool,
    pub identities: Vec<IdentityReport>,
}

impl Report {
    pub fn new(identities: Vec<IdentityReport>) -> Self {
        let passed = identities.iter().all(|r| r.passed);
        Self { schema: REPORT_SCHEMA.to_string(), passed, identities }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: Report = serde_json::from_str(s).map_err(|e| Error::domain(format!("report: {e}")))?;
        if r.schema != REPORT_SCHEMA {
            return Err(Error::domain(format!("unsupported report schema '{}'", r.schema)));
        }
        Ok(r)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.identities {
            for line in r.csv_rows() {
                out.push_str(&line);
                out.push('\n');
            }
        }
        out
    }
}

/// Evaluate in parallel, keep input order, stop at the first error in that order.
fn par_rows<P: Sync>(points: &[P], f: impl Fn(&P) -> Result<ResidualRow> + Sync + Send) -> Result<Vec<ResidualRow>> {
    points.par_iter().map(f).collect::<Vec<_>>().into_iter().collect()
}

pub fn run(identity: Identity, config: &SuiteConfig) -> Result<IdentityReport> {
    config.validate()?;
    let rows = match identity {
        Identity::Contiguous => contiguous(config)?,
        Identity::Transforms => transforms(config)?,
        Identity::Reduction => reduction(config)?,
        Identity::RecursionM => recursion_m(config)?,
        Identity::GaussBonnet => gauss_bonnet(config)?,
        Identity::CmRelation => cm_relation(config)?,
        Identity::RouteAgreement => route_agreement(config)?,
    };
    Ok(IdentityReport::from_rows(identity, config.clone(), rows))
}

/// Random `(a, b, c, z)` with `c`, `c ± 1` kept away from the poles.
pub fn random_gauss_points(samples: usize, seed: u64) -> Vec<(GaussParams, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let a = rng.gen_range(-2.5..2.5);
            let b = rng.gen_range(-2.5..2.5);
            let c = rng.gen_range(1.2..3.8);
            let z = rng.gen_range(-0.9..0.9);
            (GaussParams::new(a, b, c), z)
        })
        .collect()
}

/// Random points of `[lo, hi]^n`.
pub fn random_box(n: usize, samples: usize, lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    (0..samples).map(|_| (0..n).map(|_| rng.gen_range(lo..hi)).collect()).collect()
}

fn gauss_detail(p: &GaussParams) -> String {
    format!("a={}, b={}, c={}", p.a, p.b, p.c)
}

fn contiguous(cfg: &SuiteConfig) -> Result<Vec<ResidualRow>> {
    let pts = random_gauss_points(cfg.samples, cfg.seed);
    par_rows(&pts, |(p, z)| {
        let r = contiguous_residuals(*p, *z)?.into_iter().fold(0.0f64, |a, x| a.max(x.abs()));
        Ok(ResidualRow::new(*z, None, None, r, gauss_detail(p)))
    })
}

fn transforms(cfg: &SuiteConfig) -> Result<Vec<ResidualRow>> {
    let pts = random_gauss_points(cfg.samples, cfg.seed);
    par_rows(&pts, |(p, z)| Ok(ResidualRow::new(*z, None, None, transform_check(*p, *z)?.max_abs(), gauss_detail(p))))
}

/// Multi-indices exercised by the route comparison.
pub fn reduction_indices() -> Vec<MultiIndex> {
    [&[2, 1][..], &[3, 1], &[4, 1], &[2, 1, 1], &[3, 1, 1], &[2, 2, 1]]
        .iter()
        .map(|a| MultiIndex::new(a.to_vec()).expect("valid index"))
        .collect()
}

/// Largest pairwise difference of `H_α` over the available routes.
pub fn route_spread(alpha: &MultiIndex, zbar: &[f64], m: f64, tol: f64) -> Result<f64> {
    let args = HFamilyArgs::new(zbar.to_vec(), m);
    let even = m.fract() == 0.0 && (m as i64) % 2 == 0;
    let mut vals = Vec::with_capacity(4);
    for route in HRoute::ALL {
        if route == HRoute::EvenM && !even {
            continue;
        }
        vals.push(h_alpha(alpha, &args, route, tol)?);
    }
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(hi - lo)
}

fn reduction(cfg: &SuiteConfig) -> Result<Vec<ResidualRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pts = Vec::new();
    for &m in &cfg.m_values {
        for alpha in reduction_indices() {
            for z in random_box(alpha.n(), cfg.samples, -0.9, 0.9, &mut rng) {
                pts.push((alpha.clone(), z, m));
            }
        }
    }
    par_rows(&pts, |(alpha, z, m)| {
        let r = route_spread(alpha, z, *m, 1e-12)?;
        Ok(ResidualRow::new(z[0], z.get(1).copied(), Some(*m), r, format!("alpha={alpha}")))
    })
}

/// `K(y; m+2)` from the `m`-level family through the index-raising
/// recursion, compared with the direct value.
pub fn k_recursion_residual(y: f64, m: f64) -> Result<f64> {
    let lifted = spectral::k_delta_by(y, m + 2.0, HRoute::Reduced, 1e-14)?;
    let raised = spectral::k_combo().eval_with(&[1.0 - y], m + 2.0, |alpha, z| {
        let mut acc = 0.0;
        for q in 0..alpha.0.len() {
            let args = HFamilyArgs::new(z.to_vec(), m);
            acc += alpha.0[q] as f64 * h_alpha(&alpha.raised(q), &args, HRoute::Reduced, 1e-14)?;
        }
        Ok(acc)
    })?;
    Ok((lifted - raised).abs() / lifted.abs().max(1.0))
}

enum RecPoint {
    Index(Vec<u32>, Vec<f64>, f64),
    K(f64, f64),
}

fn recursion_m(cfg: &SuiteConfig) -> Result<Vec<ResidualRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pts = Vec::new();
    for &m in &cfg.m_values {
        for _ in 0..cfg.samples {
            let a = rng.gen_range(1..=3);
            let b = rng.gen_range(1..=3);
            pts.push(RecPoint::Index(vec![a, b], vec![rng.gen_range(-0.9..0.9)], m));
            let c = rng.gen_range(1..=2);
            pts.push(RecPoint::Index(vec![a, b, c], vec![rng.gen_range(-0.9..0.9), rng.gen_range(-0.9..0.9)], m));
        }
        for y in cfg.y_axis.points() {
            if y > 0.0 {
                pts.push(RecPoint::K(y, m));
            }
        }
    }
    par_rows(&pts, |p| match p {
        RecPoint::Index(al, z, m) => {
            let r = crate::h_family::recursion_residuals_m(al[0], al[1], al.get(2).copied(), z, *m)?[0].abs();
            let detail = format!("alpha={}", MultiIndex(al.clone()));
            Ok(ResidualRow::new(z[0], z.get(1).copied(), Some(*m), r, detail))
        }
        RecPoint::K(y, m) => Ok(ResidualRow::new(*y, None, Some(*m), k_recursion_residual(*y, *m)?, "K".into())),
    })
}

fn gauss_bonnet(cfg: &SuiteConfig) -> Result<Vec<ResidualRow>> {
    let ys = cfg.y_axis.points();
    par_rows(&ys, |&y| Ok(ResidualRow::new(y, None, Some(2.0), spectral::gauss_bonnet_residual(&[y])?, String::new())))
}

fn grid2(cfg: &SuiteConfig) -> Vec<(f64, f64, f64)> {
    let ys = cfg.y_axis.points();
    let mut pts = Vec::with_capacity(ys.len() * ys.len() * cfg.m_values.len());
    for &m in &cfg.m_values {
        for &y1 in &ys {
            for &y2 in &ys {
                pts.push((y1, y2, m));
            }
        }
    }
    pts
}

fn cm_relation(cfg: &SuiteConfig) -> Result<Vec<ResidualRow>> {
    let route = cfg.route;
    par_rows(&grid2(cfg), |&(y1, y2, m)| {
        Ok(ResidualRow::new(y1, Some(y2), Some(m), spectral::cm_residual(y1, y2, m, route)?, String::new()))
    })
}

/// Spread of route values, relative once the values exceed 1 in magnitude.
fn spread(vals: &[f64]) -> f64 {
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    (hi - lo) / hi.abs().max(lo.abs()).max(1.0)
}

fn route_agreement(cfg: &SuiteConfig) -> Result<Vec<ResidualRow>> {
    let mut k_pts = Vec::new();
    for &m in &cfg.m_values {
        for y in cfg.y_axis.points() {
            k_pts.push((y, m));
        }
    }
    let mut rows = par_rows(&k_pts, |&(y, m)| {
        let vals: Vec<f64> = SpectralRoute::ALL.iter().map(|&r| spectral::k_delta(y, m, r)).collect::<Result<_>>()?;
        Ok(ResidualRow::new(y, None, Some(m), spread(&vals), "K".into()))
    })?;
    rows.extend(par_rows(&grid2(cfg), |&(y1, y2, m)| {
        let vals: Vec<f64> =
            SpectralRoute::ALL.iter().map(|&r| spectral::h_delta(y1, y2, m, r)).collect::<Result<_>>()?;
        Ok(ResidualRow::new(y1, Some(y2), Some(m), spread(&vals), "H".into()))
    })?);
    Ok(rows)
}
