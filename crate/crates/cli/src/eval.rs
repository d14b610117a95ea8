//! `eval`: one function value with its route.

use std::collections::BTreeMap;

use anyhow::Result;
use modheat::h_family::{self, g_alpha_simplex};
use modheat::multivar_hyper::{appell_f1, appell_f2, lauricella_fd};
use modheat::special_fn::gauss_2f1;
use modheat::spectral::{self, SpectralRoute};
use modheat::{GaussParams, HFamilyArgs, HRoute, LauricellaParams, MultiIndex};
use serde::Serialize;

use crate::config::RunConfig;
use crate::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
pub enum Function {
    #[value(name = "2f1")]
    #[serde(rename = "2f1")]
    Gauss,
    #[value(name = "f1")]
    #[serde(rename = "f1")]
    F1,
    #[value(name = "f2")]
    #[serde(rename = "f2")]
    F2,
    #[value(name = "fd")]
    #[serde(rename = "fd")]
    Fd,
    #[value(name = "g_alpha")]
    #[serde(rename = "g_alpha")]
    GAlpha,
    #[value(name = "h_alpha")]
    #[serde(rename = "h_alpha")]
    HAlpha,
    #[value(name = "k_delta")]
    #[serde(rename = "k_delta")]
    KDelta,
    #[value(name = "h_delta")]
    #[serde(rename = "h_delta")]
    HDelta,
    #[value(name = "t")]
    #[serde(rename = "t")]
    T,
}

/// Flag values as given; every flag accepts a comma-separated list.
#[derive(Debug, Clone, Default)]
pub struct Inputs {
    pub values: BTreeMap<&'static str, Vec<f64>>,
    pub route: Option<String>,
}

impl Inputs {
    fn take(&mut self, name: &'static str) -> Option<Vec<f64>> {
        self.values.remove(name)
    }

    fn list(&mut self, name: &'static str, len: Option<usize>) -> Result<Vec<f64>> {
        let v = self.take(name).ok_or_else(|| UsageError(format!("missing --{name}")))?;
        if let Some(n) = len {
            if v.len() != n {
                return Err(UsageError(format!("--{name} takes {n} value(s), got {}", v.len())).into());
            }
        }
        Ok(v)
    }

    fn one(&mut self, name: &'static str) -> Result<f64> {
        Ok(self.list(name, Some(1))?[0])
    }

    fn finish(self, function: Function) -> Result<()> {
        if let Some(name) = self.values.keys().next() {
            return Err(UsageError(format!("--{name} is not a parameter of {}", name_of(function))).into());
        }
        Ok(())
    }
}

fn name_of(f: Function) -> String {
    serde_json::to_value(f).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

#[derive(Debug, Clone, Serialize)]
pub struct Evaluation {
    pub function: Function,
    pub value: f64,
    pub route: String,
    pub inputs: BTreeMap<&'static str, Vec<f64>>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<&'static str, f64>,
}

fn multi_index(v: &[f64]) -> Result<MultiIndex> {
    let mut out = Vec::with_capacity(v.len());
    for &a in v {
        if !(a >= 1.0 && a.fract() == 0.0 && a < 64.0) {
            return Err(UsageError(format!("multi-index entries must be positive integers, got {a}")).into());
        }
        out.push(a as u32);
    }
    Ok(MultiIndex::new(out)?)
}

fn gauss_route(z: f64) -> &'static str {
    if z == 0.0 {
        "origin"
    } else if z.abs() <= 0.5 {
        "series"
    } else if z < -0.5 {
        "pfaff-transformed series"
    } else {
        "series near 1 (euler-transformed when a+b>c)"
    }
}

pub fn evaluate(function: Function, mut inp: Inputs, cfg: &RunConfig) -> Result<Evaluation> {
    let given = inp.values.clone();
    let route_flag = inp.route.take();
    if route_flag.is_some() && !matches!(function, Function::HAlpha | Function::KDelta | Function::HDelta) {
        return Err(UsageError(format!("--route is not accepted by {}", name_of(function))).into());
    }
    let series = cfg.tolerances.series;
    let quad = cfg.tolerances.quadrature;
    let mut extra = BTreeMap::new();
    let spectral_route = |r: &Option<String>| -> Result<SpectralRoute> {
        Ok(match r {
            Some(s) => s.parse()?,
            None => SpectralRoute::HAlpha,
        })
    };
    let (value, route) = match function {
        Function::Gauss => {
            let (a, b, c, z) = (inp.one("a")?, inp.one("b")?, inp.one("c")?, inp.one("z")?);
            (gauss_2f1(GaussParams::new(a, b, c), z, series)?, gauss_route(z).to_string())
        }
        Function::F1 => {
            let (a, b, c, z) = (inp.one("a")?, inp.list("b", Some(2))?, inp.one("c")?, inp.list("z", Some(2))?);
            (appell_f1(a, b[0], b[1], c, z[0], z[1], series)?, "lauricella dispatch (n = 2)".into())
        }
        Function::F2 => {
            let (a, b, c, z) =
                (inp.one("a")?, inp.list("b", Some(2))?, inp.list("c", Some(2))?, inp.list("z", Some(2))?);
            (appell_f2(a, b[0], b[1], c[0], c[1], z[0], z[1], series)?, "double series / quadrature".into())
        }
        Function::Fd => {
            let (a, b, c) = (inp.one("a")?, inp.list("b", None)?, inp.one("c")?);
            let z = inp.list("z", Some(b.len()))?;
            (lauricella_fd(&LauricellaParams::new(a, b, c), &z, series)?, "lauricella dispatch".into())
        }
        Function::GAlpha => {
            let alpha = multi_index(&inp.list("alpha", None)?)?;
            let s = inp.list("s", Some(alpha.0.len()))?;
            (g_alpha_simplex(&alpha, &s, quad)?, "simplex quadrature".into())
        }
        Function::HAlpha => {
            let alpha = multi_index(&inp.list("alpha", None)?)?;
            let z = inp.list("z", Some(alpha.n()))?;
            let m = inp.one("m")?;
            let j = match inp.take("j") {
                Some(v) if v.len() == 1 && v[0] >= 0.0 && v[0].fract() == 0.0 => v[0] as u32,
                Some(_) => return Err(UsageError("--j takes one non-negative integer".into()).into()),
                None => 2,
            };
            let route: HRoute = match &route_flag {
                Some(s) => s.parse()?,
                None => HRoute::Reduced,
            };
            let tol = if route == HRoute::Quadrature { quad } else { series };
            let args = HFamilyArgs::new(z, m).with_j(j);
            (h_family::h_alpha(&alpha, &args, route, tol)?, route.to_string())
        }
        Function::KDelta => {
            let (y, m) = (inp.one("y")?, inp.one("m")?);
            let r = spectral_route(&route_flag)?;
            (spectral::k_delta(y, m, r)?, r.to_string())
        }
        Function::HDelta => {
            let (y, m) = (inp.list("y", Some(2))?, inp.one("m")?);
            let r = spectral_route(&route_flag)?;
            (spectral::h_delta(y[0], y[1], m, r)?, r.to_string())
        }
        Function::T => {
            let y = inp.one("y")?;
            let t = spectral::t_function(y)?;
            extra.insert("simplified", t.simplified);
            (t.definitional, "definitional (m = 2)".into())
        }
    };
    inp.finish(function)?;
    Ok(Evaluation { function, value, route, inputs: given, extra })
}
