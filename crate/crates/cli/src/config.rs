//! Flat `key = value` run configuration.
//!
//! Precedence is defaults, then the config file, then explicit flags.

use std::collections::BTreeMap;
use std::path::Path;

use mvthresh::cheb::RootOpts;
use mvthresh::scan::{ScanConfig, SignMode};
use mvthresh::{Error, Result};

pub const CONFIG_ENV: &str = "MVTHRESH_CONFIG";

const KEYS: &[&str] = &[
    "tol_root",
    "max_iter",
    "tol_sign",
    "n_e",
    "n_x",
    "n_y",
    "endpoint_tol",
    "full_domain",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub tol_root: f64,
    pub max_iter: usize,
    pub tol_sign: f64,
    pub n_e: usize,
    pub n_x: usize,
    pub n_y: usize,
    pub endpoint_tol: f64,
    pub full_domain: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let s = ScanConfig::default();
        let r = RootOpts::default();
        RunConfig {
            tol_root: r.tol,
            max_iter: r.max_iter,
            tol_sign: s.tol_sign,
            n_e: s.n_e,
            n_x: s.n_x,
            n_y: s.n_y,
            endpoint_tol: s.endpoint_tol,
            full_domain: s.full_domain,
        }
    }
}

/// Parses `key = value` lines. `#` starts a comment; blank lines are skipped.
pub fn parse(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::InvalidInput(format!("config line {}: expected key = value", i + 1)));
        };
        let k = k.trim();
        if !KEYS.contains(&k) {
            return Err(Error::InvalidInput(format!("config line {}: unknown key {k:?}", i + 1)));
        }
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn value<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    map.get(key)
        .map(|v| {
            v.parse()
                .map_err(|_| Error::InvalidInput(format!("config key {key}: bad value {v:?}")))
        })
        .transpose()
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let Some(path) = path else {
            return Ok(cfg);
        };
        let map = parse(&std::fs::read_to_string(path)?)?;
        macro_rules! set {
            ($($f:ident),*) => {$(
                if let Some(v) = value(&map, stringify!($f))? {
                    cfg.$f = v;
                }
            )*};
        }
        set!(tol_root, max_iter, tol_sign, n_e, n_x, n_y, endpoint_tol, full_domain);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol_root > 0.0 && self.tol_sign > 0.0 && self.endpoint_tol > 0.0) {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidInput("max_iter must be positive".into()));
        }
        self.scan(SignMode::Positive).validate()
    }

    pub fn root_opts(&self) -> RootOpts {
        RootOpts {
            tol: self.tol_root,
            max_iter: self.max_iter,
        }
    }

    pub fn scan(&self, sign_mode: SignMode) -> ScanConfig {
        ScanConfig {
            n_e: self.n_e,
            n_x: self.n_x,
            n_y: self.n_y,
            tol_sign: self.tol_sign,
            endpoint_tol: self.endpoint_tol,
            full_domain: self.full_domain,
            sign_mode,
        }
    }
}
