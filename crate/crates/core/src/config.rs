//! Line-oriented `key = value` configuration ingestion.
//!
//! Keys match the parameter field names exactly (`kappa_a_s = 1.0`,
//! `delta_a = 1.0`, ...); `#` begins a comment; unknown keys are an error.
//! `omega_m` is optional (default 1) and sets the unit all other rates are
//! normalized against during validation.

use std::path::Path;

use crate::error::{Error, Result};
use crate::params::{OptomechParams, SqueezerParams};

/// Raw configuration: every recognized key, before validation.
#[derive(Debug, Clone, Copy)]
pub struct RawConfig {
    pub omega_m: f64,
    pub gamma: Option<f64>,
    pub n_th: Option<f64>,
    pub kappa_a_s: Option<f64>,
    pub kappa_a_loss: Option<f64>,
    pub delta_a: Option<f64>,
    pub g: Option<f64>,
    pub chi: Option<f64>,
    pub kappa_c_s: Option<f64>,
    pub kappa_c_loss: Option<f64>,
    pub phi: Option<f64>,
}

impl Default for RawConfig {
    fn default() -> Self {
        RawConfig {
            omega_m: 1.0,
            gamma: None,
            n_th: None,
            kappa_a_s: None,
            kappa_a_loss: None,
            delta_a: None,
            g: None,
            chi: None,
            kappa_c_s: None,
            kappa_c_loss: None,
            phi: None,
        }
    }
}

impl RawConfig {
    /// Assign one key. Accepts the flat config keys and the dotted override
    /// forms `optomech.<key>` / `squeezer.<key>` used by `--set`.
    pub fn set(&mut self, key: &str, value: f64, line: usize) -> Result<()> {
        let flat = key
            .strip_prefix("optomech.")
            .or_else(|| key.strip_prefix("squeezer."))
            .unwrap_or(key);
        match flat {
            "omega_m" => self.omega_m = value,
            "gamma" => self.gamma = Some(value),
            "n_th" => self.n_th = Some(value),
            "kappa_a_s" => self.kappa_a_s = Some(value),
            "kappa_a_loss" => self.kappa_a_loss = Some(value),
            "delta_a" => self.delta_a = Some(value),
            "g" => self.g = Some(value),
            "chi" => self.chi = Some(value),
            "kappa_c_s" => self.kappa_c_s = Some(value),
            "kappa_c_loss" => self.kappa_c_loss = Some(value),
            "phi" => self.phi = Some(value),
            _ => {
                return Err(Error::UnknownKey {
                    line,
                    key: key.to_string(),
                })
            }
        }
        Ok(())
    }

    /// Split into parameter structs, requiring every physical key.
    pub fn into_params(self) -> Result<(OptomechParams, SqueezerParams)> {
        fn req(name: &'static str, v: Option<f64>) -> Result<f64> {
            v.ok_or(Error::MissingKey(name))
        }
        let optomech = OptomechParams {
            omega_m: self.omega_m,
            gamma: req("gamma", self.gamma)?,
            n_th: req("n_th", self.n_th)?,
            kappa_a_s: req("kappa_a_s", self.kappa_a_s)?,
            kappa_a_loss: req("kappa_a_loss", self.kappa_a_loss)?,
            delta_a: req("delta_a", self.delta_a)?,
            g: req("g", self.g)?,
        };
        let squeezer = SqueezerParams {
            chi: req("chi", self.chi)?,
            kappa_c_s: req("kappa_c_s", self.kappa_c_s)?,
            kappa_c_loss: req("kappa_c_loss", self.kappa_c_loss)?,
            phi: req("phi", self.phi)?,
        };
        Ok((optomech, squeezer))
    }
}

/// Parse config text into a [`RawConfig`].
pub fn parse_config(text: &str) -> Result<RawConfig> {
    let mut cfg = RawConfig::default();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::ConfigParse {
                line: line_no,
                text: raw_line.trim().to_string(),
            });
        };
        let key = key.trim();
        let value: f64 = value.trim().parse().map_err(|_| Error::ConfigParse {
            line: line_no,
            text: raw_line.trim().to_string(),
        })?;
        cfg.set(key, value, line_no)?;
    }
    Ok(cfg)
}

/// Read and parse a config file.
pub fn load_config(path: &Path) -> Result<RawConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}
