//! Sectioned key-value config files.
//!
//! Format: `[section]` headers over `key = value` lines, `#` comments,
//! case-sensitive keys with units embedded in their names. Unknown keys and
//! sections are rejected rather than ignored. Every key is optional; an
//! empty document parses to the built-in defaults.
//!
//! NOMA power coefficients apply family-wide: both NOMA schemes share the
//! `noma_alpha_*` pair.

use crate::engine::SweepConfig;
use crate::error::Error;
use crate::schemes::{Scheme, SchemeConfig};
use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("{0}")]
    Constraint(String),
}

fn parse_err(line: usize, col: usize, msg: impl Into<String>) -> ConfigError {
    ConfigError::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

const SECTIONS: [&str; 4] = ["radio", "geometry", "sweep", "schemes"];

/// Scheme-family settings that can only be applied once the scheme list is
/// known.
#[derive(Default)]
struct StagedSchemes {
    list: Option<Vec<Scheme>>,
    noma_weak: Option<f64>,
    noma_strong: Option<f64>,
    oma_weak: Option<f64>,
    oma_strong: Option<f64>,
}

impl StagedSchemes {
    fn apply(self, cfg: &mut SweepConfig) {
        let list = self.list.unwrap_or_else(|| Scheme::ALL.to_vec());
        cfg.schemes = list
            .into_iter()
            .map(|scheme| {
                let mut sc = SchemeConfig::defaults_for(scheme);
                let (weak, strong) = match scheme {
                    Scheme::OmaHd => (self.oma_weak, self.oma_strong),
                    Scheme::NomaHd | Scheme::NomaFd => (self.noma_weak, self.noma_strong),
                };
                if let Some(w) = weak {
                    sc.alpha_weak = w;
                }
                if let Some(s) = strong {
                    sc.alpha_strong = s;
                }
                sc
            })
            .collect();
    }
}

fn want_f64(value: &str, line: usize, col: usize) -> Result<f64, ConfigError> {
    value
        .parse()
        .map_err(|_| parse_err(line, col, format!("expected a number, got {value:?}")))
}

fn want_u64(value: &str, line: usize, col: usize) -> Result<u64, ConfigError> {
    value
        .parse()
        .map_err(|_| parse_err(line, col, format!("expected an integer, got {value:?}")))
}

fn want_usize(value: &str, line: usize, col: usize) -> Result<usize, ConfigError> {
    value
        .parse()
        .map_err(|_| parse_err(line, col, format!("expected an integer, got {value:?}")))
}

fn want_bool(value: &str, line: usize, col: usize) -> Result<bool, ConfigError> {
    value
        .parse()
        .map_err(|_| parse_err(line, col, format!("expected true or false, got {value:?}")))
}

fn want_f64_list(value: &str, line: usize, col: usize) -> Result<Vec<f64>, ConfigError> {
    value
        .split(',')
        .map(|item| want_f64(item.trim(), line, col))
        .collect()
}

fn want_scheme_list(value: &str, line: usize, col: usize) -> Result<Vec<Scheme>, ConfigError> {
    value
        .split(',')
        .map(|item| Scheme::from_str(item).map_err(|e| parse_err(line, col, e.to_string())))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn apply_key(
    cfg: &mut SweepConfig,
    staged: &mut StagedSchemes,
    section: &str,
    key: &str,
    value: &str,
    line: usize,
    key_col: usize,
    value_col: usize,
) -> Result<(), ConfigError> {
    let l = line;
    let v = value_col;
    match (section, key) {
        ("radio", "fc_hz") => cfg.radio.fc_hz = want_f64(value, l, v)?,
        ("radio", "bandwidth_hz") => cfg.radio.bandwidth_hz = want_f64(value, l, v)?,
        ("radio", "p_sbs_dbm") => cfg.radio.p_sbs_dbm = want_f64(value, l, v)?,
        ("radio", "p_user_dbm") => cfg.radio.p_user_dbm = want_f64(value, l, v)?,
        ("radio", "noise_power_dbm") => cfg.radio.noise_power_dbm = want_f64(value, l, v)?,
        ("radio", "residual_si_dbm") => cfg.radio.residual_si_dbm = want_f64(value, l, v)?,
        ("radio", "n_tx_sbs") => cfg.radio.n_tx_sbs = want_usize(value, l, v)?,
        ("radio", "n_tx_user") => cfg.radio.n_tx_user = want_usize(value, l, v)?,
        ("radio", "los_decay_m") => cfg.radio.los_decay_m = want_f64(value, l, v)?,
        ("radio", "n_nlos_paths") => cfg.radio.n_nlos_paths = want_usize(value, l, v)?,
        ("geometry", "macro_radius_m") => cfg.geometry.macro_radius_m = want_f64(value, l, v)?,
        ("geometry", "sector_angle_rad") => cfg.geometry.sector_angle_rad = want_f64(value, l, v)?,
        ("geometry", "close_zone_radius_m") => {
            cfg.geometry.close_zone_radius_m = want_f64(value, l, v)?
        }
        ("geometry", "sc_radius_m") => cfg.layout.sc_radius_m = want_f64(value, l, v)?,
        ("geometry", "n_dl_users") => cfg.layout.n_dl_users = want_usize(value, l, v)?,
        ("geometry", "n_ul_users") => cfg.layout.n_ul_users = want_usize(value, l, v)?,
        ("sweep", "densities_per_km2") => cfg.densities_per_km2 = want_f64_list(value, l, v)?,
        ("sweep", "trials") => cfg.trials = want_u64(value, l, v)?,
        ("sweep", "seed") => cfg.base_seed = want_u64(value, l, v)?,
        ("sweep", "workers") => cfg.workers = want_usize(value, l, v)?,
        ("schemes", "schemes") => staged.list = Some(want_scheme_list(value, l, v)?),
        ("schemes", "noma_alpha_weak") => staged.noma_weak = Some(want_f64(value, l, v)?),
        ("schemes", "noma_alpha_strong") => staged.noma_strong = Some(want_f64(value, l, v)?),
        ("schemes", "oma_alpha_weak") => staged.oma_weak = Some(want_f64(value, l, v)?),
        ("schemes", "oma_alpha_strong") => staged.oma_strong = Some(want_f64(value, l, v)?),
        ("schemes", "own_cell_uu_cci") => cfg.own_cell_uu_cci = want_bool(value, l, v)?,
        _ => {
            return Err(parse_err(
                line,
                key_col,
                format!("unknown key {key:?} in section [{section}]"),
            ))
        }
    }
    Ok(())
}

/// Parses a config document. Missing keys keep their defaults; the result
/// is fully validated.
pub fn parse_config(text: &str) -> Result<SweepConfig, ConfigError> {
    let mut cfg = SweepConfig::default();
    let mut staged = StagedSchemes::default();
    let mut seen: HashSet<(String, String)> = HashSet::new();
    let mut section: Option<String> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let start = line.find(|c: char| !c.is_whitespace()).unwrap();
        let start_col = start + 1;
        let content = line.trim();

        if let Some(rest) = content.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return Err(parse_err(line_no, start_col, "unterminated section header"));
            };
            let name = name.trim();
            if !SECTIONS.contains(&name) {
                return Err(parse_err(
                    line_no,
                    start_col + 1,
                    format!("unknown section [{name}]"),
                ));
            }
            section = Some(name.to_string());
            continue;
        }

        let Some(eq) = line.find('=') else {
            return Err(parse_err(line_no, start_col, "expected `key = value`"));
        };
        let key = line[..eq].trim();
        if key.is_empty() {
            return Err(parse_err(line_no, start_col, "missing key before `=`"));
        }
        let tail = &line[eq + 1..];
        let value = tail.trim();
        let value_col = match tail.find(|c: char| !c.is_whitespace()) {
            Some(off) => eq + 1 + off + 1,
            None => eq + 2,
        };
        if value.is_empty() {
            return Err(parse_err(
                line_no,
                value_col,
                format!("missing value for {key:?}"),
            ));
        }

        let Some(section_name) = section.clone() else {
            return Err(parse_err(
                line_no,
                start_col,
                format!("key {key:?} appears before any [section] header"),
            ));
        };
        if !seen.insert((section_name.clone(), key.to_string())) {
            return Err(parse_err(
                line_no,
                start_col,
                format!("duplicate key {key:?} in section [{section_name}]"),
            ));
        }
        apply_key(
            &mut cfg,
            &mut staged,
            &section_name,
            key,
            value,
            line_no,
            start_col,
            value_col,
        )?;
    }

    staged.apply(&mut cfg);
    cfg.validate()
        .map_err(|e| ConfigError::Constraint(e.to_string()))?;
    Ok(cfg)
}

fn family_alphas(cfg: &SweepConfig, pick: fn(Scheme) -> bool, fallback: Scheme) -> (f64, f64) {
    cfg.schemes
        .iter()
        .find(|s| pick(s.scheme))
        .map(|s| (s.alpha_weak, s.alpha_strong))
        .unwrap_or_else(|| {
            let d = SchemeConfig::defaults_for(fallback);
            (d.alpha_weak, d.alpha_strong)
        })
}

fn join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Renders a config in canonical section and key order. Parsing the output
/// reproduces the input config exactly.
pub fn serialize_config(cfg: &SweepConfig) -> String {
    let (noma_w, noma_s) = family_alphas(cfg, |s| s != Scheme::OmaHd, Scheme::NomaHd);
    let (oma_w, oma_s) = family_alphas(cfg, |s| s == Scheme::OmaHd, Scheme::OmaHd);

    let mut out = String::new();
    let r = &cfg.radio;
    writeln!(out, "[radio]").unwrap();
    writeln!(out, "fc_hz = {}", r.fc_hz).unwrap();
    writeln!(out, "bandwidth_hz = {}", r.bandwidth_hz).unwrap();
    writeln!(out, "p_sbs_dbm = {}", r.p_sbs_dbm).unwrap();
    writeln!(out, "p_user_dbm = {}", r.p_user_dbm).unwrap();
    writeln!(out, "noise_power_dbm = {}", r.noise_power_dbm).unwrap();
    writeln!(out, "residual_si_dbm = {}", r.residual_si_dbm).unwrap();
    writeln!(out, "n_tx_sbs = {}", r.n_tx_sbs).unwrap();
    writeln!(out, "n_tx_user = {}", r.n_tx_user).unwrap();
    writeln!(out, "los_decay_m = {}", r.los_decay_m).unwrap();
    writeln!(out, "n_nlos_paths = {}", r.n_nlos_paths).unwrap();
    writeln!(out).unwrap();
    writeln!(out, "[geometry]").unwrap();
    writeln!(out, "macro_radius_m = {}", cfg.geometry.macro_radius_m).unwrap();
    writeln!(out, "sector_angle_rad = {}", cfg.geometry.sector_angle_rad).unwrap();
    writeln!(
        out,
        "close_zone_radius_m = {}",
        cfg.geometry.close_zone_radius_m
    )
    .unwrap();
    writeln!(out, "sc_radius_m = {}", cfg.layout.sc_radius_m).unwrap();
    writeln!(out, "n_dl_users = {}", cfg.layout.n_dl_users).unwrap();
    writeln!(out, "n_ul_users = {}", cfg.layout.n_ul_users).unwrap();
    writeln!(out).unwrap();
    writeln!(out, "[sweep]").unwrap();
    writeln!(out, "densities_per_km2 = {}", join(&cfg.densities_per_km2)).unwrap();
    writeln!(out, "trials = {}", cfg.trials).unwrap();
    writeln!(out, "seed = {}", cfg.base_seed).unwrap();
    writeln!(out, "workers = {}", cfg.workers).unwrap();
    writeln!(out).unwrap();
    writeln!(out, "[schemes]").unwrap();
    writeln!(
        out,
        "schemes = {}",
        join(cfg.schemes.iter().map(|s| s.scheme))
    )
    .unwrap();
    writeln!(out, "noma_alpha_weak = {noma_w}").unwrap();
    writeln!(out, "noma_alpha_strong = {noma_s}").unwrap();
    writeln!(out, "oma_alpha_weak = {oma_w}").unwrap();
    writeln!(out, "oma_alpha_strong = {oma_s}").unwrap();
    writeln!(out, "own_cell_uu_cci = {}", cfg.own_cell_uu_cci).unwrap();
    out
}

/// Reads and parses a config file, tagging I/O failures with the path.
pub fn load_config(path: &Path) -> crate::Result<SweepConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(parse_config(&text)?)
}
