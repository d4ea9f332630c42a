//! Flat `key = value` parameter files.
//!
//! Either the direct block (frequencies in GHz, anharmonicities and
//! couplings in MHz) or the capacitance block (fF, nH, GHz) must be given in
//! full. Blank lines and `#` comments are ignored.

use std::collections::BTreeMap;
use std::path::Path;

use crate::circuit::{couplings_from_network, CapacitanceNetwork, CircuitParams, CouplingModel};
use crate::error::{Error, Result};

const DIRECT_KEYS: [&str; 12] = [
    "omega_a_ghz",
    "omega_b_ghz",
    "omega_x_max_ghz",
    "omega_y_max_ghz",
    "alpha_x_mhz",
    "alpha_y_mhz",
    "g_ax_mhz",
    "g_ay_mhz",
    "g_bx_mhz",
    "g_by_mhz",
    "g_xy_mhz",
    "g_ab_mhz",
];

const NETWORK_KEYS: [&str; 14] = [
    "C_a_fF", "C_b_fF", "C_x_fF", "C_y_fF", "C_ab_fF", "C_xy_fF", "C_ax_fF", "C_ay_fF", "C_bx_fF",
    "C_by_fF", "L_a_nH", "L_b_nH", "EJ_x_ghz", "EJ_y_ghz",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub params: CircuitParams,
    pub network: Option<CapacitanceNetwork>,
    pub warnings: Vec<String>,
}

impl Config {
    pub fn reference() -> Self {
        Config {
            params: CircuitParams::reference(),
            network: None,
            warnings: Vec::new(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
            line: 0,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        parse_config(&text)
    }
}

pub fn parse_config(text: &str) -> Result<Config> {
    let mut values: BTreeMap<&str, (f64, usize)> = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Config {
            line: line_no,
            message,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, got {line:?}")))?;
        let key = key.trim();
        let known = DIRECT_KEYS
            .iter()
            .chain(NETWORK_KEYS.iter())
            .find(|k| **k == key);
        let key = *known.ok_or_else(|| err(format!("unknown key {key:?}")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| err(format!("{key}: {:?} is not a number", value.trim())))?;
        if !value.is_finite() {
            return Err(err(format!("{key}: value must be finite")));
        }
        if let Some((_, first)) = values.insert(key, (value, line_no)) {
            return Err(err(format!("{key} already set on line {first}")));
        }
    }

    let direct = DIRECT_KEYS
        .iter()
        .filter(|k| values.contains_key(*k))
        .count();
    let network = NETWORK_KEYS
        .iter()
        .filter(|k| values.contains_key(*k))
        .count();
    let last_line = values.values().map(|(_, l)| *l).max().unwrap_or(0);
    let missing = |keys: &[&str]| -> Vec<String> {
        keys.iter()
            .filter(|k| !values.contains_key(*k))
            .map(|k| k.to_string())
            .collect()
    };
    let get = |k: &str| values[k].0;

    match (direct, network) {
        (0, 0) => Err(Error::Config {
            line: last_line,
            message: "no parameters given".into(),
        }),
        (d, n) if d > 0 && n > 0 => Err(Error::Config {
            line: last_line,
            message: "direct parameters and capacitance network keys cannot be mixed".into(),
        }),
        (d, 0) if d < DIRECT_KEYS.len() => Err(Error::Config {
            line: last_line,
            message: format!("missing keys: {}", missing(&DIRECT_KEYS).join(", ")),
        }),
        (0, n) if n < NETWORK_KEYS.len() => Err(Error::Config {
            line: last_line,
            message: format!("missing keys: {}", missing(&NETWORK_KEYS).join(", ")),
        }),
        (_, 0) => {
            let params = CircuitParams {
                omega_a: get("omega_a_ghz"),
                omega_b: get("omega_b_ghz"),
                omega_x_max: get("omega_x_max_ghz"),
                omega_y_max: get("omega_y_max_ghz"),
                alpha_x: get("alpha_x_mhz") * 1e-3,
                alpha_y: get("alpha_y_mhz") * 1e-3,
                g_ax: get("g_ax_mhz") * 1e-3,
                g_ay: get("g_ay_mhz") * 1e-3,
                g_bx: get("g_bx_mhz") * 1e-3,
                g_by: get("g_by_mhz") * 1e-3,
                g_xy: get("g_xy_mhz") * 1e-3,
                g_ab: get("g_ab_mhz") * 1e-3,
                coupling_model: CouplingModel::Fixed,
            };
            params.validate().map_err(|e| Error::Config {
                line: last_line,
                message: e.to_string(),
            })?;
            Ok(Config {
                params,
                network: None,
                warnings: params.warnings(),
            })
        }
        _ => {
            let ff = |k: &str| get(k) * 1e-15;
            let net = CapacitanceNetwork {
                c_a: ff("C_a_fF"),
                c_b: ff("C_b_fF"),
                c_x: ff("C_x_fF"),
                c_y: ff("C_y_fF"),
                c_ab: ff("C_ab_fF"),
                c_xy: ff("C_xy_fF"),
                c_ax: ff("C_ax_fF"),
                c_ay: ff("C_ay_fF"),
                c_bx: ff("C_bx_fF"),
                c_by: ff("C_by_fF"),
                l_a: get("L_a_nH") * 1e-9,
                l_b: get("L_b_nH") * 1e-9,
                ej_x: get("EJ_x_ghz"),
                ej_y: get("EJ_y_ghz"),
            };
            let derived = couplings_from_network(&net).map_err(|e| Error::Config {
                line: last_line,
                message: e.to_string(),
            })?;
            derived.params.validate().map_err(|e| Error::Config {
                line: last_line,
                message: e.to_string(),
            })?;
            Ok(Config {
                params: derived.params,
                network: Some(net),
                warnings: derived.warnings,
            })
        }
    }
}

/// The reference parameter set written in the config syntax.
pub fn reference_config_text() -> String {
    let p = CircuitParams::reference();
    let rows = [
        ("omega_a_ghz", p.omega_a),
        ("omega_b_ghz", p.omega_b),
        ("omega_x_max_ghz", p.omega_x_max),
        ("omega_y_max_ghz", p.omega_y_max),
        ("alpha_x_mhz", p.alpha_x * 1e3),
        ("alpha_y_mhz", p.alpha_y * 1e3),
        ("g_ax_mhz", p.g_ax * 1e3),
        ("g_ay_mhz", p.g_ay * 1e3),
        ("g_bx_mhz", p.g_bx * 1e3),
        ("g_by_mhz", p.g_by * 1e3),
        ("g_xy_mhz", p.g_xy * 1e3),
        ("g_ab_mhz", p.g_ab * 1e3),
    ];
    rows.iter()
        .map(|(k, v)| format!("{k} = {}\n", crate::analysis::csv::format_float(*v)))
        .collect()
}
