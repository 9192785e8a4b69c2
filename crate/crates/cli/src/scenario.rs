//! Sectioned `key = value` scenario files.
//!
//! ```text
//! [materials]
//! halfspace = drude
//! halfspace_omega_p_eV = 9.0
//! halfspace_gamma_eV = 0.035
//! gap = vacuum
//!
//! [geometry]
//! d_um = 1.0
//!
//! [thermal]
//! T_K = 300
//! ```
//!
//! Every numeric key names its unit. Unknown sections and keys are errors.

use std::collections::BTreeMap;
use std::str::FromStr;

use lifshitz_core::dielectric::Oscillator;
use lifshitz_core::resonance::PolarizabilityMode;
use lifshitz_core::{DielectricModel, PolarizabilityModel, Sign, UnitSystem, CONSTANTS};
use serde::Serialize;
use thiserror::Error;

pub const SECTIONS: [&str; 5] = ["materials", "geometry", "thermal", "sweep", "output"];

#[derive(Debug, Error, PartialEq)]
pub enum ScenarioError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown section [{section}]")]
    UnknownSection { line: usize, section: String },
    #[error("line {line}: unknown key '{key}' in [{section}]")]
    UnknownKey { line: usize, section: String, key: String },
    #[error("line {line}: duplicate key '{key}'")]
    Duplicate { line: usize, key: String },
    #[error("line {line}: bad value for '{key}': {msg}")]
    Value { line: usize, key: String, msg: String },
    #[error("missing {what}")]
    Missing { what: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub value: String,
    pub line: usize,
}

/// Raw parse: section name → key → entry.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScenarioFile {
    pub sections: BTreeMap<String, BTreeMap<String, Entry>>,
}

/// Units per metre; dividing by these exact integers keeps `10 um` equal to `1e-5`.
const LENGTH_UNITS: [(&str, f64); 5] = [("m", 1.0), ("mm", 1e3), ("um", 1e6), ("nm", 1e9), ("fm", 1e15)];

fn per_metre(suffix: &str) -> Option<f64> {
    LENGTH_UNITS.iter().find(|(s, _)| *s == suffix).map(|(_, f)| *f)
}

fn material_key_known(key: &str) -> bool {
    const FIXED: [&str; 6] = ["atom_alpha0_m3", "atom_omega0_eV", "atom_mode", "atom_sign", "screening", "kappa_pl_per_m"];
    if FIXED.contains(&key) {
        return true;
    }
    for side in ["halfspace", "gap"] {
        if key == side {
            return true;
        }
        let Some(rest) = key.strip_prefix(side).and_then(|r| r.strip_prefix('_')) else {
            continue;
        };
        if ["omega_p_eV", "gamma_eV", "eps_rel"].contains(&rest) {
            return true;
        }
        if let Some(osc) = rest.strip_prefix("osc") {
            if let Some((idx, field)) = osc.split_once('_') {
                return idx.parse::<usize>().is_ok() && (field == "strength_rel" || field == "omega0_eV");
            }
        }
    }
    false
}

fn key_known(section: &str, key: &str) -> bool {
    match section {
        "materials" => material_key_known(key),
        "geometry" => key.strip_prefix("d_").and_then(per_metre).is_some(),
        "thermal" => key == "T_K",
        "sweep" => {
            ["variable", "points_count", "spacing"].contains(&key)
                || ["start_", "stop_"].iter().any(|p| {
                    key.strip_prefix(p)
                        .is_some_and(|u| u == "K" || per_metre(u).is_some())
                })
        }
        "output" => ["tol_rel", "n_cap_count", "units"].contains(&key),
        _ => false,
    }
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let mut file = ScenarioFile::default();
        let mut current: Option<String> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| ScenarioError::Syntax {
                    line,
                    msg: format!("unterminated section header '{content}'"),
                })?;
                let name = name.trim();
                if !SECTIONS.contains(&name) {
                    return Err(ScenarioError::UnknownSection {
                        line,
                        section: name.to_string(),
                    });
                }
                file.sections.entry(name.to_string()).or_default();
                current = Some(name.to_string());
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ScenarioError::Syntax {
                line,
                msg: format!("expected 'key = value', got '{content}'"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            let section = current.as_ref().ok_or_else(|| ScenarioError::Syntax {
                line,
                msg: format!("key '{key}' outside any section"),
            })?;
            if !key_known(section, key) {
                return Err(ScenarioError::UnknownKey {
                    line,
                    section: section.clone(),
                    key: key.to_string(),
                });
            }
            if value.is_empty() {
                return Err(ScenarioError::Value {
                    line,
                    key: key.to_string(),
                    msg: "empty value".into(),
                });
            }
            let table = file.sections.get_mut(section).expect("section registered on header");
            if table.contains_key(key) {
                return Err(ScenarioError::Duplicate {
                    line,
                    key: key.to_string(),
                });
            }
            table.insert(
                key.to_string(),
                Entry {
                    value: value.to_string(),
                    line,
                },
            );
        }
        Ok(file)
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&Entry> {
        self.sections.get(section)?.get(key)
    }

    fn keys_with_prefix<'a>(&'a self, section: &str, prefix: &'a str) -> impl Iterator<Item = (&'a str, &'a Entry)> {
        self.sections
            .get(section)
            .into_iter()
            .flat_map(|t| t.iter())
            .filter(move |(k, _)| k.starts_with(prefix))
            .map(|(k, e)| (k.as_str(), e))
    }
}

fn parse_value<T: FromStr>(key: &str, entry: &Entry) -> Result<T, ScenarioError>
where
    T::Err: std::fmt::Display,
{
    entry.value.parse::<T>().map_err(|e| ScenarioError::Value {
        line: entry.line,
        key: key.to_string(),
        msg: e.to_string(),
    })
}

fn value_error(key: &str, entry: &Entry, msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Value {
        line: entry.line,
        key: key.to_string(),
        msg: msg.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    D,
    T,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::D => "d",
            SweepVariable::T => "T",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sweep {
    pub variable: SweepVariable,
    /// SI
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i + 1 == self.points {
                    return self.stop;
                }
                let f = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + (self.stop - self.start) * f,
                    Spacing::Log => (self.start.ln() + (self.stop.ln() - self.start.ln()) * f).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Screening {
    None,
    /// 1/m
    Given(f64),
    PairDensity,
}

/// Interpreted scenario, SI throughout.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub halfspace: Option<DielectricModel>,
    pub gap: DielectricModel,
    pub d: Option<f64>,
    pub temperature: Option<f64>,
    pub sweep: Option<Sweep>,
    pub atom: Option<PolarizabilityModel>,
    pub atom_sign: Sign,
    pub screening: Screening,
    pub tol: Option<f64>,
    pub n_cap: Option<usize>,
    pub units: Option<UnitSystem>,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        Self::from_file(&ScenarioFile::parse(text)?)
    }

    pub fn from_file(file: &ScenarioFile) -> Result<Self, ScenarioError> {
        let halfspace = material(file, "halfspace")?;
        let gap = material(file, "gap")?.unwrap_or(DielectricModel::Vacuum);

        let mut d = None;
        for (key, entry) in file.keys_with_prefix("geometry", "d_") {
            if d.is_some() {
                return Err(value_error(key, entry, "separation given more than once"));
            }
            let per = per_metre(&key[2..]).expect("validated at parse");
            d = Some(positive(key, entry)? / per);
        }
        let temperature = match file.get("thermal", "T_K") {
            Some(e) => Some(non_negative("T_K", e)?),
            None => None,
        };

        let atom = atom(file)?;
        let atom_sign = match file.get("materials", "atom_sign") {
            Some(e) => parse_value::<Sign>("atom_sign", e)?,
            None => Sign::Plus,
        };
        let kappa = match file.get("materials", "kappa_pl_per_m") {
            Some(e) => Some(non_negative("kappa_pl_per_m", e)?),
            None => None,
        };
        let screening = match (file.get("materials", "screening"), kappa) {
            (None, None) => Screening::None,
            (None, Some(k)) => Screening::Given(k),
            (Some(e), k) => match (e.value.as_str(), k) {
                ("none", None) => Screening::None,
                ("given", Some(k)) => Screening::Given(k),
                ("given", None) => {
                    return Err(value_error("screening", e, "'given' needs kappa_pl_per_m"));
                }
                ("pair_density", None) => Screening::PairDensity,
                (_, Some(_)) => {
                    return Err(value_error("screening", e, "kappa_pl_per_m only goes with 'given'"));
                }
                (other, None) => {
                    return Err(value_error(
                        "screening",
                        e,
                        format!("expected none|given|pair_density, got '{other}'"),
                    ));
                }
            },
        };

        let sweep = sweep(file)?;
        let tol = match file.get("output", "tol_rel") {
            Some(e) => Some(positive("tol_rel", e)?),
            None => None,
        };
        let n_cap = match file.get("output", "n_cap_count") {
            Some(e) => Some(parse_value::<usize>("n_cap_count", e)?),
            None => None,
        };
        let units = match file.get("output", "units") {
            Some(e) => Some(parse_value::<UnitSystem>("units", e)?),
            None => None,
        };
        Ok(Self {
            halfspace,
            gap,
            d,
            temperature,
            sweep,
            atom,
            atom_sign,
            screening,
            tol,
            n_cap,
            units,
        })
    }
}

fn number(key: &str, entry: &Entry) -> Result<f64, ScenarioError> {
    let v = parse_value::<f64>(key, entry)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(value_error(key, entry, "must be finite"))
    }
}

fn positive(key: &str, entry: &Entry) -> Result<f64, ScenarioError> {
    let v = number(key, entry)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(value_error(key, entry, format!("must be > 0, got {v}")))
    }
}

fn non_negative(key: &str, entry: &Entry) -> Result<f64, ScenarioError> {
    let v = number(key, entry)?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(value_error(key, entry, format!("must be >= 0, got {v}")))
    }
}

fn material(file: &ScenarioFile, side: &str) -> Result<Option<DielectricModel>, ScenarioError> {
    let Some(name) = file.get("materials", side) else {
        if let Some((key, entry)) = file.keys_with_prefix("materials", &format!("{side}_")).next() {
            return Err(value_error(key, entry, format!("parameter given without '{side} = <model>'")));
        }
        return Ok(None);
    };
    let key = |suffix: &str| format!("{side}_{suffix}");
    let required = |suffix: &str| -> Result<f64, ScenarioError> {
        let k = key(suffix);
        let entry = file.get("materials", &k).ok_or_else(|| ScenarioError::Missing {
            what: format!("'{k}' for {side} model '{}' (line {})", name.value, name.line),
        })?;
        positive(&k, entry)
    };
    let allowed: &[&str] = match name.value.as_str() {
        "vacuum" | "ideal" => &[],
        "constant" => &["eps_rel"],
        "plasma" => &["omega_p_eV"],
        "drude" => &["omega_p_eV", "gamma_eV"],
        "oscillator" => &[],
        other => {
            return Err(value_error(
                side,
                name,
                format!("unknown model '{other}' (drude|plasma|ideal|vacuum|constant|oscillator)"),
            ));
        }
    };
    for (k, entry) in file.keys_with_prefix("materials", &format!("{side}_")) {
        let suffix = &k[side.len() + 1..];
        let is_osc = suffix.starts_with("osc");
        if !(allowed.contains(&suffix) || (is_osc && name.value == "oscillator")) {
            return Err(value_error(k, entry, format!("not a parameter of model '{}'", name.value)));
        }
    }
    let ev = |v: f64| CONSTANTS.ev_to_rad_per_s(v);
    let model = match name.value.as_str() {
        "vacuum" => Ok(DielectricModel::Vacuum),
        "ideal" => Ok(DielectricModel::IdealMetal),
        "constant" => DielectricModel::constant(required("eps_rel")?),
        "plasma" => DielectricModel::plasma(ev(required("omega_p_eV")?)),
        "drude" => {
            let k = key("gamma_eV");
            let gamma = match file.get("materials", &k) {
                Some(e) => non_negative(&k, e)?,
                None => required("gamma_eV")?,
            };
            DielectricModel::drude(ev(required("omega_p_eV")?), ev(gamma))
        }
        _ => {
            let mut terms: BTreeMap<usize, (Option<f64>, Option<f64>)> = BTreeMap::new();
            for (k, entry) in file.keys_with_prefix("materials", &format!("{side}_osc")) {
                let rest = &k[side.len() + 4..];
                let (idx, field) = rest.split_once('_').expect("validated at parse");
                let slot = terms.entry(idx.parse().expect("validated at parse")).or_default();
                let v = positive(k, entry)?;
                if field == "strength_rel" {
                    slot.0 = Some(v);
                } else {
                    slot.1 = Some(ev(v));
                }
            }
            if terms.is_empty() {
                return Err(value_error(side, name, "oscillator model needs at least one osc<i>_* pair"));
            }
            let mut list = Vec::with_capacity(terms.len());
            for (idx, (s, w)) in terms {
                match (s, w) {
                    (Some(strength), Some(omega0)) => list.push(Oscillator { strength, omega0 }),
                    _ => {
                        return Err(ScenarioError::Missing {
                            what: format!("{side}_osc{idx}_strength_rel and {side}_osc{idx}_omega0_eV must both be set"),
                        })
                    }
                }
            }
            DielectricModel::oscillator(list)
        }
    };
    model.map(Some).map_err(|e| value_error(side, name, e.to_string()))
}

fn atom(file: &ScenarioFile) -> Result<Option<PolarizabilityModel>, ScenarioError> {
    let Some(alpha_entry) = file.get("materials", "atom_alpha0_m3") else {
        for k in ["atom_omega0_eV", "atom_mode"] {
            if let Some(e) = file.get("materials", k) {
                return Err(value_error(k, e, "needs atom_alpha0_m3"));
            }
        }
        return Ok(None);
    };
    let alpha0 = positive("atom_alpha0_m3", alpha_entry)?;
    let omega0 = file.get("materials", "atom_omega0_eV");
    let mode = match (file.get("materials", "atom_mode"), omega0) {
        (Some(e), _) => parse_value::<PolarizabilityMode>("atom_mode", e)?,
        (None, Some(_)) => PolarizabilityMode::London,
        (None, None) => PolarizabilityMode::StaticOnly,
    };
    let model = match (mode, omega0) {
        (PolarizabilityMode::StaticOnly, None) => PolarizabilityModel::static_only(alpha0),
        (PolarizabilityMode::StaticOnly, Some(e)) => {
            return Err(value_error("atom_omega0_eV", e, "not used by atom_mode = static"));
        }
        (PolarizabilityMode::London, Some(e)) => {
            PolarizabilityModel::london(alpha0, CONSTANTS.ev_to_rad_per_s(positive("atom_omega0_eV", e)?))
        }
        (PolarizabilityMode::London, None) => {
            return Err(ScenarioError::Missing {
                what: "atom_omega0_eV for atom_mode = london".into(),
            });
        }
    };
    model.map(Some).map_err(|e| value_error("atom_alpha0_m3", alpha_entry, e.to_string()))
}

fn sweep(file: &ScenarioFile) -> Result<Option<Sweep>, ScenarioError> {
    let Some(table) = file.sections.get("sweep") else {
        return Ok(None);
    };
    if table.is_empty() {
        return Ok(None);
    }
    let var_entry = file.get("sweep", "variable").ok_or_else(|| ScenarioError::Missing {
        what: "'variable' in [sweep]".into(),
    })?;
    let variable = match var_entry.value.as_str() {
        "d" => SweepVariable::D,
        "T" => SweepVariable::T,
        other => return Err(value_error("variable", var_entry, format!("expected d or T, got '{other}'"))),
    };
    let bound = |prefix: &str| -> Result<f64, ScenarioError> {
        let mut found = None;
        for (k, entry) in file.keys_with_prefix("sweep", prefix) {
            if found.is_some() {
                return Err(value_error(k, entry, format!("'{prefix}*' given more than once")));
            }
            let unit = &k[prefix.len()..];
            let per = match (variable, unit) {
                (SweepVariable::T, "K") => 1.0,
                (SweepVariable::D, u) if u != "K" => per_metre(u).expect("validated at parse"),
                _ => return Err(value_error(k, entry, format!("unit does not match variable {}", variable.name()))),
            };
            found = Some(positive(k, entry)? / per);
        }
        found.ok_or_else(|| ScenarioError::Missing {
            what: format!("'{prefix}<unit>' in [sweep]"),
        })
    };
    let start = bound("start_")?;
    let stop = bound("stop_")?;
    let points_entry = file.get("sweep", "points_count").ok_or_else(|| ScenarioError::Missing {
        what: "'points_count' in [sweep]".into(),
    })?;
    let points = parse_value::<usize>("points_count", points_entry)?;
    if points == 0 {
        return Err(value_error("points_count", points_entry, "must be >= 1"));
    }
    let spacing = match file.get("sweep", "spacing") {
        None => Spacing::Linear,
        Some(e) => match e.value.as_str() {
            "linear" | "lin" => Spacing::Linear,
            "log" => Spacing::Log,
            other => return Err(value_error("spacing", e, format!("expected linear or log, got '{other}'"))),
        },
    };
    Ok(Some(Sweep {
        variable,
        start,
        stop,
        points,
        spacing,
    }))
}
