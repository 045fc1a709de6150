use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use cslab::exact::DEFAULT_BUDGET;
use cslab::valence_bond::BondRule;
use cslab::vmc::VmcSchedule;
use cslab::{LatticeSpec, Sector};

use crate::CliError;

/// Keys accepted in config files and their flag spellings.
pub const KEYS: [&str; 16] = [
    "lattice",
    "sector",
    "seed",
    "chains",
    "sweeps",
    "warmup",
    "block",
    "budget",
    "max_dx",
    "max_dy",
    "nearest_neighbor",
    "out",
    "format",
    "n2",
    "n1",
    "coverings",
];

/// Flag values layered over a `key = value` config file.
#[derive(Clone, Debug, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Settings {
    pub fn from_sources(file: Option<&Path>, flags: Vec<(&str, Option<String>)>) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::BadArgs(format!("cannot read config {}: {e}", path.display())))?;
            for (k, v) in parse_config(&text)? {
                values.insert(k, v);
            }
        }
        for (k, v) in flags {
            if let Some(v) = v {
                values.insert(k.to_string(), v);
            }
        }
        Ok(Settings { values })
    }

    pub fn resolved(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    pub fn set_default(&mut self, key: &str, value: impl ToString) {
        self.values.entry(key.to_string()).or_insert_with(|| value.to_string());
    }

    /// Copy with `key` forced to `value`.
    pub fn with(&self, key: &str, value: impl ToString) -> Settings {
        let mut s = self.clone();
        s.values.insert(key.to_string(), value.to_string());
        s
    }

    pub fn without(&self, key: &str) -> Settings {
        let mut s = self.clone();
        s.values.remove(key);
        s
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.trim()
                    .parse::<T>()
                    .map_err(|e| CliError::BadArgs(format!("bad value for {key}: {v:?} ({e})")))
            })
            .transpose()
    }

    pub fn lattices(&self) -> Result<Vec<LatticeSpec>, CliError> {
        match self.get("lattice") {
            None => Ok(Vec::new()),
            Some(v) => v
                .split(',')
                .map(|s| s.trim().parse::<LatticeSpec>().map_err(CliError::from))
                .collect(),
        }
    }

    pub fn lattice(&self) -> Result<LatticeSpec, CliError> {
        let mut l = self.lattices()?;
        match l.len() {
            0 => Err(CliError::BadArgs("--lattice N1xN2 is required".into())),
            1 => Ok(l.remove(0)),
            _ => Err(CliError::BadArgs("this command takes a single lattice".into())),
        }
    }

    pub fn sectors(&self) -> Result<Vec<Sector>, CliError> {
        match self.get("sector").unwrap_or("both").trim() {
            "both" => Ok(Sector::both().to_vec()),
            "0" => Ok(vec![Sector::Zero]),
            "1" => Ok(vec![Sector::One]),
            other => Err(CliError::BadArgs(format!("sector must be 0, 1 or both, got {other:?}"))),
        }
    }

    pub fn budget(&self) -> Result<u64, CliError> {
        Ok(self.parse("budget")?.unwrap_or(DEFAULT_BUDGET))
    }

    pub fn schedule(&self) -> Result<VmcSchedule, CliError> {
        let d = VmcSchedule::default();
        let s = VmcSchedule {
            n_chains: self.parse("chains")?.unwrap_or(d.n_chains),
            sweeps_warmup: self.parse("warmup")?.unwrap_or(d.sweeps_warmup),
            sweeps_measure: self.parse("sweeps")?.unwrap_or(d.sweeps_measure),
            block_size: self.parse("block")?.unwrap_or(d.block_size),
            seed: self.parse("seed")?.unwrap_or(d.seed),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn bond_rule(&self) -> Result<BondRule, CliError> {
        if self.parse::<bool>("nearest_neighbor")?.unwrap_or(false) {
            return Ok(BondRule::NearestNeighbor);
        }
        let d = BondRule::default();
        let (dx, dy) = match d {
            BondRule::Box { max_dx, max_dy } => (max_dx, max_dy),
            BondRule::NearestNeighbor => (1, 1),
        };
        Ok(BondRule::Box {
            max_dx: self.get("max_dx").map(|v| steps("max_dx", v)).transpose()?.unwrap_or(dx),
            max_dy: self.get("max_dy").map(|v| steps("max_dy", v)).transpose()?.unwrap_or(dy),
        })
    }

    pub fn flag(&self, key: &str) -> Result<bool, CliError> {
        Ok(self.parse::<bool>(key)?.unwrap_or(false))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, CliError> {
        Ok(self.parse(key)?.unwrap_or(default))
    }

    pub fn usize_list_or(&self, key: &str, default: &[usize]) -> Result<Vec<usize>, CliError> {
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| CliError::BadArgs(format!("bad value in {key} list: {s:?}")))
                })
                .collect(),
        }
    }

    pub fn out(&self) -> Option<PathBuf> {
        self.get("out").map(PathBuf::from)
    }

    pub fn format(&self, default: Format) -> Result<Format, CliError> {
        match self.get("format") {
            None => Ok(default),
            Some("csv") => Ok(Format::Csv),
            Some("json") => Ok(Format::Json),
            Some(other) => Err(CliError::BadArgs(format!("format must be csv or json, got {other:?}"))),
        }
    }
}

/// Bond length in lattice steps, written `2` or `2b`.
fn steps(key: &str, v: &str) -> Result<usize, CliError> {
    let t = v.trim();
    t.strip_suffix('b')
        .unwrap_or(t)
        .parse()
        .map_err(|_| CliError::BadArgs(format!("{key} must be a whole number of lattice steps like 2 or 2b, got {v:?}")))
}

/// Parses `key = value` lines; `#` starts a comment, dashes in keys are
/// read as underscores.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::BadArgs(format!("config line {}: expected key = value", n + 1)))?;
        let key = k.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::BadArgs(format!("config line {}: unknown key {key:?}", n + 1)));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}
