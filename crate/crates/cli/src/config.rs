//! Run configuration and table files.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};
use tiltwall_core::counting::InvariantTable;
use tiltwall_core::modular::{NlEntry, NlTable};
use tiltwall_core::{parse_rational, CurveCharge, Rational, ThreefoldData};

use crate::CliError;

/// An integer or an exact rational string such as `"-3/2"`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Exact {
    Int(i64),
    Text(String),
}

impl Exact {
    pub fn to_rational(&self, key: &str) -> Result<Rational, CliError> {
        match self {
            Exact::Int(v) => Ok(Rational::from_integer((*v).into())),
            Exact::Text(s) => parse_rational(s)
                .map_err(|_| CliError::Config(format!("{key}: cannot parse {s:?} as a rational"))),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThreefoldSection {
    pub h3: i64,
    #[serde(rename = "c2H")]
    pub c2h: i64,
    #[serde(default = "one_u32")]
    pub b2: u32,
    #[serde(default = "one_u64")]
    pub tors: u64,
    #[serde(default)]
    pub pic_rank1: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChargeSection {
    #[serde(rename = "betaH")]
    pub beta_h: Exact,
    pub m: Exact,
    pub n: u64,
    #[serde(rename = "Q", default)]
    pub q: Option<Exact>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsSection {
    pub order: Option<u64>,
    pub n_max: Option<u64>,
    pub precision: Option<usize>,
    pub denominator: Option<u64>,
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    threefold: ThreefoldSection,
    charge: Option<ChargeSection>,
    #[serde(default)]
    options: OptionsSection,
}

fn one_u32() -> u32 {
    1
}

fn one_u64() -> u64 {
    1
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub threefold: ThreefoldData,
    pub charge: Option<CurveCharge>,
    pub options: OptionsSection,
    /// Hex SHA-256 of the config file bytes.
    pub sha256: String,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&bytes)
    }

    pub fn parse(bytes: &[u8]) -> Result<Self, CliError> {
        let text = std::str::from_utf8(bytes)
            .map_err(|_| CliError::Config("config is not UTF-8".into()))?;
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string()))?;
        let t = &raw.threefold;
        let threefold = ThreefoldData::new(t.h3, t.c2h, t.b2, t.tors, t.pic_rank1)?;
        let charge = raw.charge.as_ref().map(read_charge).transpose()?;
        Ok(RunConfig {
            threefold,
            charge,
            options: raw.options,
            sha256: format!("{:x}", Sha256::digest(bytes)),
        })
    }

    pub fn charge(&self) -> Result<&CurveCharge, CliError> {
        self.charge
            .as_ref()
            .ok_or_else(|| CliError::Config("config has no [charge] section".into()))
    }
}

fn read_charge(c: &ChargeSection) -> Result<CurveCharge, CliError> {
    if c.n == 0 {
        return Err(CliError::Config("charge.n must be positive".into()));
    }
    let mut cc = CurveCharge::new(c.beta_h.to_rational("betaH")?, c.m.to_rational("m")?, c.n);
    match &c.q {
        None => {}
        Some(Exact::Text(s)) if s == "auto" => {}
        Some(q) => cc = cc.with_q(q.to_rational("Q")?),
    }
    Ok(cc)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInvariantTable {
    #[serde(default)]
    entry: Vec<RawInvariant>,
    #[serde(default)]
    threshold: Vec<RawThreshold>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInvariant {
    degree: i64,
    charge: i64,
    value: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawThreshold {
    degree: i64,
    below: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNlTable {
    #[serde(default)]
    entry: Vec<RawNl>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNl {
    d: Exact,
    gamma: u64,
    value: i64,
}

/// TOML, or JSON when the file name ends in `.json`.
fn read_table<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    } else {
        toml::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {}", path.display(), e.message())))
    }
}

pub fn load_invariant_table(path: &Path) -> Result<InvariantTable, CliError> {
    let raw: RawInvariantTable = read_table(path)?;
    let mut t = InvariantTable::new();
    for th in &raw.threshold {
        t.set_threshold(th.degree, th.below)?;
    }
    for e in &raw.entry {
        t.insert(e.degree, e.charge, e.value.into())?;
    }
    Ok(t)
}

pub fn load_nl_table(path: &Path) -> Result<NlTable, CliError> {
    let raw: RawNlTable = read_table(path)?;
    let entries = raw
        .entry
        .iter()
        .map(|e| {
            Ok(NlEntry {
                d: e.d.to_rational("d")?,
                gamma: e.gamma,
                value: e.value,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(NlTable::from_entries(entries))
}
