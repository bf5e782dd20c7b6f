use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use hbisect_core::{Hypergraph, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Retries granted to the regular generator.
pub const DEFAULT_MAX_RETRIES: usize = 1000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Human,
    /// One JSON object per line.
    Json,
}

/// Random instance description, e.g. `regular:n=300,r=3,d=16,seed=7` or
/// `binomial:n=40,r=3,p=0.05,seed=1`.
#[derive(Clone, Debug, PartialEq)]
pub enum GenSpec {
    Regular { n: usize, r: usize, d: usize, seed: u64 },
    Binomial { n: usize, r: usize, p: f64, seed: u64 },
}

impl GenSpec {
    pub fn generate(&self) -> Result<Hypergraph> {
        match *self {
            GenSpec::Regular { n, r, d, seed } => Hypergraph::random_regular(n, r, d, seed, DEFAULT_MAX_RETRIES),
            GenSpec::Binomial { n, r, p, seed } => Hypergraph::random_binomial(n, r, p, seed),
        }
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenSpec::Regular { n, r, d, seed } => write!(f, "regular:n={n},r={r},d={d},seed={seed}"),
            GenSpec::Binomial { n, r, p, seed } => write!(f, "binomial:n={n},r={r},p={p},seed={seed}"),
        }
    }
}

impl FromStr for GenSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (model, rest) = s
            .split_once(':')
            .ok_or_else(|| format!("generator spec {s:?} must look like model:key=value,..."))?;
        let mut kv = BTreeMap::new();
        for item in rest.split(',').filter(|t| !t.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, found {item:?}"))?;
            kv.insert(k.trim(), v.trim());
        }
        fn take<T: FromStr>(kv: &mut BTreeMap<&str, &str>, key: &str) -> std::result::Result<T, String> {
            let v = kv.remove(key).ok_or_else(|| format!("missing {key}="))?;
            v.parse().map_err(|_| format!("bad value for {key}: {v:?}"))
        }
        let n = take(&mut kv, "n")?;
        let r = take(&mut kv, "r")?;
        let seed = if kv.contains_key("seed") { take(&mut kv, "seed")? } else { 0 };
        let spec = match model {
            "regular" => GenSpec::Regular {
                n,
                r,
                d: take(&mut kv, "d")?,
                seed,
            },
            "binomial" => GenSpec::Binomial {
                n,
                r,
                p: take(&mut kv, "p")?,
                seed,
            },
            other => return Err(format!("unknown model {other:?} (expected regular or binomial)")),
        };
        if let Some(k) = kv.keys().next() {
            return Err(format!("unknown key {k:?} for {model}"));
        }
        Ok(spec)
    }
}

/// Provenance attached to every report line.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub flags: BTreeMap<String, String>,
    pub format: Format,
    pub version: &'static str,
}

impl RunConfig {
    pub fn new(subcommand: &str, format: Format) -> Self {
        Self {
            subcommand: subcommand.into(),
            format,
            version: VERSION,
            ..Self::default()
        }
    }

    pub fn flag(mut self, key: &str, value: impl ToString) -> Self {
        self.flags.insert(key.into(), value.to_string());
        self
    }
}
