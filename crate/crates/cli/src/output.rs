use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::config::{Format, RunConfig};
use crate::error::CliResult;

#[derive(Serialize)]
struct Line<'a, T: Serialize> {
    config: &'a RunConfig,
    result: &'a T,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_ms: Option<f64>,
}

/// Writes one report per call, as a JSON line or as `key: value` text.
pub struct Emitter<'a> {
    format: Format,
    out: &'a mut dyn Write,
}

impl<'a> Emitter<'a> {
    pub fn new(format: Format, out: &'a mut dyn Write) -> Self {
        Self { format, out }
    }

    pub fn emit<T: Serialize>(&mut self, config: &RunConfig, result: &T, wall_ms: Option<f64>) -> CliResult<()> {
        match self.format {
            Format::Json => {
                let line = serde_json::to_string(&Line { config, result, wall_ms }).map_err(std::io::Error::from)?;
                writeln!(self.out, "{line}")?;
            }
            Format::Human => {
                let mut header = format!("[{}]", config.subcommand);
                if let Some(g) = &config.generator {
                    header.push_str(&format!(" {g}"));
                }
                if let Some(i) = &config.input {
                    header.push_str(&format!(" {i}"));
                }
                if let Some(s) = config.seed {
                    header.push_str(&format!(" seed={s}"));
                }
                writeln!(self.out, "{header}")?;
                match serde_json::to_value(result).map_err(std::io::Error::from)? {
                    Value::Object(map) => {
                        for (k, v) in map {
                            writeln!(self.out, "  {k}: {}", human(&v))?;
                        }
                    }
                    other => writeln!(self.out, "  {}", human(&other))?,
                }
                if let Some(ms) = wall_ms {
                    writeln!(self.out, "  wall_ms: {ms:.1}")?;
                }
            }
        }
        Ok(())
    }
}

fn human(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}
