//! Merging of `--config` files into the command line.
//!
//! Each key of the JSON object becomes `--key=value` placed before the user's own flags,
//! so flags given on the command line override the file and unknown keys are rejected
//! like unknown flags. Arrays become comma-separated lists, `true` a bare switch.

use std::ffi::OsString;
use std::path::Path;

use clap::Parser;
use serde_json::Value;

use crate::args::Cli;

pub(crate) enum ParseError {
    Clap(clap::Error),
    Config(String),
}

pub(crate) fn parse(argv: Vec<OsString>) -> Result<Cli, ParseError> {
    let cli = Cli::try_parse_from(&argv).map_err(ParseError::Clap)?;
    let Some(path) = cli.config.clone() else {
        return Ok(cli);
    };
    let flags = file_flags(&path).map_err(ParseError::Config)?;
    let sub = cli.command.name();
    let pos = argv
        .iter()
        .skip(1)
        .position(|a| a == sub)
        .map(|i| i + 1)
        .ok_or_else(|| ParseError::Config(format!("cannot locate subcommand '{sub}'")))?;
    let mut merged = argv[..=pos].to_vec();
    merged.extend(flags.into_iter().map(OsString::from));
    merged.extend_from_slice(&argv[pos + 1..]);
    Cli::try_parse_from(merged)
        .map_err(|e| ParseError::Config(format!("in {}: {}", path.display(), e.render().to_string().trim_end())))
}

fn file_flags(path: &Path) -> Result<Vec<String>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| format!("config {} is not valid JSON: {e}", path.display()))?;
    let Value::Object(map) = value else {
        return Err(format!("config {} must hold a JSON object", path.display()));
    };
    let mut flags = Vec::with_capacity(map.len());
    for (key, value) in map {
        let flag = format!("--{}", key.replace('_', "-"));
        if flag == "--config" {
            return Err("config files cannot name another config file".into());
        }
        match value {
            Value::Null | Value::Bool(false) => {}
            Value::Bool(true) => flags.push(flag),
            Value::Array(items) => {
                let parts = items.iter().map(|v| scalar(&key, v)).collect::<Result<Vec<_>, _>>()?;
                flags.push(format!("{flag}={}", parts.join(",")));
            }
            other => flags.push(format!("{flag}={}", scalar(&key, &other)?)),
        }
    }
    Ok(flags)
}

fn scalar(key: &str, value: &Value) -> Result<String, String> {
    match value {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        _ => Err(format!("config key '{key}' must be a string, number, boolean or list of those")),
    }
}
