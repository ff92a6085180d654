//! `key = value` config files, merged under the command-line flags.

use std::collections::BTreeMap;

use crate::error::{CliError, CliResult};

/// Parses a config file. Blank lines and lines starting with `#` are skipped.
pub fn parse(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected `key = value`, got `{line}`", i + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key or value", i + 1)));
        }
        if out.insert(key.to_string(), value.to_string()).is_some() {
            return Err(CliError::Usage(format!("config line {}: duplicate key `{key}`", i + 1)));
        }
    }
    Ok(out)
}

/// Removes `--config <path>` / `--config=<path>` from `args`, returning the path.
pub fn take_config_path(args: &mut Vec<String>) -> CliResult<Option<String>> {
    let mut path = None;
    let mut i = 1;
    while i < args.len() {
        if args[i] == "--config" {
            if i + 1 >= args.len() {
                return Err(CliError::Usage("--config needs a file path".into()));
            }
            path = Some(args.remove(i + 1));
            args.remove(i);
        } else if let Some(p) = args[i].strip_prefix("--config=") {
            path = Some(p.to_string());
            args.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(path)
}

/// Inserts config entries as `--key=value` right after the subcommand name, so that
/// later flags on the command line override them. `known` lists the subcommand's flags.
pub fn merge(args: &mut Vec<String>, entries: &BTreeMap<String, String>, known: &[String]) -> CliResult<()> {
    for key in entries.keys() {
        if !known.iter().any(|k| k == key) {
            return Err(CliError::Usage(format!("unknown config key `{key}`")));
        }
    }
    let at = args
        .iter()
        .skip(1)
        .position(|a| !a.starts_with('-'))
        .map(|p| p + 2)
        .ok_or_else(|| CliError::Usage("missing subcommand".into()))?;
    let tokens: Vec<String> = entries.iter().map(|(k, v)| format!("--{k}={v}")).collect();
    args.splice(at..at, tokens);
    Ok(())
}
