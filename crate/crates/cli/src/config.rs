//! Flag defaults from a JSON file. The file maps `"global"` and subcommand names to
//! objects of `flag: value`; its entries are spliced in right after the subcommand,
//! ahead of the user's own flags, so that later command-line occurrences win.

use crate::args::SUBCOMMANDS;
use serde_json::Value;
use std::ffi::OsString;
use std::path::PathBuf;

pub const CONFIG_ENV: &str = "DIPE_CONFIG";

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    std::env::var_os(CONFIG_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

fn flag_tokens(section: &Value, what: &str) -> Result<Vec<OsString>, String> {
    let obj = section.as_object().ok_or_else(|| format!("config section {what:?} must be an object"))?;
    let mut out = Vec::new();
    for (k, v) in obj {
        let flag = format!("--{}", k.replace('_', "-"));
        match v {
            Value::Bool(true) => out.push(flag.into()),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                let joined: Vec<String> = items.iter().map(crate::output::cell).collect();
                out.push(flag.into());
                out.push(joined.join(",").into());
            }
            Value::Object(_) => return Err(format!("config value for {k:?} must be a scalar or list")),
            other => {
                out.push(flag.into());
                out.push(crate::output::cell(other).into());
            }
        }
    }
    Ok(out)
}

/// Returns the argument vector with config defaults inserted.
pub fn merge(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))?;
    let obj = doc.as_object().ok_or_else(|| format!("config {} must be a JSON object", path.display()))?;
    if let Some(k) = obj.keys().find(|k| k.as_str() != "global" && !SUBCOMMANDS.contains(&k.as_str())) {
        return Err(format!("config {}: unknown section {k:?}", path.display()));
    }
    let Some(pos) = args.iter().position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref())) else {
        return Ok(args);
    };
    let sub = args[pos].to_string_lossy().into_owned();
    let mut inserted = Vec::new();
    if let Some(g) = obj.get("global") {
        inserted.extend(flag_tokens(g, "global")?);
    }
    if let Some(s) = obj.get(&sub) {
        inserted.extend(flag_tokens(s, &sub)?);
    }
    let mut out = args[..=pos].to_vec();
    out.extend(inserted);
    out.extend_from_slice(&args[pos + 1..]);
    Ok(out)
}
