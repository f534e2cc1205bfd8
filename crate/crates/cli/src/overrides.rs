//! `--set key=value` applied to the parsed config document.

use serde_json::Value;
use spinfano::config::CONFIG_KEYS;

const MODE_KEYS: &[&str] = &["bottom_energy", "coupled"];

#[derive(Debug)]
pub struct OverrideError {
    pub key: String,
    pub message: String,
}

fn err(key: &str, message: impl Into<String>) -> OverrideError {
    OverrideError {
        key: key.to_string(),
        message: message.into(),
    }
}

/// Value text is read as JSON when it parses, otherwise as a bare string.
fn parse_value(text: &str) -> Value {
    serde_json::from_str(text).unwrap_or_else(|_| Value::String(text.to_string()))
}

pub fn apply(doc: &mut Value, assignment: &str) -> Result<(), OverrideError> {
    let Some((key, text)) = assignment.split_once('=') else {
        return Err(err(assignment, "expected KEY=VALUE"));
    };
    let path: Vec<&str> = key.split('.').collect();
    if path.iter().any(|p| p.is_empty()) {
        return Err(err(key, "empty path segment"));
    }
    if !CONFIG_KEYS.contains(&path[0]) {
        return Err(err(key, format!("unknown config key `{}`", path[0])));
    }
    if path[0] == "modes" && path.len() == 3 && !MODE_KEYS.contains(&path[2]) {
        return Err(err(key, format!("unknown mode key `{}`", path[2])));
    }

    let mut node = doc;
    for (depth, seg) in path.iter().enumerate() {
        let last = depth + 1 == path.len();
        node = match node {
            Value::Object(map) => {
                if last {
                    map.insert((*seg).to_string(), parse_value(text));
                    return Ok(());
                }
                map.get_mut(*seg)
                    .ok_or_else(|| err(key, format!("`{}` is not present in the config", path[..=depth].join("."))))?
            }
            Value::Array(items) => {
                let i: usize = seg
                    .parse()
                    .map_err(|_| err(key, format!("`{seg}` is not an array index")))?;
                let len = items.len();
                let slot = items
                    .get_mut(i)
                    .ok_or_else(|| err(key, format!("index {i} out of range for {len} entries")))?;
                if last {
                    *slot = parse_value(text);
                    return Ok(());
                }
                slot
            }
            _ => return Err(err(key, format!("`{}` is not an object or array", path[..depth].join(".")))),
        };
    }
    unreachable!("loop returns on the last segment")
}
