//! Flat `key = value` config files whose keys mirror long flag names.
//!
//! ```text
//! # comment
//! eta = 0.8
//! events: abg
//! ml-study = true
//! ```
//!
//! Values from the file are appended to the command line only for flags the
//! user did not pass, so explicit flags always win.

use std::ffi::OsString;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn parse(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some(idx) = line.find(['=', ':']) else {
            return Err(ConfigError(format!("line {}: expected key = value", lineno + 1)));
        };
        let key = line[..idx].trim().trim_start_matches("--").replace('_', "-");
        let value = line[idx + 1..].trim().trim_matches('"').to_owned();
        if key.is_empty() || key == "config" {
            return Err(ConfigError(format!("line {}: invalid key", lineno + 1)));
        }
        out.push((key, value));
    }
    Ok(out)
}

fn flag_present(args: &[OsString], key: &str) -> bool {
    let long = format!("--{key}");
    let with_eq = format!("--{key}=");
    args.iter().any(|a| {
        let a = a.to_string_lossy();
        a == long || a.starts_with(&with_eq)
    })
}

/// Pulls `--config <path>` out of `args` and appends the file's entries that
/// were not given on the command line. Entries with value `true`/`false` are
/// treated as switches.
pub fn merge_into_args(args: Vec<OsString>) -> Result<Vec<OsString>, ConfigError> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path = None;
    let mut iter = args.into_iter();
    while let Some(a) = iter.next() {
        let s = a.to_string_lossy().into_owned();
        if s == "--config" {
            path = Some(iter.next().ok_or_else(|| ConfigError("--config needs a path".into()))?);
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(OsString::from(p));
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.to_string_lossy())))?;
    for (key, value) in parse(&text)? {
        if flag_present(&rest, &key) {
            continue;
        }
        match value.as_str() {
            "true" => rest.push(format!("--{key}").into()),
            "false" => {}
            _ => {
                rest.push(format!("--{key}").into());
                rest.push(value.into());
            }
        }
    }
    Ok(rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_both_separators() {
        let kv = parse("# c\n eta = 0.5\nevents: abg\n\nbracket_lo=0.3\n").unwrap();
        assert_eq!(
            kv,
            [
                ("eta".into(), "0.5".into()),
                ("events".into(), "abg".into()),
                ("bracket-lo".into(), "0.3".into())
            ]
        );
        assert!(parse("novalue\n").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("run.cfg");
        std::fs::write(&p, "eta = 0.5\nd = 2\nml-study = true\nverbose = false\n").unwrap();
        let merged = merge_into_args(os(&[
            "hbtfisher",
            "fisher",
            "--config",
            p.to_str().unwrap(),
            "--eta=0.9",
        ]))
        .unwrap();
        assert_eq!(merged, os(&["hbtfisher", "fisher", "--eta=0.9", "--d", "2", "--ml-study"]));
    }

    #[test]
    fn missing_file() {
        assert!(merge_into_args(os(&["x", "--config", "/nonexistent/file"])).is_err());
        assert!(merge_into_args(os(&["x", "--config"])).is_err());
    }
}
