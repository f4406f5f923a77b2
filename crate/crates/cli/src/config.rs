//! `key = value` config files, merged into the argument list so that clap
//! validates file values exactly like flags.

use std::path::Path;

use crate::CliError;

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Invalid(format!("config line {}: expected `key = value`, got `{line}`", i + 1)));
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim().to_string();
        if key.is_empty() || value.is_empty() {
            return Err(CliError::Invalid(format!("config line {}: empty key or value", i + 1)));
        }
        if key == "config" {
            return Err(CliError::Invalid(format!("config line {}: nested config files are not supported", i + 1)));
        }
        entries.push((key, value));
    }
    Ok(entries)
}

pub fn load(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
    parse(&text)
}

fn given(argv: &[String], key: &str) -> bool {
    let flag = format!("--{key}");
    argv.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")))
}

/// Appends each config entry whose flag does not already appear in `argv`.
pub fn merge(argv: &[String], entries: &[(String, String)]) -> Vec<String> {
    let mut out = argv.to_vec();
    for (key, value) in entries {
        if !given(argv, key) {
            out.push(format!("--{key}={value}"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &[&str]) -> Vec<String> {
        s.iter().map(|a| a.to_string()).collect()
    }

    #[test]
    fn parses_comments_and_underscores() {
        let e = parse("# run\nc0 = 2\n\np_max=3 # inline\n").unwrap();
        assert_eq!(e, vec![("c0".into(), "2".into()), ("p-max".into(), "3".into())]);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(parse("c0 2").is_err());
        assert!(parse("c0 =").is_err());
        assert!(parse("config = other.cfg").is_err());
    }

    #[test]
    fn flags_override_file() {
        let entries = parse("c0 = 2\nc1 = 0.5").unwrap();
        let merged = merge(&args(&["x", "spectrum", "kepler5d", "--c0=3"]), &entries);
        assert_eq!(merged, args(&["x", "spectrum", "kepler5d", "--c0=3", "--c1=0.5"]));
        let merged = merge(&args(&["x", "--c1", "1"]), &entries);
        assert_eq!(merged, args(&["x", "--c1", "1", "--c0=2"]));
    }
}
