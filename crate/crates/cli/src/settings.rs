//! Flat `key = value` settings shared by config files and flags.
//!
//! Both sources are reduced to the same [`Settings`] map before anything is
//! interpreted, so a config file and the equivalent flags always produce the
//! same run configuration.

use std::collections::BTreeMap;
use std::path::Path;

use crate::exit::CliError;

/// Keys that may appear more than once; every other key keeps its last value.
const REPEATABLE: &[&str] = &["axis"];

/// Either coupling form replaces both forms from a lower-priority source.
const COUPLING_KEYS: &[&str] = &["j", "gamma", "jx", "jy"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub value: String,
    /// Where the value came from, for error messages (`--jz`, `run.conf:3`).
    pub origin: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Settings {
    entries: BTreeMap<String, Vec<Entry>>,
}

/// `eps-zero`, `EPS_ZERO` and `eps_zero` are the same key.
pub fn normalize_key(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

impl Settings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: &str, value: impl Into<String>, origin: impl Into<String>) {
        let key = normalize_key(key);
        let entry = Entry {
            value: value.into(),
            origin: origin.into(),
        };
        let slot = self.entries.entry(key.clone()).or_default();
        if !REPEATABLE.contains(&key.as_str()) {
            slot.clear();
        }
        slot.push(entry);
    }

    /// Parses config text. Blank lines and `#` comments are skipped; a
    /// trailing `# ...` after a value is a comment too.
    pub fn parse(text: &str, source: &str) -> Result<Self, CliError> {
        let mut s = Settings::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let origin = format!("{source}:{}", i + 1);
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("{origin}: expected key = value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || value.is_empty() {
                return Err(CliError::usage(format!("{origin}: empty key or value in {line:?}")));
            }
            s.push(key, value, origin);
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// `self` with every key present in `over` replaced by `over`'s values.
    pub fn overlay(mut self, over: Settings) -> Self {
        if COUPLING_KEYS.iter().any(|k| over.entries.contains_key(*k)) {
            for k in COUPLING_KEYS {
                self.entries.remove(*k);
            }
        }
        for (k, v) in over.entries {
            self.entries.insert(k, v);
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key).and_then(|v| v.last())
    }

    pub fn get_all(&self, key: &str) -> &[Entry] {
        self.entries.get(key).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Rejects keys the command does not understand.
    pub fn check_keys(&self, allowed: &[&[&str]], command: &str) -> Result<(), CliError> {
        for (k, entries) in &self.entries {
            if !allowed.iter().any(|group| group.contains(&k.as_str())) {
                let origin = &entries[0].origin;
                return Err(CliError::usage(format!(
                    "{origin}: `{k}` is not a setting of `{command}`"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_repeats() {
        let s = Settings::parse(
            "# header\n n = 3\njz=0.5 # trailing\n\naxis = B:0:1:3\naxis = T:0.1:1:4\nn = 2\n",
            "f",
        )
        .unwrap();
        assert_eq!(s.get("n").unwrap().value, "2");
        assert_eq!(s.get("n").unwrap().origin, "f:7");
        assert_eq!(s.get("jz").unwrap().value, "0.5");
        assert_eq!(s.get_all("axis").len(), 2);
    }

    #[test]
    fn keys_are_normalized() {
        let s = Settings::parse("EPS-ZERO = 1e-5\n", "f").unwrap();
        assert!(s.contains("eps_zero"));
    }

    #[test]
    fn malformed_lines_rejected() {
        assert!(Settings::parse("n 3\n", "f").is_err());
        assert!(Settings::parse("n =\n", "f").is_err());
        assert!(Settings::parse("= 3\n", "f").is_err());
    }

    #[test]
    fn overlay_replaces_whole_coupling_group() {
        let file = Settings::parse("jx = 1.3\njy = 0.7\njz = 0.2\naxis = B:0:1:3\n", "f").unwrap();
        let mut flags = Settings::new();
        flags.push("j", "1", "--j");
        flags.push("gamma", "0.3", "--gamma");
        flags.push("axis", "T:0.1:1:3", "--axis");
        let s = file.overlay(flags);
        assert!(!s.contains("jx") && !s.contains("jy"));
        assert_eq!(s.get("jz").unwrap().value, "0.2");
        assert_eq!(s.get_all("axis").len(), 1);
        assert_eq!(s.get("axis").unwrap().value, "T:0.1:1:3");
    }

    #[test]
    fn unknown_keys_name_their_origin() {
        let s = Settings::parse("n = 2\nbogus = 1\n", "run.conf").unwrap();
        let err = s.check_keys(&[&["n"]], "sweep").unwrap_err();
        assert!(err.to_string().contains("run.conf:2"), "{err}");
    }
}
