//! Plain `key = value` configuration files.
//!
//! A config file can supply any flag; values given on the command line
//! win. Keys are flag names with dashes or underscores interchangeable;
//! blank lines and `#` comments are ignored.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};

#[derive(Debug, Default, Clone)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!(
                    "config {}:{}: expected `key = value`, got `{raw}`",
                    path.display(),
                    lineno + 1
                );
            };
            entries.insert(normalize(key.trim()), value.trim().to_string());
        }
        Ok(Config { entries })
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(&normalize(key)).map(String::as_str)
    }

    /// CLI value if present, else the config value parsed as f64.
    pub fn f64(&self, key: &str, cli: Option<f64>) -> Result<Option<f64>> {
        if cli.is_some() {
            return Ok(cli);
        }
        match self.get(key) {
            None => Ok(None),
            Some(raw) => Ok(Some(raw.parse::<f64>().with_context(|| {
                format!("config key {key}: cannot parse `{raw}` as a number")
            })?)),
        }
    }

    pub fn usize(&self, key: &str, cli: Option<usize>) -> Result<Option<usize>> {
        if cli.is_some() {
            return Ok(cli);
        }
        match self.get(key) {
            None => Ok(None),
            Some(raw) => Ok(Some(raw.parse::<usize>().with_context(|| {
                format!("config key {key}: cannot parse `{raw}` as an integer")
            })?)),
        }
    }

    pub fn string(&self, key: &str, cli: Option<String>) -> Option<String> {
        cli.or_else(|| self.get(key).map(str::to_string))
    }

    /// CLI flag presence wins; otherwise accept true/false/1/0/yes/no.
    pub fn flag(&self, key: &str, cli: bool) -> Result<bool> {
        if cli {
            return Ok(true);
        }
        match self.get(key) {
            None => Ok(false),
            Some(raw) => match raw.to_ascii_lowercase().as_str() {
                "true" | "1" | "yes" | "on" => Ok(true),
                "false" | "0" | "no" | "off" => Ok(false),
                other => bail!("config key {key}: cannot parse `{other}` as a flag"),
            },
        }
    }
}

fn normalize(key: &str) -> String {
    key.trim().replace('-', "_").to_ascii_lowercase()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn config_from(text: &str) -> Config {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(text.as_bytes()).unwrap();
        Config::load(file.path()).unwrap()
    }

    #[test]
    fn parses_keys_comments_and_aliases() {
        let cfg = config_from("lambda = 0.25\n# comment\nbeta-phase = 1.5 # trailing\n\ntransform = true\n");
        assert_eq!(cfg.f64("lambda", None).unwrap(), Some(0.25));
        assert_eq!(cfg.f64("beta_phase", None).unwrap(), Some(1.5));
        assert!(cfg.flag("transform", false).unwrap());
        assert_eq!(cfg.f64("y", None).unwrap(), None);
    }

    #[test]
    fn cli_values_override_config() {
        let cfg = config_from("lambda = 0.25\n");
        assert_eq!(cfg.f64("lambda", Some(0.4)).unwrap(), Some(0.4));
    }

    #[test]
    fn rejects_malformed_lines() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(b"lambda 0.25\n").unwrap();
        assert!(Config::load(file.path()).is_err());
    }
}
