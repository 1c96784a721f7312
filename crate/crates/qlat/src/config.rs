//! INI run configuration read through a key schema.
//!
//! Every key a subcommand reads is recorded with its resolved value so the
//! full configuration, defaults included, can be written back out.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;
use std::str::FromStr;

use ini::Ini;

pub const SECTIONS: [&str; 2] = ["model", "algorithm"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Read(String),
    #[error("config syntax: {0}")]
    Syntax(String),
    #[error("unknown section [{0}]")]
    UnknownSection(String),
    #[error("key `{0}` must belong to a [model] or [algorithm] section")]
    Unsectioned(String),
    #[error("missing required key `{key}` in [{section}]")]
    Missing { section: String, key: String },
    #[error("unknown key `{key}` in [{section}]")]
    Unknown { section: String, key: String },
    #[error("invalid value `{value}` for key `{key}` in [{section}]: {reason}")]
    Invalid { section: String, key: String, value: String, reason: String },
}

#[derive(Debug, Clone, Default)]
pub struct Config {
    values: BTreeMap<(String, String), String>,
    read: BTreeSet<(String, String)>,
    resolved: Vec<(String, String, String)>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let ini = Ini::load_from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
        let mut values = BTreeMap::new();
        for (section, props) in ini.iter() {
            match section {
                None => {
                    if let Some((k, _)) = props.iter().next() {
                        return Err(ConfigError::Unsectioned(k.to_string()));
                    }
                }
                Some(s) if !SECTIONS.contains(&s) => return Err(ConfigError::UnknownSection(s.to_string())),
                Some(s) => {
                    for (k, v) in props.iter() {
                        values.insert((s.to_string(), k.to_string()), v.trim().to_string());
                    }
                }
            }
        }
        Ok(Self { values, ..Default::default() })
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn lookup(&mut self, section: &str, key: &str) -> Option<String> {
        let id = (section.to_string(), key.to_string());
        self.read.insert(id.clone());
        self.values.get(&id).cloned()
    }

    fn convert<T: FromStr>(section: &str, key: &str, raw: &str) -> Result<T, ConfigError>
    where
        T::Err: Display,
    {
        raw.parse().map_err(|e: T::Err| ConfigError::Invalid {
            section: section.into(),
            key: key.into(),
            value: raw.into(),
            reason: e.to_string(),
        })
    }

    pub fn required<T: FromStr>(&mut self, section: &str, key: &str) -> Result<T, ConfigError>
    where
        T::Err: Display,
    {
        let raw = self.lookup(section, key).ok_or_else(|| ConfigError::Missing {
            section: section.into(),
            key: key.into(),
        })?;
        let v = Self::convert(section, key, &raw)?;
        self.resolved.push((section.into(), key.into(), raw));
        Ok(v)
    }

    pub fn optional<T: FromStr + Display>(&mut self, section: &str, key: &str, default: T) -> Result<T, ConfigError>
    where
        T::Err: Display,
    {
        let v = match self.lookup(section, key) {
            Some(raw) => Self::convert(section, key, &raw)?,
            None => default,
        };
        self.resolved.push((section.into(), key.into(), v.to_string()));
        Ok(v)
    }

    /// Rejects any key that no reader asked for.
    pub fn finish(&self) -> Result<(), ConfigError> {
        match self.values.keys().find(|k| !self.read.contains(*k)) {
            Some((section, key)) => Err(ConfigError::Unknown { section: section.clone(), key: key.clone() }),
            None => Ok(()),
        }
    }

    /// `(section, key, value)` for every key read, in read order.
    pub fn resolved(&self) -> &[(String, String, String)] {
        &self.resolved
    }

    pub fn invalid(section: &str, key: &str, value: impl Display, reason: impl Into<String>) -> ConfigError {
        ConfigError::Invalid {
            section: section.into(),
            key: key.into(),
            value: value.to_string(),
            reason: reason.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_and_resolves_defaults() {
        let mut c = Config::parse("# run\n[model]\nn_sites = 4\nmass = -0.5\n").unwrap();
        assert_eq!(c.required::<usize>("model", "n_sites").unwrap(), 4);
        assert_eq!(c.required::<f64>("model", "mass").unwrap(), -0.5);
        assert_eq!(c.optional("model", "coupling", 1.0).unwrap(), 1.0);
        c.finish().unwrap();
        assert_eq!(c.resolved()[2], ("model".into(), "coupling".into(), "1".into()));
    }

    #[test]
    fn missing_key_is_named() {
        let mut c = Config::parse("[model]\nn_sites = 4\n").unwrap();
        let err = c.required::<f64>("model", "mass").unwrap_err();
        assert!(err.to_string().contains("`mass`"));
    }

    #[test]
    fn unknown_key_is_named() {
        let mut c = Config::parse("[model]\nn_sites = 4\nmas = 1\n").unwrap();
        c.required::<usize>("model", "n_sites").unwrap();
        assert_eq!(c.finish().unwrap_err(), ConfigError::Unknown { section: "model".into(), key: "mas".into() });
    }

    #[test]
    fn bad_value_and_section() {
        let mut c = Config::parse("[algorithm]\nsteps = ten\n").unwrap();
        assert!(matches!(c.required::<usize>("algorithm", "steps"), Err(ConfigError::Invalid { .. })));
        assert!(matches!(Config::parse("[extra]\na = 1\n"), Err(ConfigError::UnknownSection(_))));
        assert!(matches!(Config::parse("a = 1\n"), Err(ConfigError::Unsectioned(_))));
    }
}
