//! Flat key-value run configuration: built-in defaults, then an optional
//! INI file, then command-line flags.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::CliError;

/// Every recognised key with its default. Anything else is rejected.
pub const DEFAULTS: &[(&str, &str)] = &[
    ("abs_tol", "0"),
    ("alpha", "7.2973525693e-3"),
    ("base_step", "0.1"),
    ("cavity_radius", "4"),
    ("eta0", "1"),
    ("flat_tol", "1e-12"),
    ("formats", "csv,json,svg"),
    ("grid", "9"),
    ("max_iter", "4000"),
    ("n_levels", "0"),
    ("n_list", "1,10,100,1000"),
    ("n_max", "5"),
    ("order_min", "1.9"),
    ("r_max", "5"),
    ("r_min", "0"),
    ("r_points", "501"),
    ("reduction_points", "128"),
    ("refine", "3"),
    ("rel_tol", "1e-12"),
    ("star_ratio", "0.01"),
    ("z", "1"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// Fully resolved configuration; iteration order is the key order.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn defaults() -> Self {
        Self { values: DEFAULTS.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect() }
    }

    fn check_key(key: &str) -> Result<(), CliError> {
        if DEFAULTS.iter().any(|(k, _)| *k == key) {
            Ok(())
        } else {
            Err(CliError::Config(format!("unknown configuration key `{key}`")))
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), CliError> {
        Self::check_key(key)?;
        self.values.insert(key.to_string(), value.into());
        Ok(())
    }

    /// Merges an INI file. Keys go in the unnamed section or under `[kg5d]`.
    pub fn merge_file(&mut self, path: &Path) -> Result<(), CliError> {
        let ini = ini::Ini::load_from_file(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        for (section, props) in ini.iter() {
            if let Some(name) = section {
                if name != "kg5d" {
                    return Err(CliError::Config(format!("unknown section `[{name}]`")));
                }
            }
            for (key, value) in props.iter() {
                self.set(key.trim(), value.trim())?;
            }
        }
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    fn raw(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).expect("every key has a default")
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<T, CliError> {
        let raw = self.raw(key);
        raw.parse().map_err(|_| CliError::Config(format!("`{key}` has unparsable value `{raw}`")))
    }

    pub fn f64(&self, key: &str) -> Result<f64, CliError> {
        let v: f64 = self.parse(key)?;
        if !v.is_finite() {
            return Err(CliError::Config(format!("`{key}` must be finite")));
        }
        Ok(v)
    }

    pub fn usize(&self, key: &str) -> Result<usize, CliError> {
        self.parse(key)
    }

    pub fn u32(&self, key: &str) -> Result<u32, CliError> {
        self.parse(key)
    }

    pub fn usize_list(&self, key: &str) -> Result<Vec<usize>, CliError> {
        let list = self
            .raw(key)
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map_err(|_| CliError::Config(format!("`{key}` has non-integer entry `{s}`"))))
            .collect::<Result<Vec<usize>, _>>()?;
        if list.is_empty() {
            return Err(CliError::Config(format!("`{key}` is empty")));
        }
        Ok(list)
    }

    pub fn formats(&self) -> Result<Vec<Format>, CliError> {
        let mut out = Vec::new();
        for item in self.raw("formats").split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let f = match item {
                "csv" => Format::Csv,
                "json" => Format::Json,
                "svg" => Format::Svg,
                other => return Err(CliError::Config(format!("unknown output format `{other}`"))),
            };
            if !out.contains(&f) {
                out.push(f);
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn wants(&self, format: Format) -> Result<bool, CliError> {
        Ok(self.formats()?.contains(&format))
    }

    pub fn tolerance(&self) -> Result<kg5d::Tol, CliError> {
        kg5d::Tol::new(self.f64("rel_tol")?, self.f64("abs_tol")?, self.usize("max_iter")?).map_err(CliError::from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn file_then_flags() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "alpha = 0.5\n[kg5d]\nn_max = 7").unwrap();
        let mut s = Settings::defaults();
        s.merge_file(file.path()).unwrap();
        s.set("n_max", "2").unwrap();
        assert_eq!(s.f64("alpha").unwrap(), 0.5);
        assert_eq!(s.usize("n_max").unwrap(), 2);
    }

    #[test]
    fn unknown_keys_and_sections_are_rejected() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "alpah = 0.5").unwrap();
        assert!(Settings::defaults().merge_file(file.path()).is_err());
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "[other]\nalpha = 0.5").unwrap();
        assert!(Settings::defaults().merge_file(file.path()).is_err());
    }

    #[test]
    fn lists_and_formats() {
        let mut s = Settings::defaults();
        s.set("n_list", "3, 4,5").unwrap();
        assert_eq!(s.usize_list("n_list").unwrap(), vec![3, 4, 5]);
        s.set("formats", "svg,csv,csv").unwrap();
        assert_eq!(s.formats().unwrap(), vec![Format::Csv, Format::Svg]);
        s.set("formats", "png").unwrap();
        assert!(s.formats().is_err());
    }
}
