//! Flat INI experiment files with the sections `[data]`, `[grid]` and `[compare]`.
//!
//! ```ini
//! [data]
//! m = 4
//! u_c = -0.6666666666666666
//! [grid]
//! L = 15
//! N = 32768
//! [compare]
//! eps = 2e-2, 1e-2
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ini::Ini;

use crate::error::{schema, CliError};

const SCHEMA: &[(&str, &[&str])] = &[
    (
        "data",
        &[
            "m",
            "x_m",
            "u_c",
            "top_derivative",
            "beta",
            "taper_start",
            "taper_end",
        ],
    ),
    ("grid", &["L", "N", "eps", "t", "courant", "tail_tol"]),
    (
        "compare",
        &[
            "eps",
            "s_min",
            "s_max",
            "t1_min",
            "t1_max",
            "s_points",
            "t1_points",
            "bvp_S",
            "bvp_N",
        ],
    ),
];

#[derive(Clone, Debug, Default)]
pub struct ExperimentConfig {
    source: Option<PathBuf>,
    values: BTreeMap<(String, String), String>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::parse_from(&text, Some(path))
    }

    pub fn parse_from(text: &str, source: Option<&Path>) -> Result<Self, CliError> {
        let whence = source.map_or_else(|| "config".to_string(), |p| p.display().to_string());
        let ini = Ini::load_from_str(text).map_err(|e| schema(format!("{whence}: {e}")))?;
        let mut values = BTreeMap::new();
        for (section, props) in ini.iter() {
            let Some(section) = section else {
                if let Some((k, _)) = props.iter().next() {
                    return Err(schema(format!("{whence}: key `{k}` outside any section")));
                }
                continue;
            };
            let Some((_, keys)) = SCHEMA.iter().find(|(s, _)| *s == section) else {
                return Err(schema(format!("{whence}: unknown section [{section}]")));
            };
            for (k, v) in props.iter() {
                if !keys.contains(&k) {
                    return Err(schema(format!(
                        "{whence}: unknown key `{k}` in [{section}]"
                    )));
                }
                values.insert((section.to_string(), k.to_string()), v.trim().to_string());
            }
        }
        Ok(ExperimentConfig {
            source: source.map(Path::to_path_buf),
            values,
        })
    }

    fn raw(&self, section: &str, key: &str) -> Option<&str> {
        self.values
            .get(&(section.to_string(), key.to_string()))
            .map(String::as_str)
    }

    fn bad(&self, section: &str, key: &str, value: &str) -> CliError {
        let whence = self
            .source
            .as_ref()
            .map_or_else(|| "config".to_string(), |p| p.display().to_string());
        schema(format!(
            "{whence}: [{section}] {key} = `{value}` does not parse"
        ))
    }

    pub fn get<T: FromStr>(&self, section: &str, key: &str) -> Result<Option<T>, CliError> {
        self.raw(section, key)
            .map(|v| v.parse().map_err(|_| self.bad(section, key, v)))
            .transpose()
    }

    pub fn list(&self, section: &str, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.raw(section, key)
            .map(|v| {
                v.split(',')
                    .map(|x| x.trim().parse::<f64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| self.bad(section, key, v))
            })
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_typed_values() {
        let c = ExperimentConfig::parse_from(
            "[data]\nm = 4\n[grid]\nN = 64\n[compare]\neps = 2e-2, 1e-2\n",
            None,
        )
        .unwrap();
        assert_eq!(c.get::<u32>("data", "m").unwrap(), Some(4));
        assert_eq!(c.get::<usize>("grid", "N").unwrap(), Some(64));
        assert_eq!(c.get::<f64>("grid", "L").unwrap(), None);
        assert_eq!(c.list("compare", "eps").unwrap(), Some(vec![2e-2, 1e-2]));
    }

    #[test]
    fn rejects_unknown_keys_and_sections() {
        for text in ["[data]\nwidth = 2\n", "[solver]\nN = 4\n", "N = 4\n"] {
            let e = ExperimentConfig::parse_from(text, None).unwrap_err();
            assert!(matches!(e, CliError::SchemaViolation(_)), "{text}: {e}");
        }
        let c = ExperimentConfig::parse_from("[grid]\nN = many\n", None).unwrap();
        assert!(c.get::<usize>("grid", "N").is_err());
    }
}
