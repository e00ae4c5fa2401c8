//! Optional `key = value` file merged under the command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use toml::{Table, Value};

use crate::error::CliError;

const KNOWN_KEYS: &[&str] = &[
    "in",
    "out-dir",
    "seed",
    "noise",
    "levels",
    "mode",
    "method",
    "window-radius",
    "nms-radius",
    "threshold-rel",
    "threshold-abs",
    "k",
    "window",
    "sigma",
    "dump-bands",
    "dump-response",
    "emit",
    "moravec-window-radius",
    "moravec-nms-radius",
    "moravec-threshold-rel",
    "moravec-threshold-abs",
    "harris-window-radius",
    "harris-nms-radius",
    "harris-threshold-rel",
    "harris-k",
    "harris-window",
    "harris-sigma",
];

#[derive(Debug, Default)]
pub struct FileConfig {
    table: Table,
    /// Directory of the file, for relative paths inside it.
    base: PathBuf,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let raw: Table = text
            .parse()
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let mut table = Table::new();
        for (key, value) in raw {
            let key = key.replace('_', "-");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "{}: unknown key '{key}'",
                    path.display()
                )));
            }
            table.insert(key, value);
        }
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(FileConfig { table, base })
    }

    fn scalar_text(key: &str, v: &Value) -> Result<String, CliError> {
        match v {
            Value::String(s) => Ok(s.clone()),
            Value::Integer(i) => Ok(i.to_string()),
            Value::Float(f) => Ok(f.to_string()),
            Value::Boolean(b) => Ok(b.to_string()),
            _ => Err(CliError::Usage(format!(
                "config key '{key}' must be a scalar"
            ))),
        }
    }

    /// Flag value if given, else the file's value run through `parse`.
    pub fn pick<T>(
        &self,
        flag: Option<T>,
        key: &str,
        parse: impl Fn(&str) -> Result<T, String>,
    ) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.table.get(key) {
            None => Ok(None),
            Some(v) => parse(&Self::scalar_text(key, v)?)
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config key '{key}': {e}"))),
        }
    }

    /// Like [`pick`](Self::pick) for repeatable flags; the file may hold a
    /// scalar or an array.
    pub fn pick_list<T>(
        &self,
        flags: Vec<T>,
        key: &str,
        parse: impl Fn(&str) -> Result<T, String>,
    ) -> Result<Vec<T>, CliError> {
        if !flags.is_empty() {
            return Ok(flags);
        }
        let items: Vec<&Value> = match self.table.get(key) {
            None => return Ok(Vec::new()),
            Some(Value::Array(a)) => a.iter().collect(),
            Some(v) => vec![v],
        };
        items
            .into_iter()
            .map(|v| {
                parse(&Self::scalar_text(key, v)?)
                    .map_err(|e| CliError::Usage(format!("config key '{key}': {e}")))
            })
            .collect()
    }

    pub fn pick_path(&self, flag: Option<PathBuf>, key: &str) -> Result<Option<PathBuf>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        Ok(self
            .pick(None, key, |s| Ok(PathBuf::from(s)))?
            .map(|p| self.base.join(p)))
    }

    pub fn pick_flag(&self, flag: bool, key: &str) -> Result<bool, CliError> {
        Ok(flag
            || self
                .pick(None, key, |s| s.parse::<bool>().map_err(|e| e.to_string()))?
                .unwrap_or(false))
    }
}

pub fn from_str<T: std::str::FromStr>(s: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.trim().parse().map_err(|e: T::Err| e.to_string())
}

pub fn enum_value<T: ValueEnum>(s: &str) -> Result<T, String> {
    T::from_str(s.trim(), true)
}
