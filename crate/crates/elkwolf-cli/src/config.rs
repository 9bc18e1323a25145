//! Run configuration: the eleven model parameters plus solver controls and
//! the RNG seed, loaded from a flat `key = value` file or a flat JSON object,
//! then overridden by repeatable `--set key=value` flags.

use elkwolf::model::{ParameterSet, PARAMETER_NAMES};

/// Non-parameter configuration keys.
const SOLVER_KEYS: [&str; 4] = ["rel_tol", "abs_tol", "horizon", "sample_count"];

/// Everything a subcommand needs besides its own flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ParameterSet<f64>,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub horizon: f64,
    pub sample_count: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: ParameterSet::default(),
            rel_tol: 1e-6,
            abs_tol: 1e-8,
            horizon: 400.0,
            sample_count: 400,
            seed: 2,
        }
    }
}

impl RunConfig {
    /// Applies one key to the configuration. Unknown keys and invalid values
    /// are both configuration errors.
    pub fn apply(&mut self, key: &str, raw: &str) -> Result<(), String> {
        let number = || -> Result<f64, String> {
            raw.trim()
                .parse::<f64>()
                .map_err(|_| format!("value for `{key}` is not a number: `{raw}`"))
        };
        if PARAMETER_NAMES.contains(&key) {
            let value = number()?;
            return self
                .params
                .set(key, value)
                .map_err(|e| format!("invalid value for `{key}`: {e}"));
        }
        match key {
            "rel_tol" | "abs_tol" | "horizon" => {
                let value = number()?;
                if !(value > 0.0) || !value.is_finite() {
                    return Err(format!("`{key}` must be positive and finite"));
                }
                match key {
                    "rel_tol" => self.rel_tol = value,
                    "abs_tol" => self.abs_tol = value,
                    _ => self.horizon = value,
                }
                Ok(())
            }
            "sample_count" => {
                self.sample_count = raw
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| format!("`sample_count` must be a positive integer, got `{raw}`"))?;
                if self.sample_count == 0 {
                    return Err("`sample_count` must be at least 1".into());
                }
                Ok(())
            }
            "seed" => {
                self.seed = raw
                    .trim()
                    .parse::<u64>()
                    .map_err(|_| format!("`seed` must be a nonnegative integer, got `{raw}`"))?;
                Ok(())
            }
            _ => Err(format!(
                "unknown configuration key `{key}` (parameters: {}; solver: {}; seed)",
                PARAMETER_NAMES.join(", "),
                SOLVER_KEYS.join(", ")
            )),
        }
    }
}

/// Parses config file text into ordered key/value pairs. A leading `{`
/// selects the JSON form; anything else is flat `key = value` lines with
/// blank lines and `#` comments ignored.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>, String> {
    if text.trim_start().starts_with('{') {
        let object: serde_json::Map<String, serde_json::Value> =
            serde_json::from_str(text).map_err(|e| format!("invalid JSON configuration: {e}"))?;
        let mut pairs = Vec::with_capacity(object.len());
        for (key, value) in object {
            let serde_json::Value::Number(number) = &value else {
                return Err(format!("configuration key `{key}` must map to a number"));
            };
            pairs.push((key, number.to_string()));
        }
        return Ok(pairs);
    }
    let mut pairs = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("line {}: expected `key = value`, got `{line}`", index + 1));
        };
        pairs.push((key.trim().to_owned(), value.trim().to_owned()));
    }
    Ok(pairs)
}

/// Builds the configuration from optional file text plus `--set` overrides.
/// Returns the configuration and the parameter keys the file left unset
/// (empty when no file was given).
pub fn build(
    file_text: Option<&str>,
    overrides: &[String],
) -> Result<(RunConfig, Vec<&'static str>), String> {
    let mut config = RunConfig::default();
    let mut missing = Vec::new();
    if let Some(text) = file_text {
        let pairs = parse_pairs(text)?;
        for (key, value) in &pairs {
            config.apply(key, value)?;
        }
        missing = PARAMETER_NAMES
            .iter()
            .filter(|name| !pairs.iter().any(|(key, _)| key == *name))
            .copied()
            .collect();
    }
    for entry in overrides {
        let Some((key, value)) = entry.split_once('=') else {
            return Err(format!("--set expects `key=value`, got `{entry}`"));
        };
        config.apply(key.trim(), value.trim())?;
    }
    Ok((config, missing))
}
