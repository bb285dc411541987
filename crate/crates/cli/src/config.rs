//! Flat `key = value` config files and list/grid parsing.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::str::FromStr;

/// Values from a config file; each key must be consumed by the command.
#[derive(Debug, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
    used: std::sync::Mutex<Vec<String>>,
}

impl Config {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Config, String> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| format!("config line {}: expected key = value", n + 1))?;
            let key = k.trim().replace('_', "-");
            if values.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(format!("config line {}: duplicate key {key}", n + 1));
            }
        }
        Ok(Config { values, used: Default::default() })
    }

    /// The flag value if given, else the parsed config value.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, String>
    where
        T::Err: Display,
    {
        self.used.lock().expect("config lock").push(key.to_string());
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            Some(v) => v.parse().map(Some).map_err(|e| format!("config key {key}: {e}")),
            None => Ok(None),
        }
    }

    /// Rejects keys no option asked for.
    pub fn finish(&self) -> Result<(), String> {
        let used = self.used.lock().expect("config lock");
        let unknown: Vec<&String> = self.values.keys().filter(|k| !used.contains(k)).collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(format!("unknown config keys: {unknown:?}"))
        }
    }
}

/// Comma-separated list; empty text gives an empty list.
pub fn parse_list<T: FromStr>(text: &str) -> Result<Vec<T>, String>
where
    T::Err: Display,
{
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|e| format!("{s:?}: {e}")))
        .collect()
}

/// `start:stop:step` inclusive, or a comma list of values.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts[..] {
        [start, stop, step] => {
            let num = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("grid {text:?}: {e}"));
            let (a, b, h) = (num(start)?, num(stop)?, num(step)?);
            if !(h > 0.0) || b < a {
                return Err(format!("grid {text:?}: need step > 0 and stop >= start"));
            }
            let n = ((b - a) / h + 1e-9).floor() as usize;
            // Round away accumulated binary noise so grid values print cleanly.
            Ok((0..=n).map(|k| round_sig(a + k as f64 * h)).collect())
        }
        [_] => parse_list(text),
        _ => Err(format!("grid {text:?}: expected start:stop:step")),
    }
}

fn round_sig(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let scale = 10f64.powi(12 - x.abs().log10().ceil() as i32);
    (x * scale).round() / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_inclusive() {
        let g = parse_grid("0.002:0.012:0.001").unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], 0.002);
        assert_eq!(g[10], 0.012);
        assert_eq!(g[3], 0.005);
        assert_eq!(parse_grid("0.1,0.2").unwrap(), vec![0.1, 0.2]);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    #[test]
    fn flags_override_file() {
        let c = Config::parse("shots = 10\n# note\nseed=3\n").unwrap();
        assert_eq!(c.pick::<u64>(Some(5), "shots").unwrap(), Some(5));
        assert_eq!(c.pick::<u64>(None, "seed").unwrap(), Some(3));
        assert!(c.finish().is_ok());
        let c = Config::parse("bogus = 1").unwrap();
        assert!(c.finish().is_err());
        assert!(Config::parse("no equals").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list::<usize>("3, 5,7").unwrap(), vec![3, 5, 7]);
        assert!(parse_list::<usize>("").unwrap().is_empty());
        assert!(parse_list::<usize>("3,x").is_err());
    }
}
