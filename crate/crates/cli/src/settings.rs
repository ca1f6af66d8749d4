//! Run settings: built-in defaults, overridden by a `key = value` config
//! file, overridden by command-line flags.

use std::collections::BTreeMap;
use std::str::FromStr;

use gnss_predict::ingest::parse_key_values;

use crate::Failure;

#[derive(Debug, Clone)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn new(defaults: &[(&str, &str)]) -> Self {
        Self { values: defaults.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect() }
    }

    /// Config-file keys must already have a default; anything else is a typo.
    pub fn apply_config(&mut self, text: &str) -> Result<(), Failure> {
        let kv = parse_key_values(text).map_err(|e| Failure::usage(format!("config: {e}")))?;
        for (k, v) in kv {
            if !self.values.contains_key(&k) {
                return Err(Failure::usage(format!("config: unknown key `{k}` for this subcommand")));
            }
            self.values.insert(k, v);
        }
        Ok(())
    }

    pub fn apply_flag<T: ToString>(&mut self, key: &str, value: Option<T>) {
        if let Some(v) = value {
            self.values.insert(key.to_string(), v.to_string());
        }
    }

    pub fn raw(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or("")
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<T, Failure> {
        let v = self.raw(key);
        v.parse().map_err(|_| Failure::usage(format!("{key}: cannot parse `{v}`")))
    }

    /// Empty string means unset.
    pub fn get_opt<T: FromStr>(&self, key: &str) -> Result<Option<T>, Failure> {
        match self.raw(key) {
            "" => Ok(None),
            _ => self.get(key).map(Some),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &String)> {
        self.values.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let mut s = Settings::new(&[("n", "64"), ("f0", "1"), ("seed", "")]);
        s.apply_config("n = 30\nf0 = 2.5\n").unwrap();
        s.apply_flag("n", Some(16));
        s.apply_flag::<u64>("f0", None);
        assert_eq!(s.get::<usize>("n").unwrap(), 16);
        assert_eq!(s.get::<f64>("f0").unwrap(), 2.5);
        assert_eq!(s.get_opt::<u64>("seed").unwrap(), None);
        assert!(s.apply_config("bogus = 1\n").is_err());
        assert!(s.get::<usize>("f0").is_err());
    }
}
