//! Flat TOML run configuration.
//!
//! ```toml
//! scheme = "waterfill_quadratic_interp"
//! m = 10
//! k = 32
//! b = 128
//! ```
//!
//! Unset keys keep their defaults (N = 128, σ² = 0.1, P_T = 1, C_b = 128,
//! 3000 trials).

use toml::{Table, Value};

use crate::bits::GainExponent;
use crate::experiment::SchemeConfig;
use crate::{Error, Result};

pub const VALID_KEYS: [&str; 15] = [
    "scheme",
    "n",
    "m",
    "k",
    "r",
    "b",
    "c_b",
    "p_t",
    "noise_var",
    "p_e",
    "trials",
    "seed",
    "training_trials",
    "ideal_nodes",
    "gain_exponent",
];

fn mismatch(key: &str, expected: &str, got: &Value) -> Error {
    Error::Config(format!(
        "key '{key}' expects {expected}, got {} ({got})",
        got.type_str()
    ))
}

fn uint(key: &str, v: &Value) -> Result<u64> {
    match v {
        Value::Integer(i) if *i >= 0 => Ok(*i as u64),
        _ => Err(mismatch(key, "a non-negative integer", v)),
    }
}

fn count(key: &str, v: &Value) -> Result<usize> {
    Ok(uint(key, v)? as usize)
}

fn bits(key: &str, v: &Value) -> Result<u32> {
    u32::try_from(uint(key, v)?).map_err(|_| mismatch(key, "an integer below 2^32", v))
}

fn real(key: &str, v: &Value) -> Result<f64> {
    match v {
        Value::Float(f) => Ok(*f),
        Value::Integer(i) => Ok(*i as f64),
        _ => Err(mismatch(key, "a number", v)),
    }
}

/// Parses a flat TOML document into a validated [`SchemeConfig`].
pub fn parse_config(text: &str) -> Result<SchemeConfig> {
    let table: Table = text.parse().map_err(|e: toml::de::Error| {
        Error::Config(format!("malformed config: {}", e.message()))
    })?;
    let mut c = SchemeConfig::default();
    for (key, v) in &table {
        match key.as_str() {
            "scheme" => match v {
                Value::String(s) => c.scheme = s.parse()?,
                _ => return Err(mismatch(key, "a string", v)),
            },
            "n" => c.n = count(key, v)?,
            "m" => c.m = count(key, v)?,
            "k" => c.k = Some(count(key, v)?),
            "r" => c.r = Some(count(key, v)?),
            "b" => c.b = bits(key, v)?,
            "c_b" => c.c_b = bits(key, v)?,
            "p_t" => c.p_t = real(key, v)?,
            "noise_var" => c.noise_var = real(key, v)?,
            "p_e" => c.p_e = real(key, v)?,
            "trials" => c.trials = uint(key, v)?,
            "seed" => c.seed = uint(key, v)?,
            "training_trials" => c.training_trials = uint(key, v)?,
            "ideal_nodes" => match v {
                Value::Boolean(b) => c.ideal_nodes = *b,
                _ => return Err(mismatch(key, "a boolean", v)),
            },
            "gain_exponent" => {
                c.gain_exponent = match uint(key, v)? {
                    1 => GainExponent::One,
                    2 => GainExponent::Two,
                    _ => return Err(mismatch(key, "1 or 2", v)),
                }
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown key '{other}'; valid keys are {}",
                    VALID_KEYS.join(", ")
                )))
            }
        }
    }
    c.validate()?;
    Ok(c)
}
