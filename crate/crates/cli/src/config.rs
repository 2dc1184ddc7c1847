use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use malle_core::arith::DEFAULT_TUPLE_CAP;
use malle_core::sieve::DEFAULT_SIEVE_LIMIT_CAP;
use malle_core::DEFAULT_ELEMENT_CAP;

use crate::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    /// Largest group enumerated element by element.
    pub elements: u64,
    /// Largest tuple stream walked.
    pub tuples: u64,
    /// Largest sieve limit, the memory knob.
    pub sieve_limit: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Self { elements: DEFAULT_ELEMENT_CAP, tuples: DEFAULT_TUPLE_CAP, sieve_limit: DEFAULT_SIEVE_LIMIT_CAP }
    }
}

impl Caps {
    pub fn validate(&self) -> CliResult<()> {
        if self.elements == 0 || self.tuples == 0 || self.sieve_limit < 2 {
            return Err(CliError::Usage("caps must be positive (sieve cap at least 2)".into()));
        }
        Ok(())
    }
}

/// Everything a command needs; echoed into the report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Conductor bounds, as decimal strings.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub x: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime_bound: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    pub caps: Caps,
    pub identification: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            n: None,
            x: Vec::new(),
            prime_bound: None,
            threads: None,
            caps: Caps::default(),
            identification: 1,
            output_path: None,
            format: Format::Json,
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        self.caps.validate()?;
        if !(1..=2).contains(&self.identification) {
            return Err(CliError::Usage(format!("identification must be 1 or 2, got {}", self.identification)));
        }
        if self.threads == Some(0) {
            return Err(CliError::Usage("thread count must be positive".into()));
        }
        if self.n == Some(0) {
            return Err(CliError::Usage("n must be at least 1".into()));
        }
        for x in &self.x {
            parse_decimal(x)?;
        }
        Ok(())
    }

    pub fn require_n(&self) -> CliResult<usize> {
        self.n.ok_or_else(|| CliError::Usage(format!("{} needs --n", self.command)))
    }

    pub fn require_prime_bound(&self) -> CliResult<u64> {
        self.prime_bound.ok_or_else(|| CliError::Usage(format!("{} needs --prime-bound", self.command)))
    }

    pub fn bounds(&self) -> CliResult<Vec<u64>> {
        if self.x.is_empty() {
            return Err(CliError::Usage(format!("{} needs --x", self.command)));
        }
        self.x.iter().map(|x| parse_bound(x, self.caps.sieve_limit)).collect()
    }

    /// Bounds for the float-only predictor, which needs no sieve up to X.
    pub fn float_bounds(&self) -> CliResult<Vec<f64>> {
        if self.x.is_empty() {
            return Err(CliError::Usage(format!("{} needs --x", self.command)));
        }
        self.x
            .iter()
            .map(|x| Ok(parse_decimal(x)?.to_string().parse::<f64>().expect("decimal digits")))
            .collect()
    }
}

fn parse_decimal(text: &str) -> CliResult<BigUint> {
    let digits = text.trim();
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(CliError::Usage(format!("X must be a non-negative decimal integer, got {text:?}")));
    }
    Ok(digits.parse().expect("ascii digits"))
}

/// Parses a decimal conductor bound; values past the sieve cap are a cap breach.
pub fn parse_bound(text: &str, cap: u64) -> CliResult<u64> {
    let value = parse_decimal(text)?;
    let small = u64::try_from(&value).ok().filter(|&v| v <= cap.saturating_mul(3));
    small.ok_or_else(|| {
        CliError::Core(malle_core::Error::CapExceeded {
            what: "conductor bound X",
            needed: u128::try_from(&value).unwrap_or(u128::MAX),
            cap: cap as u128 * 3,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_parse() {
        assert_eq!(parse_bound("90", 1000).unwrap(), 90);
        assert!(matches!(parse_bound("-4", 1000), Err(CliError::Usage(_))));
        let huge = "123456789012345678901234567890";
        assert_eq!(parse_bound(huge, 1000).unwrap_err().exit_code(), 2);
        assert!(parse_bound("3001", 1000).is_err());
    }

    #[test]
    fn config_round_trips() {
        let mut c = RunConfig::new("count");
        c.n = Some(1);
        c.x = vec!["90".into()];
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), c);
        c.identification = 3;
        assert!(c.validate().is_err());
    }
}
