use std::str::FromStr;

use hecke_core::modring::ExactRational;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Plain,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "plain" => Ok(Format::Plain),
            other => Err(format!("unknown format {other:?} (expected csv, json or plain)")),
        }
    }
}

pub const DECIMAL_DIGITS: usize = 15;

/// An exact rational as numerator and denominator strings, plus a decimal
/// rendering for reading by eye.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
    pub decimal: String,
}

impl From<&ExactRational> for RationalJson {
    fn from(r: &ExactRational) -> Self {
        RationalJson {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
            decimal: r.to_decimal(DECIMAL_DIGITS),
        }
    }
}

impl RationalJson {
    pub fn to_rational(&self) -> Result<ExactRational, String> {
        ExactRational::from_parts(&self.num, &self.den).map_err(|e| e.to_string())
    }
}

pub fn unix_timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}
