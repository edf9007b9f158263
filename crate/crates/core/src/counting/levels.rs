//! Discrete single-particle levels with exact rational energies.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exact rational energy `num / den`, `den > 0`, in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExactEnergy {
    num: i128,
    den: i128,
}

impl ExactEnergy {
    pub fn new(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        let g = gcd(num, den).max(1);
        let sign = if den < 0 { -1 } else { 1 };
        Ok(Self {
            num: sign * num / g,
            den: sign * den / g,
        })
    }

    pub fn integer(v: i64) -> Self {
        Self {
            num: i128::from(v),
            den: 1,
        }
    }

    pub fn numerator(&self) -> i128 {
        self.num
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }

    /// `self * scale` as an integer, if exact and in `i64` range.
    fn scaled(&self, scale: i128) -> Result<i64> {
        if scale % self.den != 0 {
            return Err(Error::Parse("scale is not a common denominator".into()));
        }
        self.num
            .checked_mul(scale / self.den)
            .and_then(|v| i64::try_from(v).ok())
            .ok_or(Error::Overflow)
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Self::integer(i))
                } else {
                    // shortest round-trip text of the literal
                    n.to_string().parse()
                }
            }
            Value::String(s) => s.parse(),
            other => Err(Error::Parse(format!("energy must be a number or string, got {other}"))),
        }
    }
}

impl FromStr for ExactEnergy {
    type Err = Error;

    /// Accepts integers, decimals (`-1.25`) and fractions (`3/4`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid exact energy '{s}'"));
        if let Some((p, q)) = s.split_once('/') {
            let p: i128 = p.trim().parse().map_err(|_| bad())?;
            let q: i128 = q.trim().parse().map_err(|_| bad())?;
            return Self::new(p, q).map_err(|_| bad());
        }
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        if frac_part.len() > 18 {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let mut num: i128 = digits.parse().map_err(|_| bad())?;
        if neg {
            num = -num;
        }
        Self::new(num, 10i128.pow(frac_part.len() as u32))
    }
}

impl fmt::Display for ExactEnergy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl Serialize for ExactEnergy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactEnergy {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        ExactEnergy::from_json(&v).map_err(serde::de::Error::custom)
    }
}

/// Single-particle levels. Degenerate levels are separate entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSpec {
    pub energies: Vec<ExactEnergy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl LevelSpec {
    pub fn new(energies: Vec<ExactEnergy>, labels: Option<Vec<String>>) -> Result<Self> {
        let spec = Self { energies, labels };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_integers(energies: &[i64]) -> Result<Self> {
        Self::new(energies.iter().map(|&e| ExactEnergy::integer(e)).collect(), None)
    }

    /// Parses `{"energies": [..], "labels": [..]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: LevelSpec =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.energies.is_empty() {
            return Err(Error::InvalidParameter("at least one level is required".into()));
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.energies.len() {
                return Err(Error::InvalidParameter(format!(
                    "{} labels for {} levels",
                    labels.len(),
                    self.energies.len()
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// Clears denominators of the levels and `target` together.
    /// Returns `(level energies, target, common denominator)` as integers.
    pub fn to_scaled(&self, target: ExactEnergy) -> Result<(Vec<i64>, i64, i128)> {
        let mut scale: i128 = target.den;
        for e in &self.energies {
            let g = gcd(scale, e.den);
            scale = (scale / g).checked_mul(e.den).ok_or(Error::Overflow)?;
        }
        let levels = self
            .energies
            .iter()
            .map(|e| e.scaled(scale))
            .collect::<Result<Vec<_>>>()?;
        Ok((levels, target.scaled(scale)?, scale))
    }
}
