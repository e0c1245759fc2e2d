use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    Left,
    Right,
    Two,
}

impl fmt::Display for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tail::Left => "left",
            Tail::Right => "right",
            Tail::Two => "two",
        })
    }
}

impl FromStr for Tail {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "left" => Ok(Tail::Left),
            "right" => Ok(Tail::Right),
            "two" | "two-sided" | "both" => Ok(Tail::Two),
            other => Err(Error::domain(format!("unknown tail `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Exact,
    MonteCarlo { seed: u64, replicates: usize },
}

/// Multiset of null statistic values, kept sorted in extended-real order.
///
/// Values may include `+inf`/`-inf` from completely separated samples; NaN is
/// never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct NullDistribution {
    values: Vec<f64>,
    provenance: Provenance,
}

impl NullDistribution {
    pub fn new(mut values: Vec<f64>, provenance: Provenance) -> Result<Self, Error> {
        if values.is_empty() {
            return Err(Error::domain("null distribution must not be empty"));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::domain("null distribution contains NaN"));
        }
        values.sort_unstable_by(f64::total_cmp);
        Ok(NullDistribution { values, provenance })
    }

    /// Sorted values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn cardinality(&self) -> usize {
        self.values.len()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// `n(values >= u)`
    pub fn count_ge(&self, u: f64) -> usize {
        self.values.len() - self.values.partition_point(|&v| v < u)
    }

    /// `n(values <= u)`
    pub fn count_le(&self, u: f64) -> usize {
        self.values.partition_point(|&v| v <= u)
    }

    /// Distinct values in ascending order.
    pub fn support(&self) -> Vec<f64> {
        let mut out = self.values.clone();
        out.dedup();
        out
    }

    pub fn negated(&self) -> NullDistribution {
        let values = self.values.iter().rev().map(|v| -v).collect();
        NullDistribution {
            values,
            provenance: self.provenance,
        }
    }
}
