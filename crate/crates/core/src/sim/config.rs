use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dist::{JohnsonSu, MomentSpec};
use crate::error::{Error, Result};
use crate::null::Tail;

/// Desk-scale defaults.
pub const DEFAULT_PAIR_COUNT: usize = 5_000;
pub const DEFAULT_MC_REPLICATES: usize = 10_000;
pub const MIN_PAIR_COUNT: usize = 100;
pub const SWEEP_REPLICATES: [usize; 4] = [100, 1_000, 10_000, 100_000];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SetId {
    #[serde(rename = "1")]
    S1,
    #[serde(rename = "2")]
    S2,
    #[serde(rename = "3A")]
    S3A,
    #[serde(rename = "3B")]
    S3B,
    #[serde(rename = "4")]
    S4,
    #[serde(rename = "5")]
    S5,
    #[serde(rename = "6")]
    S6,
    #[serde(rename = "7")]
    S7,
    #[serde(rename = "8")]
    S8,
}

impl SetId {
    pub const ALL: [SetId; 9] = [
        SetId::S1,
        SetId::S2,
        SetId::S3A,
        SetId::S3B,
        SetId::S4,
        SetId::S5,
        SetId::S6,
        SetId::S7,
        SetId::S8,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SetId::S1 => "1",
            SetId::S2 => "2",
            SetId::S3A => "3A",
            SetId::S3B => "3B",
            SetId::S4 => "4",
            SetId::S5 => "5",
            SetId::S6 => "6",
            SetId::S7 => "7",
            SetId::S8 => "8",
        }
    }

    /// Skew directions the set is run for.
    pub fn directions(self) -> &'static [SkewDirection] {
        match self {
            SetId::S4 | SetId::S5 => &[SkewDirection::Right],
            SetId::S6 | SetId::S7 => &[SkewDirection::Left],
            _ => &[SkewDirection::Left, SkewDirection::Right],
        }
    }

    /// True for the sets where the medians differ.
    pub fn is_power_study(self) -> bool {
        matches!(self, SetId::S3A | SetId::S3B)
    }
}

impl fmt::Display for SetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SetId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SetId::ALL
            .into_iter()
            .find(|id| id.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::domain(format!("unknown simulation set '{s}' (expected 1, 2, 3a, 3b, 4-8)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SkewDirection {
    #[serde(rename = "LS")]
    Left,
    #[serde(rename = "RS")]
    Right,
}

impl SkewDirection {
    pub fn label(self) -> &'static str {
        match self {
            SkewDirection::Left => "LS",
            SkewDirection::Right => "RS",
        }
    }

    fn sign(self) -> f64 {
        match self {
            SkewDirection::Left => -1.0,
            SkewDirection::Right => 1.0,
        }
    }
}

impl fmt::Display for SkewDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SkewDirection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ls" | "left" => Ok(SkewDirection::Left),
            "rs" | "right" => Ok(SkewDirection::Right),
            _ => Err(Error::domain(format!("unknown skew direction '{s}'"))),
        }
    }
}

/// How a parent distribution is specified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParentSpec {
    /// Moment-matched Johnson S_U.
    Moments { moments: MomentSpec },
    Explicit { params: JohnsonSu },
    /// `(2 lambda, gamma, delta, 2 xi)` applied to the moment-matched parent
    /// of `base`.
    DispersionDoubled { base: MomentSpec },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub set_id: SetId,
    pub skew_direction: SkewDirection,
    pub parent_1: ParentSpec,
    pub parent_2: ParentSpec,
    pub size_pairs: Vec<(usize, usize)>,
    pub pair_count: usize,
    /// Null cardinalities. Set 8 sweeps several; every other set uses one.
    pub mc_replicates: Vec<usize>,
    pub alphas: Vec<f64>,
    /// Cliff's d between the parents; the second parent is shifted to match.
    pub effect_size_target: Option<f64>,
    pub tail: Tail,
    pub master_seed: u64,
    /// Keep every p-value in the result.
    #[serde(default)]
    pub retain_p_values: bool,
}

const EQUAL_SIZES: [usize; 4] = [15, 20, 40, 60];
const UNEQUAL_SIZES: [(usize, usize); 3] = [(15, 20), (20, 40), (40, 60)];

fn moments(median: f64, sd: f64, skewness: f64) -> MomentSpec {
    MomentSpec { median, sd, skewness }
}

impl SimulationConfig {
    /// Preset for `set_id` and `direction` at reduced run sizes.
    pub fn preset(set_id: SetId, direction: SkewDirection, master_seed: u64) -> Result<Self> {
        if !set_id.directions().contains(&direction) {
            return Err(Error::domain(format!("set {set_id} is not run with {direction} parents")));
        }
        let skew = 1.5 * direction.sign();
        let base = moments(0.0, 1.0, skew);
        let milder = moments(0.0, 1.0, direction.sign());
        let (parent_1, parent_2) = match set_id {
            SetId::S1 | SetId::S3A | SetId::S3B | SetId::S8 => {
                (ParentSpec::Moments { moments: base }, ParentSpec::Moments { moments: base })
            }
            SetId::S2 => (ParentSpec::Moments { moments: base }, ParentSpec::DispersionDoubled { base }),
            SetId::S4 | SetId::S6 => (ParentSpec::Moments { moments: milder }, ParentSpec::Moments { moments: base }),
            SetId::S5 | SetId::S7 => (ParentSpec::Moments { moments: milder }, ParentSpec::DispersionDoubled { base }),
        };
        let mut size_pairs: Vec<(usize, usize)> = EQUAL_SIZES.iter().map(|&k| (k, k)).collect();
        let mirrored = !matches!(set_id, SetId::S1 | SetId::S3A | SetId::S3B | SetId::S8);
        for &(m, n) in &UNEQUAL_SIZES {
            size_pairs.push((m, n));
            if mirrored {
                size_pairs.push((n, m));
            }
        }
        if set_id == SetId::S8 {
            size_pairs = vec![(15, 15)];
        }
        Ok(SimulationConfig {
            set_id,
            skew_direction: direction,
            parent_1,
            parent_2,
            size_pairs,
            pair_count: DEFAULT_PAIR_COUNT,
            mc_replicates: if set_id == SetId::S8 {
                SWEEP_REPLICATES.to_vec()
            } else {
                vec![DEFAULT_MC_REPLICATES]
            },
            alphas: (1..=10).map(|k| k as f64 / 100.0).collect(),
            effect_size_target: match set_id {
                SetId::S3A => Some(0.25),
                SetId::S3B => Some(0.5),
                _ => None,
            },
            // Sample 2 has the higher median in set 3.
            tail: if set_id.is_power_study() { Tail::Left } else { Tail::Two },
            master_seed,
            retain_p_values: false,
        })
    }

    /// Presets for every direction the set is run with.
    pub fn presets(set_id: SetId, master_seed: u64) -> Vec<Self> {
        set_id
            .directions()
            .iter()
            .map(|&d| Self::preset(set_id, d, master_seed).expect("direction listed for set"))
            .collect()
    }

    /// Row label combining the set and the skew direction, e.g. `3B-RS`.
    pub fn label(&self) -> String {
        format!("{}-{}", self.set_id, self.skew_direction)
    }

    pub fn validate(&self) -> Result<()> {
        if self.pair_count < MIN_PAIR_COUNT {
            return Err(Error::domain(format!(
                "pair count {} below the minimum {MIN_PAIR_COUNT}",
                self.pair_count
            )));
        }
        if self.alphas.is_empty() || self.alphas.iter().any(|&a| !(a > 0.0 && a < 1.0)) {
            return Err(Error::domain("alphas must be non-empty and lie in (0, 1)"));
        }
        if self.size_pairs.is_empty() || self.size_pairs.iter().any(|&(m, n)| m < 2 || n < 2) {
            return Err(Error::domain("size pairs must be non-empty with both sizes at least 2"));
        }
        if self.mc_replicates.is_empty() || self.mc_replicates.iter().any(|&b| b < crate::mc::MIN_REPLICATES) {
            return Err(Error::domain(format!(
                "Monte-Carlo replicate counts must be non-empty and at least {}",
                crate::mc::MIN_REPLICATES
            )));
        }
        if let Some(d) = self.effect_size_target {
            if !(d > 0.0 && d < 1.0) {
                return Err(Error::domain(format!("effect size {d} outside (0, 1)")));
            }
        }
        Ok(())
    }
}
