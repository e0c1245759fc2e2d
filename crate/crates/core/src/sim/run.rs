use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::calibrate::shift_for_effect_size;
use super::config::{ParentSpec, SimulationConfig};
use super::metrics::{binomial_band, excess_type1, power};
use crate::dist::{moment_match, DistributionFamily, JohnsonSu, JohnsonSuFamily, Parent};
use crate::error::Result;
use crate::mc::{fit_null_parents, mc_null_nested, mc_pvalue, Method};
use crate::null::Tail;
use crate::rng::{derive_seed, label_seed, stream};
use crate::rro::{normal_pvalue, rro_statistic};

/// Two-sided level of the binomial significance bands.
pub const BAND_LEVEL: f64 = 0.01;

// Stream tags under a pair seed.
const DATA_STREAM: u64 = 0;
const NULL_SEED_TAG: u64 = 1;
const CALIBRATION_TAG: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    #[serde(rename = "excess_type1_percent")]
    ExcessType1,
    #[serde(rename = "power_percent")]
    Power,
}

/// One output row per (size pair, method, null cardinality, alpha).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub set_id: String,
    pub m: usize,
    pub n: usize,
    #[serde(with = "method_label")]
    pub method: Method,
    pub alpha: f64,
    pub metric_name: Metric,
    pub metric_value: f64,
    pub band_low: f64,
    pub band_high: f64,
    pub pair_count: usize,
    /// Null cardinality; empty for the normal approximation.
    pub mc_replicates: Option<usize>,
    pub seed: u64,
}

/// Parents actually used, after moment matching and calibration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolvedParents {
    pub parent_1: JohnsonSu,
    pub parent_2: JohnsonSu,
    /// Median shift added to the second parent (power studies).
    pub shift: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PValueSet {
    pub m: usize,
    pub n: usize,
    #[serde(with = "method_label")]
    pub method: Method,
    pub mc_replicates: Option<usize>,
    pub p_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub label: String,
    pub config: SimulationConfig,
    pub parents: ResolvedParents,
    pub rows: Vec<ResultRow>,
    /// Present only when the config asks to retain p-values.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub p_values: Vec<PValueSet>,
}

impl SimulationResult {
    pub fn row(&self, m: usize, n: usize, method: Method, mc_replicates: Option<usize>, alpha: f64) -> Option<&ResultRow> {
        self.rows.iter().find(|r| {
            r.m == m
                && r.n == n
                && r.method == method
                && r.mc_replicates == mc_replicates
                && (r.alpha - alpha).abs() < 1e-12
        })
    }
}

fn resolve(spec: &ParentSpec, family: &JohnsonSuFamily) -> Result<JohnsonSu> {
    match spec {
        ParentSpec::Explicit { params } => Ok(*params),
        ParentSpec::Moments { moments } => JohnsonSu::from_slice(&moment_match(family, moments)?),
        ParentSpec::DispersionDoubled { base } => {
            Ok(JohnsonSu::from_slice(&moment_match(family, base)?)?.dispersion_doubled())
        }
    }
}

/// Moment-matches (and, for power studies, calibrates) the configured parents.
pub fn resolve_parents(config: &SimulationConfig) -> Result<ResolvedParents> {
    let family = JohnsonSuFamily::default();
    let parent_1 = resolve(&config.parent_1, &family).map_err(|e| e.context("resolving parent 1"))?;
    let mut parent_2 = resolve(&config.parent_2, &family).map_err(|e| e.context("resolving parent 2"))?;
    let shift = match config.effect_size_target {
        Some(d) => {
            let seed = derive_seed(&[config.master_seed, label_seed(&config.label()), CALIBRATION_TAG]);
            let shift = shift_for_effect_size(&parent_1, d, seed).map_err(|e| e.context("calibrating effect size"))?;
            parent_2 = parent_2.shifted(shift);
            Some(shift)
        }
        None => None,
    };
    Ok(ResolvedParents { parent_1, parent_2, shift })
}

/// Seed of replicate `rep` at size-pair index `size_index`.
pub fn pair_seed(config: &SimulationConfig, size_index: usize, rep: usize) -> u64 {
    derive_seed(&[config.master_seed, label_seed(&config.label()), size_index as u64, rep as u64])
}

struct PairOutcome {
    normal: f64,
    /// One per entry of `config.mc_replicates`.
    mc: Vec<f64>,
}

#[allow(clippy::too_many_arguments)]
fn simulate_pair(
    parent_1: &Parent,
    parent_2: &Parent,
    family: &Arc<dyn DistributionFamily>,
    m: usize,
    n: usize,
    replicate_counts: &[usize],
    tail: Tail,
    seed: u64,
) -> Result<PairOutcome> {
    let mut rng = stream(seed, DATA_STREAM);
    let x = parent_1.sample(&mut rng, m)?;
    let y = parent_2.sample(&mut rng, n)?;
    let observed = rro_statistic(&x, &y);
    let fitted = fit_null_parents(&x, &y, family)?;
    let nulls = mc_null_nested(
        &fitted.parent_x,
        &fitted.parent_y,
        m,
        n,
        replicate_counts,
        derive_seed(&[seed, NULL_SEED_TAG]),
    )?;
    Ok(PairOutcome {
        normal: normal_pvalue(observed, tail),
        mc: nulls.iter().map(|xi| mc_pvalue(xi, observed.value, tail)).collect(),
    })
}

/// Runs every size pair of one simulation set.
///
/// Each replicate draws its sample pair from its own stream, fits both
/// parents, builds one nested null for all configured cardinalities, and
/// records the RRO-MC and RRO-N p-values. Results do not depend on the number
/// of worker threads.
pub fn run_simulation_set(config: &SimulationConfig) -> Result<SimulationResult> {
    config.validate()?;
    let label = config.label();
    let parents = resolve_parents(config)?;
    let parent_1 = Parent::from(parents.parent_1);
    let parent_2 = Parent::from(parents.parent_2);
    let family: Arc<dyn DistributionFamily> = Arc::new(JohnsonSuFamily::default());
    let power_study = config.effect_size_target.is_some();

    let mut rows = Vec::new();
    let mut retained = Vec::new();
    for (size_index, &(m, n)) in config.size_pairs.iter().enumerate() {
        let outcomes: Vec<PairOutcome> = (0..config.pair_count)
            .into_par_iter()
            .map(|rep| {
                simulate_pair(
                    &parent_1,
                    &parent_2,
                    &family,
                    m,
                    n,
                    &config.mc_replicates,
                    config.tail,
                    pair_seed(config, size_index, rep),
                )
                .map_err(|e| e.context(format!("set {label}, sizes ({m}, {n}), replicate {rep}")))
            })
            .collect::<Result<_>>()?;

        let mut sets: Vec<PValueSet> = config
            .mc_replicates
            .iter()
            .enumerate()
            .map(|(k, &b)| PValueSet {
                m,
                n,
                method: Method::Mc,
                mc_replicates: Some(b),
                p_values: outcomes.iter().map(|o| o.mc[k]).collect(),
            })
            .collect();
        sets.push(PValueSet {
            m,
            n,
            method: Method::Normal,
            mc_replicates: None,
            p_values: outcomes.iter().map(|o| o.normal).collect(),
        });

        for set in &sets {
            for &alpha in &config.alphas {
                let (excess_low, excess_high) = binomial_band(config.pair_count as u64, alpha, BAND_LEVEL)?;
                let (metric_name, metric_value, offset) = if power_study {
                    (Metric::Power, power(&set.p_values, alpha)?, 100.0 * alpha)
                } else {
                    (Metric::ExcessType1, excess_type1(&set.p_values, alpha)?, 0.0)
                };
                rows.push(ResultRow {
                    set_id: label.clone(),
                    m,
                    n,
                    method: set.method,
                    alpha,
                    metric_name,
                    metric_value,
                    band_low: excess_low + offset,
                    band_high: excess_high + offset,
                    pair_count: config.pair_count,
                    mc_replicates: set.mc_replicates,
                    seed: config.master_seed,
                });
            }
        }
        if config.retain_p_values {
            retained.extend(sets);
        }
    }
    Ok(SimulationResult {
        label,
        config: config.clone(),
        parents,
        rows,
        p_values: retained,
    })
}

mod method_label {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use crate::mc::Method;

    pub fn serialize<S: Serializer>(method: &Method, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(method.label())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Method, D::Error> {
        let s = String::deserialize(deserializer)?;
        [Method::Mc, Method::Normal, Method::Exact]
            .into_iter()
            .find(|m| m.label() == s)
            .ok_or_else(|| D::Error::custom(format!("unknown method label `{s}`")))
    }
}
