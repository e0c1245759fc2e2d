//! Monte-Carlo null distributions from fitted parents, tail p-values and
//! critical values, and the three test backends (Monte-Carlo, exact, normal).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::{fit_mle, DistributionFamily, Fit, Parent};
use crate::error::{Error, Result};
use crate::null::{NullDistribution, Provenance, Tail};
use crate::rng::stream;
use crate::rro::{
    exact_null_distribution_with_cap, extended_real, hodges_lehmann_shift, normal_pvalue, rro_statistic,
    standard_normal_quantile, statistic_unsorted, RroStatistic,
};
use crate::sample::Sample;

pub const DEFAULT_REPLICATES: usize = 10_000;
pub const MIN_REPLICATES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Mc,
    Normal,
    Exact,
}

impl Method {
    /// Short label used in tables.
    pub fn label(self) -> &'static str {
        match self {
            Method::Mc => "RRO-MC",
            Method::Normal => "RRO-N",
            Method::Exact => "RRO-EXACT",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Mc => "mc",
            Method::Normal => "normal",
            Method::Exact => "exact",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mc" => Ok(Method::Mc),
            "normal" => Ok(Method::Normal),
            "exact" => Ok(Method::Exact),
            other => Err(Error::domain(format!("unknown method `{other}`"))),
        }
    }
}

/// How tail counts become p-values.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PValueEstimator {
    /// `k / B`; may be exactly zero.
    #[default]
    Plain,
    /// `(k + 1) / (B + 1)`.
    Smoothed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McOptions {
    pub replicates: usize,
    pub seed: u64,
    pub estimator: PValueEstimator,
}

impl Default for McOptions {
    fn default() -> Self {
        McOptions {
            replicates: DEFAULT_REPLICATES,
            seed: 0,
            estimator: PValueEstimator::Plain,
        }
    }
}

/// Monte-Carlo null of the statistic for samples of sizes `m` and `n` drawn
/// from `parent_x` and `parent_y`.
///
/// Replicate `i` uses its own stream `(seed, i)`: first `m` draws from
/// `parent_x`, then `n` from `parent_y`. The result is therefore independent
/// of the rayon thread count, and the null for `B` replicates consists of the
/// first `B` replicates of any larger run with the same seed.
///
/// When both parents and both sizes coincide the null is symmetric about
/// zero; odd replicates are then the label-swapped (negated) copies of the
/// preceding even ones, which makes the simulated null exactly symmetric.
pub fn mc_null(
    parent_x: &Parent,
    parent_y: &Parent,
    m: usize,
    n: usize,
    replicates: usize,
    seed: u64,
) -> Result<NullDistribution> {
    check_replicates(replicates)?;
    let values = simulate_statistics(parent_x, parent_y, m, n, replicates, seed)?;
    NullDistribution::new(values, Provenance::MonteCarlo { seed, replicates })
}

/// Nulls for several replicate counts sharing one simulation of the largest.
pub fn mc_null_nested(
    parent_x: &Parent,
    parent_y: &Parent,
    m: usize,
    n: usize,
    replicate_counts: &[usize],
    seed: u64,
) -> Result<Vec<NullDistribution>> {
    let largest = replicate_counts.iter().copied().max().unwrap_or(0);
    for &b in replicate_counts {
        check_replicates(b)?;
    }
    let values = simulate_statistics(parent_x, parent_y, m, n, largest, seed)?;
    replicate_counts
        .iter()
        .map(|&b| NullDistribution::new(values[..b].to_vec(), Provenance::MonteCarlo { seed, replicates: b }))
        .collect()
}

fn check_replicates(replicates: usize) -> Result<()> {
    if replicates < MIN_REPLICATES {
        return Err(Error::domain(format!(
            "at least {MIN_REPLICATES} Monte-Carlo replicates required, got {replicates}"
        )));
    }
    Ok(())
}

/// Statistic values in replicate-index order.
fn simulate_statistics(
    parent_x: &Parent,
    parent_y: &Parent,
    m: usize,
    n: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if m == 0 || n == 0 {
        return Err(Error::domain("sample sizes must be positive"));
    }
    let mirrored = m == n && parent_x.same_distribution(parent_y);
    Ok((0..count)
        .into_par_iter()
        .with_min_len(256)
        .map_init(
            || (vec![0.0; m], vec![0.0; n]),
            |(xs, ys), i| {
                let (index, sign) = if mirrored && i % 2 == 1 { (i - 1, -1.0) } else { (i, 1.0) };
                let mut rng = stream(seed, index as u64);
                parent_x.sample_into(&mut rng, xs);
                parent_y.sample_into(&mut rng, ys);
                sign * statistic_unsorted(xs, ys).value
            },
        )
        .collect())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CriticalValues {
    #[serde(with = "extended_real::option")]
    pub left: Option<f64>,
    #[serde(with = "extended_real::option")]
    pub right: Option<f64>,
}

/// Critical values of `xi` at level `p`.
///
/// The right critical value is the smallest support point whose upper tail
/// proportion `n(xi >= c) / n(xi)` does not exceed the level; the left one is
/// the largest support point whose lower tail proportion does not. Two-sided
/// requests use `p / 2` in each tail. A side is `None` when no support point
/// qualifies.
pub fn critical_values(xi: &NullDistribution, p: f64, tail: Tail) -> CriticalValues {
    match tail {
        Tail::Right => CriticalValues { left: None, right: right_critical(xi, p) },
        Tail::Left => CriticalValues { left: left_critical(xi, p), right: None },
        Tail::Two => CriticalValues {
            left: left_critical(xi, p / 2.0),
            right: right_critical(xi, p / 2.0),
        },
    }
}

fn right_critical(xi: &NullDistribution, p: f64) -> Option<f64> {
    let values = xi.values();
    let total = values.len();
    let mut i = 0;
    while i < total {
        if (total - i) as f64 / total as f64 <= p {
            return Some(values[i]);
        }
        let v = values[i];
        while i < total && values[i] == v {
            i += 1;
        }
    }
    None
}

fn left_critical(xi: &NullDistribution, p: f64) -> Option<f64> {
    let values = xi.values();
    let total = values.len();
    let mut end = total;
    while end > 0 {
        if end as f64 / total as f64 <= p {
            return Some(values[end - 1]);
        }
        let v = values[end - 1];
        while end > 0 && values[end - 1] == v {
            end -= 1;
        }
    }
    None
}

/// Tail proportion of `xi` at the observed statistic, both tails counting equality.
pub fn mc_pvalue(xi: &NullDistribution, observed: f64, tail: Tail) -> f64 {
    mc_pvalue_with(xi, observed, tail, PValueEstimator::Plain)
}

pub fn mc_pvalue_with(xi: &NullDistribution, observed: f64, tail: Tail, estimator: PValueEstimator) -> f64 {
    let (left, right) = tail_pvalues(xi, observed, estimator);
    match tail {
        Tail::Left => left,
        Tail::Right => right,
        Tail::Two => two_sided(left, right),
    }
}

fn tail_pvalues(xi: &NullDistribution, observed: f64, estimator: PValueEstimator) -> (f64, f64) {
    let total = xi.cardinality() as f64;
    let ratio = |k: usize| match estimator {
        PValueEstimator::Plain => k as f64 / total,
        PValueEstimator::Smoothed => (k as f64 + 1.0) / (total + 1.0),
    };
    (ratio(xi.count_le(observed)), ratio(xi.count_ge(observed)))
}

fn two_sided(left: f64, right: f64) -> f64 {
    (2.0 * left.min(right)).min(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub method: Method,
    pub statistic: RroStatistic,
    pub p_left: f64,
    pub p_right: f64,
    pub p_two: f64,
    #[serde(with = "extended_real::option")]
    pub critical_left: Option<f64>,
    #[serde(with = "extended_real::option")]
    pub critical_right: Option<f64>,
    pub alpha: f64,
    pub tail: Tail,
    /// Size of the null multiset; absent for the normal backend.
    pub null_cardinality: Option<usize>,
    pub seed: Option<u64>,
    /// Hodges-Lehmann shift removed from `y` before fitting (Monte-Carlo only).
    pub shift: Option<f64>,
    pub fit_x: Option<Fit>,
    pub fit_y: Option<Fit>,
}

impl TestResult {
    /// p-value for the requested tail.
    pub fn p_value(&self) -> f64 {
        match self.tail {
            Tail::Left => self.p_left,
            Tail::Right => self.p_right,
            Tail::Two => self.p_two,
        }
    }

    pub fn rejects(&self) -> bool {
        self.p_value() < self.alpha
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("alpha {alpha} outside (0, 1)")))
    }
}

/// Evaluates an observed statistic against a null multiset.
pub fn test_against_null(
    statistic: RroStatistic,
    xi: &NullDistribution,
    alpha: f64,
    tail: Tail,
    estimator: PValueEstimator,
    method: Method,
) -> Result<TestResult> {
    check_alpha(alpha)?;
    let (p_left, p_right) = tail_pvalues(xi, statistic.value, estimator);
    let critical = critical_values(xi, alpha, tail);
    Ok(TestResult {
        method,
        statistic,
        p_left,
        p_right,
        p_two: two_sided(p_left, p_right),
        critical_left: critical.left,
        critical_right: critical.right,
        alpha,
        tail,
        null_cardinality: Some(xi.cardinality()),
        seed: match xi.provenance() {
            Provenance::MonteCarlo { seed, .. } => Some(seed),
            Provenance::Exact => None,
        },
        shift: None,
        fit_x: None,
        fit_y: None,
    })
}

/// Parents for the null: `x` as observed, `y` after removing the
/// Hodges-Lehmann shift so both share a central tendency.
#[derive(Debug, Clone)]
pub struct NullParents {
    pub shift: f64,
    pub fit_x: Fit,
    pub fit_y: Fit,
    pub parent_x: Parent,
    pub parent_y: Parent,
}

pub fn fit_null_parents(x: &Sample, y: &Sample, family: &Arc<dyn DistributionFamily>) -> Result<NullParents> {
    let shift = hodges_lehmann_shift(x, y);
    let aligned = y.shifted(shift);
    let fit_x = fit_mle(family.as_ref(), x).map_err(|e| e.context("fitting sample x"))?;
    let fit_y = fit_mle(family.as_ref(), &aligned).map_err(|e| e.context("fitting aligned sample y"))?;
    Ok(NullParents {
        shift,
        parent_x: Parent::new(family.clone(), fit_x.params.clone())?,
        parent_y: Parent::new(family.clone(), fit_y.params.clone())?,
        fit_x,
        fit_y,
    })
}

/// Robust rank-order test with a Monte-Carlo null from fitted parents.
///
/// `y` is aligned to `x` by the Hodges-Lehmann shift, both parents are fitted
/// by maximum likelihood, the null is simulated at the observed sizes, and
/// the observed statistic is computed from the original, unshifted samples.
pub fn rro_mc_test(
    x: &Sample,
    y: &Sample,
    family: &Arc<dyn DistributionFamily>,
    options: &McOptions,
    alpha: f64,
    tail: Tail,
) -> Result<TestResult> {
    check_alpha(alpha)?;
    let parents = fit_null_parents(x, y, family)?;
    let xi = mc_null(
        &parents.parent_x,
        &parents.parent_y,
        x.len(),
        y.len(),
        options.replicates,
        options.seed,
    )?;
    let mut result = test_against_null(rro_statistic(x, y), &xi, alpha, tail, options.estimator, Method::Mc)?;
    result.shift = Some(parents.shift);
    result.fit_x = Some(parents.fit_x);
    result.fit_y = Some(parents.fit_y);
    Ok(result)
}

/// Test against the exact permutation null (valid for continuous data).
pub fn rro_exact_test(x: &Sample, y: &Sample, alpha: f64, tail: Tail, cap: u64) -> Result<TestResult> {
    let xi = exact_null_distribution_with_cap(x.len(), y.len(), cap)?;
    test_against_null(rro_statistic(x, y), &xi, alpha, tail, PValueEstimator::Plain, Method::Exact)
}

/// Test with the standard normal approximation of the statistic.
pub fn rro_normal_test(x: &Sample, y: &Sample, alpha: f64, tail: Tail) -> Result<TestResult> {
    check_alpha(alpha)?;
    let statistic = rro_statistic(x, y);
    Ok(normal_result(statistic, alpha, tail))
}

pub(crate) fn normal_result(statistic: RroStatistic, alpha: f64, tail: Tail) -> TestResult {
    let p_left = normal_pvalue(statistic, Tail::Left);
    let p_right = normal_pvalue(statistic, Tail::Right);
    let (critical_left, critical_right) = match tail {
        Tail::Right => (None, Some(standard_normal_quantile(1.0 - alpha))),
        Tail::Left => (Some(standard_normal_quantile(alpha)), None),
        Tail::Two => {
            let z = standard_normal_quantile(1.0 - alpha / 2.0);
            (Some(-z), Some(z))
        }
    };
    TestResult {
        method: Method::Normal,
        statistic,
        p_left,
        p_right,
        p_two: two_sided(p_left, p_right),
        critical_left,
        critical_right,
        alpha,
        tail,
        null_cardinality: None,
        seed: None,
        shift: None,
        fit_x: None,
        fit_y: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{JohnsonSu, JohnsonSuFamily};
    use crate::rro::exact_null_distribution;

    fn null_of(values: Vec<f64>) -> NullDistribution {
        NullDistribution::new(values, Provenance::Exact).unwrap()
    }

    fn one_to_hundred() -> NullDistribution {
        null_of((1..=100).map(f64::from).collect())
    }

    #[test]
    fn critical_value_by_counting() {
        let xi = one_to_hundred();
        assert_eq!(critical_values(&xi, 0.05, Tail::Right).right, Some(96.0));
        assert_eq!(critical_values(&xi, 0.05, Tail::Left).left, Some(5.0));
        assert_eq!(critical_values(&xi, 0.005, Tail::Right).right, None);
        let two = critical_values(&xi, 0.1, Tail::Two);
        assert_eq!((two.left, two.right), (Some(5.0), Some(96.0)));
    }

    #[test]
    fn critical_value_skips_duplicated_threshold() {
        // tail at 3.0 is 3/5 (duplicates), at 4.0 is 1/5
        let xi = null_of(vec![1.0, 2.0, 3.0, 3.0, 4.0]);
        assert_eq!(critical_values(&xi, 0.5, Tail::Right).right, Some(4.0));
        assert_eq!(critical_values(&xi, 0.6, Tail::Right).right, Some(3.0));
    }

    #[test]
    fn pvalues_on_small_set() {
        let xi = null_of(vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert_eq!(mc_pvalue(&xi, 2.0, Tail::Right), 0.2);
        assert_eq!(mc_pvalue(&xi, 2.0, Tail::Left), 1.0);
        assert_eq!(mc_pvalue(&xi, 2.0, Tail::Two), 0.4);
        assert_eq!(mc_pvalue(&xi, f64::NEG_INFINITY, Tail::Left), 0.0);
        assert_eq!(mc_pvalue(&xi, f64::NEG_INFINITY, Tail::Right), 1.0);
        assert_eq!(mc_pvalue(&xi, -7.0, Tail::Left), 0.0);
        assert_eq!(mc_pvalue_with(&xi, 9.0, Tail::Right, PValueEstimator::Smoothed), 1.0 / 6.0);
    }

    #[test]
    fn exact_four_by_four_critical_values_match_scan() {
        let xi = exact_null_distribution(4, 4).unwrap();
        let total = xi.cardinality() as f64;
        let support = xi.support();
        let scan_right = support
            .iter()
            .copied()
            .filter(|&v| xi.count_ge(v) as f64 / total <= 0.05)
            .fold(None, |best: Option<f64>, v| Some(best.map_or(v, |b| b.min(v))));
        let scan_left = support
            .iter()
            .copied()
            .filter(|&v| xi.count_le(v) as f64 / total <= 0.05)
            .fold(None, |best: Option<f64>, v| Some(best.map_or(v, |b| b.max(v))));
        let cv = critical_values(&xi, 0.10, Tail::Two);
        assert_eq!(cv.right, scan_right);
        assert_eq!(cv.left, scan_left);
        assert!(cv.right.is_some());
    }

    #[test]
    fn normal_backend_reference_values() {
        let x = Sample::new(vec![1.0, 2.0, 3.0]).unwrap();
        let r = rro_normal_test(&x, &x, 0.05, Tail::Two).unwrap();
        assert_eq!(r.statistic.value, 0.0);
        assert_eq!(r.p_two, 1.0);
        let right = rro_normal_test(&x, &x, 0.05, Tail::Right).unwrap();
        assert!((right.critical_right.unwrap() - 1.6449).abs() < 1e-4);
        assert!(rro_normal_test(&x, &x, 1.5, Tail::Right).is_err());
    }

    #[test]
    fn identical_samples_have_unit_two_sided_p() {
        let fam: Arc<dyn DistributionFamily> = Arc::new(JohnsonSuFamily::default());
        let x = Sample::new(vec![0.3, -1.2, 2.2, 0.9, 1.4, -0.1, 0.05, 3.1]).unwrap();
        let options = McOptions { replicates: 500, seed: 3, ..Default::default() };
        let r = rro_mc_test(&x, &x, &fam, &options, 0.05, Tail::Two).unwrap();
        assert_eq!(r.statistic.value, 0.0);
        assert_eq!(r.p_two, 1.0);
        assert!(r.p_left + r.p_right >= 1.0);
        assert_eq!(r.null_cardinality, Some(500));
        let again = rro_mc_test(&x, &x, &fam, &options, 0.05, Tail::Two).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn shared_parent_equal_sizes_null_is_symmetric() {
        let parent = Parent::from(JohnsonSu::new(1.0, 0.5, 1.5, 0.0).unwrap());
        let xi = mc_null(&parent, &parent, 9, 9, 1000, 5).unwrap();
        assert_eq!(xi.negated().values(), xi.values());
        let other = Parent::from(JohnsonSu::new(2.0, 0.5, 1.5, 0.0).unwrap());
        let xi = mc_null(&parent, &other, 9, 9, 1000, 5).unwrap();
        assert_ne!(xi.negated().values(), xi.values());
    }

    #[test]
    fn nested_nulls_are_prefixes() {
        let parent = Parent::from(JohnsonSu::new(1.0, 0.5, 1.5, 0.0).unwrap());
        let nested = mc_null_nested(&parent, &parent, 5, 6, &[100, 400], 9).unwrap();
        let direct = mc_null(&parent, &parent, 5, 6, 100, 9).unwrap();
        assert_eq!(nested[0], direct);
        assert_eq!(nested[1].cardinality(), 400);
    }

    #[test]
    fn too_few_replicates() {
        let parent = Parent::from(JohnsonSu::standard());
        assert!(mc_null(&parent, &parent, 5, 5, 99, 0).is_err());
    }

    #[test]
    fn fit_failure_names_the_sample() {
        let fam: Arc<dyn DistributionFamily> = Arc::new(JohnsonSuFamily::default());
        let x = Sample::new(vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let y = Sample::new(vec![1.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
        let err = rro_mc_test(&x, &y, &fam, &McOptions::default(), 0.05, Tail::Two).unwrap_err();
        assert!(err.to_string().starts_with("fitting aligned sample y"), "{err}");
    }
}
