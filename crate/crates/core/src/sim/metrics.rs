use statrs::distribution::{Binomial, DiscreteCDF};

use crate::error::{Error, Result};
use crate::sample::Sample;

/// Cliff's dominance statistic `(#(s2 > s1) - #(s2 < s1)) / (m n)`.
pub fn cliff_d(s1: &Sample, s2: &Sample) -> f64 {
    let mut a = s1.values().to_vec();
    let mut b = s2.values().to_vec();
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    cliff_d_sorted(&a, &b, 0.0)
}

/// Cliff's d for sorted inputs with `shift` added to every element of `b`.
pub(crate) fn cliff_d_sorted(a: &[f64], b: &[f64], shift: f64) -> f64 {
    let (mut below, mut not_above) = (0usize, 0usize);
    let mut dominance: i64 = 0;
    for &v in b {
        let v = v + shift;
        while below < a.len() && a[below] < v {
            below += 1;
        }
        while not_above < a.len() && a[not_above] <= v {
            not_above += 1;
        }
        // a below v minus a above v
        dominance += below as i64 - (a.len() - not_above) as i64;
    }
    dominance as f64 / (a.len() as f64 * b.len() as f64)
}

/// Number of p-values strictly below `alpha`.
pub fn rejection_count(p_values: &[f64], alpha: f64) -> Result<usize> {
    if p_values.is_empty() {
        return Err(Error::domain("no p-values"));
    }
    if let Some((i, &p)) = p_values.iter().enumerate().find(|(_, p)| !(0.0..=1.0).contains(*p)) {
        return Err(Error::domain(format!("p-value {p} at index {i} outside [0, 1]")));
    }
    Ok(p_values.iter().filter(|&&p| p < alpha).count())
}

/// Rejection rate minus `alpha`, in percent.
pub fn excess_type1(p_values: &[f64], alpha: f64) -> Result<f64> {
    let k = rejection_count(p_values, alpha)?;
    Ok((k as f64 / p_values.len() as f64 - alpha) * 100.0)
}

/// Rejection rate in percent.
pub fn power(p_values: &[f64], alpha: f64) -> Result<f64> {
    let k = rejection_count(p_values, alpha)?;
    Ok(k as f64 / p_values.len() as f64 * 100.0)
}

/// Equal-tailed acceptance region, at two-sided `test_level`, of the
/// rejection count of `trials` tests at nominal level `alpha`, expressed in
/// excess-percent units.
///
/// The lower end is the smallest count `k` with `P(K <= k) > test_level / 2`
/// and the upper end the largest `k` with `P(K >= k) > test_level / 2`.
pub fn binomial_band(trials: u64, alpha: f64, test_level: f64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::domain("binomial band needs at least one trial"));
    }
    if !(alpha > 0.0 && alpha < 1.0) || !(test_level > 0.0 && test_level < 1.0) {
        return Err(Error::domain(format!(
            "alpha {alpha} and test level {test_level} must lie in (0, 1)"
        )));
    }
    let dist = Binomial::new(alpha, trials).map_err(|e| Error::domain(e.to_string()))?;
    let tail = test_level / 2.0;
    let low = first_true(0, trials, |k| dist.cdf(k) > tail);
    // P(K >= k) = sf(k - 1); the predicate is monotone decreasing in k.
    let high = first_true(0, trials + 1, |k| k > 0 && dist.sf(k - 1) <= tail) - 1;
    let to_excess = |k: u64| (k as f64 / trials as f64 - alpha) * 100.0;
    Ok((to_excess(low), to_excess(high)))
}

/// Smallest `k` in `[lo, hi]` where a monotone predicate holds (`hi` if none).
fn first_true(mut lo: u64, mut hi: u64, pred: impl Fn(u64) -> bool) -> u64 {
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Half-width of a band, for combining independent noise sources.
pub fn band_half_width(band: (f64, f64)) -> f64 {
    0.5 * (band.1 - band.0)
}
