//! Placements, the robust rank-order statistic, Hodges-Lehmann alignment,
//! exact permutation nulls, and the standard-normal reference.

mod exact;
mod normal;
mod shift;

pub use exact::{exact_null_distribution, exact_null_distribution_with_cap, interleaving_count, DEFAULT_ENUMERATION_CAP};
pub use normal::{normal_pvalue, standard_normal_cdf, standard_normal_quantile};
pub use shift::{align_samples, hodges_lehmann_shift};

use serde::{Deserialize, Serialize};

use crate::sample::Sample;

/// Placements of one sample within another.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacementSummary {
    /// One entry per element, in input order. Ties count one half.
    pub placements: Vec<f64>,
    pub mean_placement: f64,
    /// Sum of squared deviations of the placements from their mean.
    pub variability_index: f64,
}

/// Value of the robust rank-order statistic.
///
/// When the samples are completely separated the studentizing denominator is
/// zero; `value` is then `+inf` or `-inf` with the sign of the numerator and
/// `degenerate` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RroStatistic {
    #[serde(with = "extended_real")]
    pub value: f64,
    pub degenerate: bool,
}

/// Placements of every element of `a` among the elements of `b`.
pub fn placements(a: &Sample, b: &Sample) -> PlacementSummary {
    let mut sorted = b.values().to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let placements: Vec<f64> = a
        .values()
        .iter()
        .map(|&v| {
            let below = sorted.partition_point(|&w| w < v);
            let not_above = sorted.partition_point(|&w| w <= v);
            below as f64 + 0.5 * (not_above - below) as f64
        })
        .collect();
    let (sum, sum_sq) = placements
        .iter()
        .fold((0.0, 0.0), |(s, q), &p| (s + p, q + p * p));
    let len = placements.len() as f64;
    PlacementSummary {
        mean_placement: sum / len,
        variability_index: variability(len, sum, sum_sq),
        placements,
    }
}

/// Robust rank-order statistic of `x` against `y`.
///
/// Positive values mean `x` tends to lie above `y`.
pub fn rro_statistic(x: &Sample, y: &Sample) -> RroStatistic {
    let mut xs = x.values().to_vec();
    let mut ys = y.values().to_vec();
    statistic_unsorted(&mut xs, &mut ys)
}

/// Sorts both buffers in place and evaluates the statistic.
pub(crate) fn statistic_unsorted(xs: &mut [f64], ys: &mut [f64]) -> RroStatistic {
    xs.sort_unstable_by(f64::total_cmp);
    ys.sort_unstable_by(f64::total_cmp);
    statistic_sorted(xs, ys)
}

/// Statistic for two ascending slices.
pub(crate) fn statistic_sorted(xs: &[f64], ys: &[f64]) -> RroStatistic {
    let (sum_x, sq_x) = placement_sums(xs, ys);
    let (sum_y, sq_y) = placement_sums(ys, xs);
    from_placement_sums(xs.len(), ys.len(), sum_x, sq_x, sum_y, sq_y)
}

/// Sum and sum of squares of the placements of sorted `a` within sorted `b`.
fn placement_sums(a: &[f64], b: &[f64]) -> (f64, f64) {
    let (mut lo, mut hi) = (0usize, 0usize);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for &v in a {
        while lo < b.len() && b[lo] < v {
            lo += 1;
        }
        if hi < lo {
            hi = lo;
        }
        while hi < b.len() && b[hi] <= v {
            hi += 1;
        }
        let p = lo as f64 + 0.5 * (hi - lo) as f64;
        sum += p;
        sum_sq += p * p;
    }
    (sum, sum_sq)
}

// Placements are multiples of 1/2, so `len * sum_sq - sum^2` is exact and the
// only rounding is the final division.
fn variability(len: f64, sum: f64, sum_sq: f64) -> f64 {
    ((len * sum_sq - sum * sum) / len).max(0.0)
}

pub(crate) fn from_placement_sums(
    m: usize,
    n: usize,
    sum_x: f64,
    sq_x: f64,
    sum_y: f64,
    sq_y: f64,
) -> RroStatistic {
    let (mf, nf) = (m as f64, n as f64);
    let mean_x = sum_x / mf;
    let mean_y = sum_y / nf;
    // m * mean_x - n * mean_y, written to stay exactly antisymmetric.
    let numerator = sum_x - sum_y;
    let radicand = variability(mf, sum_x, sq_x) + variability(nf, sum_y, sq_y) + mean_x * mean_y;
    if radicand == 0.0 {
        debug_assert!(numerator != 0.0);
        RroStatistic {
            value: f64::INFINITY.copysign(numerator),
            degenerate: true,
        }
    } else {
        RroStatistic {
            value: numerator / (2.0 * radicand.sqrt()),
            degenerate: false,
        }
    }
}

/// Serde helper that writes infinities as the strings `"inf"` / `"-inf"`,
/// since JSON has no literal for them.
pub mod extended_real {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(value: &f64, serializer: S) -> Result<S::Ok, S::Error> {
        if value.is_finite() {
            serializer.serialize_f64(*value)
        } else if *value > 0.0 {
            serializer.serialize_str("inf")
        } else if *value < 0.0 {
            serializer.serialize_str("-inf")
        } else {
            serializer.serialize_str("nan")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<f64, D::Error> {
        match Repr::deserialize(deserializer)? {
            Repr::Number(v) => Ok(v),
            Repr::Text(s) => match s.as_str() {
                "inf" | "+inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("not an extended real: {other}"))),
            },
        }
    }

    pub mod option {
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(value: &Option<f64>, serializer: S) -> Result<S::Ok, S::Error> {
            match value {
                Some(v) => super::serialize(v, serializer),
                None => serializer.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Option<f64>, D::Error> {
            #[derive(Deserialize)]
            struct Wrap(#[serde(with = "super")] f64);
            Ok(Option::<Wrap>::deserialize(deserializer)?.map(|w| w.0))
        }
    }
}
