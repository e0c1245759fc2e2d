use crate::sample::Sample;

/// Hodges-Lehmann shift: the median of all pairwise differences `y_j - x_i`.
///
/// Even counts average the two central order statistics.
pub fn hodges_lehmann_shift(x: &Sample, y: &Sample) -> f64 {
    let mut diffs: Vec<f64> = y
        .values()
        .iter()
        .flat_map(|&yj| x.values().iter().map(move |&xi| yj - xi))
        .collect();
    let len = diffs.len();
    let mid = len / 2;
    let (lower, upper, _) = diffs.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    if len % 2 == 1 {
        upper
    } else {
        let below = lower.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (below + upper)
    }
}

/// `y` shifted so that its Hodges-Lehmann shift relative to `x` is zero.
pub fn align_samples(x: &Sample, y: &Sample) -> Sample {
    y.shifted(hodges_lehmann_shift(x, y))
}
