use super::from_placement_sums;
use crate::error::{Error, Result};
use crate::null::{NullDistribution, Provenance};

/// Default ceiling on the number of interleavings enumerated exactly.
pub const DEFAULT_ENUMERATION_CAP: u64 = 2_000_000;

/// `C(m + n, m)`, saturating at `u128::MAX`.
pub fn interleaving_count(m: usize, n: usize) -> u128 {
    let k = m.min(n) as u128;
    let total = (m + n) as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (total - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul(total - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Exact permutation null of the statistic for sizes `m` and `n`.
///
/// Under a common continuous parent every interleaving of the two samples'
/// ranks is equally likely, and the statistic depends only on that pattern.
pub fn exact_null_distribution(m: usize, n: usize) -> Result<NullDistribution> {
    exact_null_distribution_with_cap(m, n, DEFAULT_ENUMERATION_CAP)
}

pub fn exact_null_distribution_with_cap(m: usize, n: usize, cap: u64) -> Result<NullDistribution> {
    if m == 0 || n == 0 {
        return Err(Error::domain("exact null needs positive sample sizes"));
    }
    let required = interleaving_count(m, n);
    if required > cap as u128 {
        return Err(Error::EnumerationCapExceeded { required, cap });
    }
    let mut values = Vec::with_capacity(required as usize);
    // Enumerate positions of the smaller group; the other is the complement.
    let swap = n < m;
    let (small, large) = if swap { (n, m) } else { (m, n) };
    for_each_pattern(small, large, |sums| {
        let (sum_s, sq_s, sum_l, sq_l) = sums;
        let stat = if swap {
            from_placement_sums(m, n, sum_l, sq_l, sum_s, sq_s)
        } else {
            from_placement_sums(m, n, sum_s, sq_s, sum_l, sq_l)
        };
        values.push(stat.value);
    });
    NullDistribution::new(values, Provenance::Exact)
}

/// Calls `f` with placement sums `(sum_a, sq_a, sum_b, sq_b)` for every way of
/// choosing `k` of `k + l` ordered positions for group `a`.
fn for_each_pattern(k: usize, l: usize, mut f: impl FnMut((f64, f64, f64, f64))) {
    let total = k + l;
    let mut pos: Vec<usize> = (0..k).collect();
    loop {
        let (mut sum_a, mut sq_a, mut sum_b, mut sq_b) = (0.0, 0.0, 0.0, 0.0);
        let mut prev_end = 0usize;
        for (i, &p) in pos.iter().enumerate() {
            // b-elements before this a-element
            let below = (p - i) as f64;
            sum_a += below;
            sq_a += below * below;
            // b-elements in the gap before position p have i a-elements below them
            let gap = (p - prev_end) as f64;
            sum_b += i as f64 * gap;
            sq_b += (i * i) as f64 * gap;
            prev_end = p + 1;
        }
        let gap = (total - prev_end) as f64;
        sum_b += k as f64 * gap;
        sq_b += (k * k) as f64 * gap;
        f((sum_a, sq_a, sum_b, sq_b));

        // next combination in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if pos[i] < l + i {
                break;
            }
            if i == 0 {
                return;
            }
        }
        pos[i] += 1;
        for j in i + 1..k {
            pos[j] = pos[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(interleaving_count(3, 3), 20);
        assert_eq!(interleaving_count(4, 4), 70);
        assert_eq!(interleaving_count(1, 1), 2);
        assert_eq!(interleaving_count(12, 12), 2_704_156);
        assert_eq!(interleaving_count(200, 200), u128::MAX);
    }

    #[test]
    fn singleton_sizes_are_two_separations() {
        let xi = exact_null_distribution(1, 1).unwrap();
        assert_eq!(xi.values(), &[f64::NEG_INFINITY, f64::INFINITY]);
    }

    #[test]
    fn three_by_three_contains_alternating_patterns() {
        let xi = exact_null_distribution(3, 3).unwrap();
        assert_eq!(xi.cardinality(), 20);
        let u = 3.0 / (2.0 * 6.0f64.sqrt());
        assert!(xi.values().iter().any(|&v| (v - u).abs() < 1e-15));
        assert!(xi.values().iter().any(|&v| (v + u).abs() < 1e-15));
        assert_eq!(xi.count_le(f64::NEG_INFINITY), 1);
        assert_eq!(xi.count_ge(f64::INFINITY), 1);
    }

    #[test]
    fn unequal_sizes_enumerate_from_either_side() {
        let a = exact_null_distribution(2, 5).unwrap();
        let b = exact_null_distribution(5, 2).unwrap();
        assert_eq!(a.cardinality(), 21);
        assert_eq!(b.negated().values(), a.values());
    }

    #[test]
    fn cap_is_enforced() {
        let err = exact_null_distribution_with_cap(10, 10, 1000).unwrap_err();
        assert!(matches!(err, Error::EnumerationCapExceeded { required: 184_756, cap: 1000 }));
    }
}
