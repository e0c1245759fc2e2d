use rand::Rng;
use rand::distr::Open01;

use super::metrics::cliff_d_sorted;
use crate::dist::JohnsonSu;
use crate::error::{Error, Result};
use crate::optim::{minimize, ObjectiveSpec};
use crate::rng::{derive_seed, stream};

/// Size of each sample in the calibration reference pair.
pub const REFERENCE_SIZE: usize = 10_000;

/// Largest acceptable `|d - d_target|` after calibration.
pub const CALIBRATION_TOLERANCE: f64 = 1e-3;

/// Median shift `delta_m >= 0` that gives Cliff's d of `d_target` between two
/// reference samples from `params`, the second shifted up by `delta_m`.
///
/// The reference samples are stratified: draw `i` is the quantile at
/// `(i + U_i) / N`. This keeps the reference pair close to the parent so the
/// result barely depends on `seed`.
pub fn shift_for_effect_size(params: &JohnsonSu, d_target: f64, seed: u64) -> Result<f64> {
    if !(d_target > 0.0 && d_target < 1.0) {
        return Err(Error::domain(format!("effect size {d_target} outside (0, 1)")));
    }
    let first = stratified_sample(params, REFERENCE_SIZE, derive_seed(&[seed, 1]))?;
    let second = stratified_sample(params, REFERENCE_SIZE, derive_seed(&[seed, 2]))?;
    let objective = |v: &[f64]| {
        let d = cliff_d_sorted(&first, &second, v[0]);
        (d - d_target).powi(2)
    };
    let found = minimize(
        ObjectiveSpec::new(objective, vec![0.0])
            .constraint(|v| v[0] >= 0.0)
            .step(vec![params.moments().sd.max(f64::MIN_POSITIVE) * 0.1]),
    )?;
    let shift = found.argmin[0];
    let residual = (cliff_d_sorted(&first, &second, shift) - d_target).abs();
    if residual > CALIBRATION_TOLERANCE {
        return Err(Error::CalibrationFailed { shift, residual });
    }
    Ok(shift)
}

/// Sorted stratified sample of size `n`.
fn stratified_sample(params: &JohnsonSu, n: usize, seed: u64) -> Result<Vec<f64>> {
    let mut rng = stream(seed, 0);
    (0..n)
        .map(|i| {
            let u: f64 = rng.sample(Open01);
            params.quantile((i as f64 + u) / n as f64)
        })
        .collect()
}
