//! Training-set sizes. All logarithms are natural.

use crate::error::{invalid, Result};

fn check_unit(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("{name} = {x} must lie in (0, 1)")))
    }
}

fn check_counts(sigma: usize, k: usize) -> Result<()> {
    if sigma == 0 || k == 0 {
        return Err(invalid("sigma and k must be at least 1"));
    }
    Ok(())
}

/// `⌈(σk/ε)·ln(σk/δ)⌉`: enough examples for error below `eps` with
/// probability at least `1 − delta`.
pub fn sample_size_pac(eps: f64, delta: f64, sigma: usize, k: usize) -> Result<u64> {
    check_unit("eps", eps)?;
    check_unit("delta", delta)?;
    check_counts(sigma, k)?;
    let sk = (sigma * k) as f64;
    Ok(((sk / eps) * (sk / delta).ln()).ceil().max(1.0) as u64)
}

/// `⌈(k/(εβ))·ln(σk/δ)⌉`: the same guarantee when up to a `beta` fraction of
/// unknown vertices may be mispredicted.
pub fn sample_size_pmac(eps: f64, delta: f64, beta: f64, sigma: usize, k: usize) -> Result<u64> {
    check_unit("eps", eps)?;
    check_unit("delta", delta)?;
    check_unit("beta", beta)?;
    check_counts(sigma, k)?;
    let sk = (sigma * k) as f64;
    Ok(((k as f64 / (eps * beta)) * (sk / delta).ln()).ceil().max(1.0) as u64)
}

/// The hypothesis-counting bound `(1/ε)·(σk·ln d_avg + ln(1/δ))`.
///
/// Undefined for `davg ≤ 1`, which is rejected.
pub fn sample_size_generic(eps: f64, delta: f64, sigma: usize, k: usize, davg: f64) -> Result<f64> {
    check_unit("eps", eps)?;
    check_unit("delta", delta)?;
    check_counts(sigma, k)?;
    if davg.is_nan() || davg <= 1.0 || davg.is_infinite() {
        return Err(invalid(format!("average degree {davg} must exceed 1")));
    }
    Ok(((sigma * k) as f64 * davg.ln() + (1.0 / delta).ln()) / eps)
}
