use super::map::AmbiguityMap;
use crate::error::{invalid, Result};
use crate::scalar::Real;

fn check_weights<T: Real>(q: &[T]) -> Result<()> {
    if q.is_empty() || q.iter().all(|v| v.is_zero()) {
        return invalid("Q must not be empty or all zero");
    }
    if q.iter().any(|v| !(*v >= T::zero()) || !v.is_finite()) {
        return invalid("Q entries must be finite and non-negative");
    }
    Ok(())
}

/// `β_Q = ‖q‖₂² / ‖q‖₁²`.
pub fn effective_bandwidth<T: Real>(q: &[T]) -> Result<T> {
    check_weights(q)?;
    let l1: T = q.iter().copied().sum();
    let l2: T = q.iter().map(|&v| v * v).sum();
    Ok(l2 / (l1 * l1))
}

/// `1/β_Q`, the coherent gain of the weighted pulse train.
pub fn snr_gain<T: Real>(q: &[T]) -> Result<T> {
    Ok(T::one() / effective_bandwidth(q)?)
}

/// `ρ = (L·σ_b² / N₀)·snr_gain(Q)`.
pub fn output_snr<T: Real>(q: &[T], chip_len: usize, sigma_b2: T, n0: T) -> Result<T> {
    if !(sigma_b2 > T::zero()) || !(n0 > T::zero()) {
        return invalid("sigma_b^2 and N0 must be positive");
    }
    Ok(T::from_usize_lossy(chip_len) * sigma_b2 / n0 * snr_gain(q)?)
}

/// `γ(θ) = |χ(0, 0)|² / max_{k≠0} |χ(k, θ)|²`; `+∞` when every sidelobe is exactly zero.
pub fn peak_sidelobe_ratio<T: Real>(map: &AmbiguityMap<T>, theta: T) -> Result<T> {
    let Some(t) = map.grid().index_of(theta) else {
        return invalid("theta is not on the map's Doppler grid");
    };
    let side = map.max_sidelobe(t);
    if side.is_zero() {
        return Ok(T::infinity());
    }
    let peak = map.reference();
    Ok((peak * peak) / (side * side))
}

/// `κ(θ) = (γ(θ)^{−1} + ρ^{−1})^{−1}`.
pub fn kappa<T: Real>(map: &AmbiguityMap<T>, theta: T, rho: T) -> Result<T> {
    if !(rho > T::zero()) {
        return invalid("rho must be positive");
    }
    let gamma = peak_sidelobe_ratio(map, theta)?;
    Ok(T::one() / (gamma.recip() + rho.recip()))
}
