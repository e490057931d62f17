use super::train::{Design, PulseTrain};
use crate::error::{invalid, Result};
use crate::scalar::{Coefficient, Real};
use crate::spectra::{binomial, pq_from_r, r_from_coeffs};

/// Prouhet–Thue–Morse bits: `p_{2k} = p_k`, `p_{2k+1} = 1 − p_k`.
pub fn ptm_sequence(n: usize) -> Vec<usize> {
    (0..n).map(|i| (i.count_ones() % 2) as usize).collect()
}

/// PTM order with unit weights; `N = 2^{M+1} ≥ 4` gives null order `M`.
pub fn ptm_design<T: Real>(n: usize) -> Result<Design<T>> {
    if n < 4 || !n.is_power_of_two() {
        return invalid(format!("PTM length {n} must be a power of two >= 4"));
    }
    let m = n.trailing_zeros() as usize - 1;
    let train = PulseTrain::binary(ptm_sequence(n), vec![T::one(); n])?;
    Design::new(train, m)
}

fn alternating(n: usize) -> Vec<usize> {
    (0..n).map(|i| i % 2).collect()
}

/// Alternating order with `q_n = C(N−1, n)`; null order `N − 2`.
pub fn binomial_design<T: Real>(n: usize) -> Result<Design<T>> {
    if n < 3 {
        return invalid(format!("binomial design needs N >= 3, got {n}"));
    }
    let q = (0..n)
        .map(|k| T::from_f64_lossy(binomial(n - 1, k).as_f64()))
        .collect();
    Design::new(PulseTrain::binary(alternating(n), q)?, n - 2)
}

/// Alternating order with unit weights; null order 0.
pub fn conventional_design<T: Real>(n: usize) -> Result<Design<T>> {
    if n < 2 || !n.is_multiple_of(2) {
        return invalid(format!("conventional design needs an even N >= 2, got {n}"));
    }
    Design::new(PulseTrain::binary(alternating(n), vec![T::one(); n])?, 0)
}

/// `r = B_M·a` split into `(P, Q)`.
pub fn general_design<T: Real + Coefficient>(a: &[T], n: usize, m: usize) -> Result<Design<T>> {
    let r = r_from_coeffs(a, n, m)?;
    let (p, q) = pq_from_r(&r);
    Design::new(PulseTrain::binary(p, q)?, m)
}

/// Mixed-radix product of binary designs into a `D = 2^m`-ary design.
///
/// With `n = n_1 + N_1 n_2 + N_1 N_2 n_3 + …` (factor 1 fastest),
/// `P[n] = Σ_k 2^{k−1} P_k[n_k] mod D` and `Q[n] = Π_k Q_k[n_k]`.
pub fn compose_dary<T: Real>(factors: &[Design<T>]) -> Result<Design<T>> {
    let Some(first) = factors.first() else {
        return invalid("compose_dary needs at least one factor");
    };
    if let Some(bad) = factors.iter().find(|f| f.alphabet() != 2) {
        return invalid(format!(
            "factor has D = {}, expected binary",
            bad.alphabet()
        ));
    }
    if factors.len() == 1 {
        return Ok(first.clone());
    }
    if factors.len() >= usize::BITS as usize - 1 {
        return invalid("too many factors");
    }
    let d = 1usize << factors.len();
    let total = factors
        .iter()
        .try_fold(1usize, |acc, f| acc.checked_mul(f.len()))
        .filter(|&t| t <= crate::waveforms::MAX_SEQUENCE_LEN)
        .ok_or_else(|| crate::Error::Capacity("composed design is too long".into()))?;
    let mut p = vec![0usize; total];
    let mut q = vec![T::one(); total];
    for (idx, (pn, qn)) in p.iter_mut().zip(q.iter_mut()).enumerate() {
        let mut rest = idx;
        for (k, f) in factors.iter().enumerate() {
            let digit = rest % f.len();
            rest /= f.len();
            *pn += f.p()[digit] << k;
            *qn *= f.q()[digit];
        }
        *pn %= d;
    }
    if q.iter().all(|v| v.is_zero()) {
        return invalid("composed Q is all zero");
    }
    let declared = factors
        .iter()
        .map(Design::declared_order)
        .min()
        .unwrap_or(0);
    Design::new(PulseTrain::new(p, q, d)?, declared)
}
