use num_complex::Complex;
use rayon::prelude::*;

use super::grid::DopplerGrid;
use super::map::{AmbiguityMap, MimoAmbiguity};
use crate::designs::PulseTrain;
use crate::error::{invalid, Result};
use crate::scalar::Real;
use crate::spectra::omega_power;
use crate::waveforms::{
    cross_correlation_all, ComplementarySet, Gaussian, GolayPair, ParaunitaryMatrix, UnimodularSeq,
};

fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

fn gaussian<T: Real>(g: Gaussian) -> Complex<T> {
    Complex::new(
        T::from_f64_lossy(g.re as f64),
        T::from_f64_lossy(g.im as f64),
    )
}

fn phasor<T: Real>(n: usize, theta: T) -> Complex<T> {
    let a = T::from_usize_lossy(n) * theta;
    Complex::new(a.cos(), a.sin())
}

/// `S_r(θ) = Σ_n ω^{r p_n} q_n e^{jnθ}` for `r = 0..D−1`, indexed `[θ][r]`.
fn channel_spectra<T: Real>(train: &PulseTrain<T>, thetas: &[T]) -> Vec<Vec<Complex<T>>> {
    let d = train.alphabet();
    let weights: Vec<Vec<Complex<T>>> = (0..d)
        .map(|r| {
            train
                .p()
                .iter()
                .zip(train.q())
                .map(|(&p, &q)| omega_power::<T>(d, (r * p) as i64) * q)
                .collect()
        })
        .collect();
    thetas
        .par_iter()
        .map(|&theta| {
            let phasors: Vec<Complex<T>> = (0..train.len()).map(|n| phasor(n, theta)).collect();
            weights
                .iter()
                .map(|w| {
                    w.iter()
                        .zip(&phasors)
                        .fold(zero(), |acc, (&a, &b)| acc + a * b)
                })
                .collect()
        })
        .collect()
}

/// `scale · Σ_terms S_r(θ)·coef[k]`, laid out one row per delay bin.
fn combine<T: Real>(
    spectra: &[Vec<Complex<T>>],
    terms: &[(usize, Vec<Complex<T>>)],
    scale: T,
    bins: usize,
) -> Vec<Complex<T>> {
    let columns: Vec<Vec<Complex<T>>> = spectra
        .par_iter()
        .map(|s| {
            (0..bins)
                .map(|b| {
                    terms
                        .iter()
                        .fold(zero(), |acc, (r, coef)| acc + s[*r] * coef[b])
                        * scale
                })
                .collect()
        })
        .collect();
    let width = spectra.len();
    let mut values = vec![zero(); bins * width];
    for (t, col) in columns.into_iter().enumerate() {
        for (b, v) in col.into_iter().enumerate() {
            values[b * width + t] = v;
        }
    }
    values
}

fn impulse<T: Real>(l: usize, height: T) -> Vec<Complex<T>> {
    let mut v = vec![zero(); 2 * l - 1];
    v[l - 1] = Complex::new(height, T::zero());
    v
}

fn reference<T: Real>(train: &PulseTrain<T>, l: usize) -> T {
    T::from_usize_lossy(l) * train.q_sum()
}

/// `χ(k, θ) = ½[C_x + C_y]·Σ q_n e^{jnθ} − ½[C_x − C_y]·Σ (−1)^{p_n} q_n e^{jnθ}`.
///
/// Symbol `p_n = 1` transmits `x`, `p_n = 0` transmits `y`.
pub fn cross_ambiguity<T: Real>(
    train: &PulseTrain<T>,
    pair: &GolayPair,
    grid: &DopplerGrid<T>,
) -> Result<AmbiguityMap<T>> {
    if train.alphabet() != 2 {
        return invalid(format!(
            "binary ambiguity needs D = 2, train has D = {}",
            train.alphabet()
        ));
    }
    let l = pair.len();
    let cx = cross_correlation_all(pair.x(), pair.x());
    let cy = cross_correlation_all(pair.y(), pair.y());
    let sum: Vec<Complex<T>> = cx.iter().zip(&cy).map(|(&a, &b)| gaussian(a + b)).collect();
    let diff: Vec<Complex<T>> = cx
        .iter()
        .zip(&cy)
        .map(|(&a, &b)| -gaussian::<T>(a - b))
        .collect();
    let spectra = channel_spectra(train, grid.thetas());
    let half = T::one() / (T::one() + T::one());
    let values = combine(&spectra, &[(0, sum), (1, diff)], half, 2 * l - 1);
    Ok(AmbiguityMap::from_parts(
        l,
        grid.clone(),
        values,
        reference(train, l),
    ))
}

/// `Δ_r[k] = Σ_{d=0}^{D−1} ω^{−rd} c_d[k]` for `r = 1..D−1`.
fn deltas<T: Real>(corr: &[Vec<Gaussian>], d: usize) -> Vec<(usize, Vec<Complex<T>>)> {
    (1..d)
        .map(|r| {
            let bins = corr[0].len();
            let delta = (0..bins)
                .map(|b| {
                    corr.iter().enumerate().fold(zero(), |acc, (s, c)| {
                        acc + omega_power::<T>(d, -((r * s) as i64)) * gaussian::<T>(c[b])
                    })
                })
                .collect();
            (r, delta)
        })
        .collect()
}

fn check_dary<T: Real>(train: &PulseTrain<T>, size: usize) -> Result<()> {
    if train.alphabet() != size {
        return invalid(format!(
            "train has D = {} but the waveform set has {size} members",
            train.alphabet()
        ));
    }
    Ok(())
}

pub(crate) fn dary_values<T: Real>(
    train: &PulseTrain<T>,
    set: &ComplementarySet,
    thetas: &[T],
) -> Vec<Complex<T>> {
    let (d, l) = (set.size(), set.chip_len());
    let corr: Vec<Vec<Gaussian>> = set
        .members()
        .iter()
        .map(|s| cross_correlation_all(s, s))
        .collect();
    let mut terms = vec![(0, impulse(l, T::from_usize_lossy(d * l)))];
    terms.extend(deltas(&corr, d));
    let spectra = channel_spectra(train, thetas);
    combine(
        &spectra,
        &terms,
        T::one() / T::from_usize_lossy(d),
        2 * l - 1,
    )
}

/// `χ(k, θ) = (1/D)(D·L·δ[k]·S_0(θ) + Σ_{r≥1} S_r(θ)·Δ_r[k])`, where member `d`
/// of the set is transmitted when `p_n = d`.
pub fn cross_ambiguity_dary<T: Real>(
    train: &PulseTrain<T>,
    set: &ComplementarySet,
    grid: &DopplerGrid<T>,
) -> Result<AmbiguityMap<T>> {
    check_dary(train, set.size())?;
    let l = set.chip_len();
    let values = dary_values(train, set, grid.thetas());
    Ok(AmbiguityMap::from_parts(
        l,
        grid.clone(),
        values,
        reference(train, l),
    ))
}

/// Matrix form of [`cross_ambiguity_dary`]: column `d` of `S` is transmitted
/// when `p_n = d`, and `Δ_r` is built from the column autocorrelation matrices.
pub fn mimo_cross_ambiguity<T: Real>(
    train: &PulseTrain<T>,
    s: &ParaunitaryMatrix,
    grid: &DopplerGrid<T>,
) -> Result<MimoAmbiguity<T>> {
    check_dary(train, s.size())?;
    let (d, l) = (s.size(), s.chip_len());
    let spectra = channel_spectra(train, grid.thetas());
    let scale = T::one() / T::from_usize_lossy(d);
    let mut entries = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let corr: Vec<Vec<Gaussian>> = (0..d)
                .map(|c| cross_correlation_all(s.entry(i, c), s.entry(j, c)))
                .collect();
            let mut terms = if i == j {
                vec![(0, impulse(l, T::from_usize_lossy(d * l)))]
            } else {
                Vec::new()
            };
            terms.extend(deltas(&corr, d));
            let values = combine(&spectra, &terms, scale, 2 * l - 1);
            entries.push(AmbiguityMap::from_parts(
                l,
                grid.clone(),
                values,
                reference(train, l),
            ));
        }
    }
    Ok(MimoAmbiguity::from_entries(d, entries))
}

/// `Σ_n q_n e^{jnθ} Σ_ℓ a_n[ℓ]·conj(b_n[ℓ−k])`, term by term.
fn direct<'a, T: Real>(
    train: &PulseTrain<T>,
    seqs: impl Fn(usize) -> (&'a UnimodularSeq, &'a UnimodularSeq) + Sync,
    l: usize,
    grid: &DopplerGrid<T>,
) -> Vec<Complex<T>> {
    let li = l as i64;
    let columns: Vec<Vec<Complex<T>>> = grid
        .thetas()
        .par_iter()
        .map(|&theta| {
            (-(li - 1)..li)
                .map(|k| {
                    let mut acc = zero();
                    for (n, (&p, &q)) in train.p().iter().zip(train.q()).enumerate() {
                        let (a, b) = seqs(p);
                        let w = phasor(n, theta) * q;
                        for ell in k.max(0)..(li + k).min(li) {
                            let chip = a.elements()[ell as usize].to_complex::<T>()
                                * b.elements()[(ell - k) as usize].conj().to_complex::<T>();
                            acc += w * chip;
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let width = grid.len();
    let mut values = vec![zero(); (2 * l - 1) * width];
    for (t, col) in columns.into_iter().enumerate() {
        for (b, v) in col.into_iter().enumerate() {
            values[b * width + t] = v;
        }
    }
    values
}

/// Direct pulse-by-pulse, chip-by-chip evaluation of the binary map.
pub fn cross_ambiguity_oracle<T: Real>(
    train: &PulseTrain<T>,
    pair: &GolayPair,
    grid: &DopplerGrid<T>,
) -> Result<AmbiguityMap<T>> {
    if train.alphabet() != 2 {
        return invalid(format!(
            "binary ambiguity needs D = 2, train has D = {}",
            train.alphabet()
        ));
    }
    let l = pair.len();
    let pick = |p: usize| {
        let s = if p == 1 { pair.x() } else { pair.y() };
        (s, s)
    };
    let values = direct(train, pick, l, grid);
    Ok(AmbiguityMap::from_parts(
        l,
        grid.clone(),
        values,
        reference(train, l),
    ))
}

/// Direct evaluation of the `D`-ary map.
pub fn cross_ambiguity_dary_oracle<T: Real>(
    train: &PulseTrain<T>,
    set: &ComplementarySet,
    grid: &DopplerGrid<T>,
) -> Result<AmbiguityMap<T>> {
    check_dary(train, set.size())?;
    let l = set.chip_len();
    let values = direct(train, |p| (set.member(p), set.member(p)), l, grid);
    Ok(AmbiguityMap::from_parts(
        l,
        grid.clone(),
        values,
        reference(train, l),
    ))
}

/// Direct evaluation of every entry of the MIMO map.
pub fn mimo_cross_ambiguity_oracle<T: Real>(
    train: &PulseTrain<T>,
    s: &ParaunitaryMatrix,
    grid: &DopplerGrid<T>,
) -> Result<MimoAmbiguity<T>> {
    check_dary(train, s.size())?;
    let (d, l) = (s.size(), s.chip_len());
    let mut entries = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let values = direct(train, |p| (s.entry(i, p), s.entry(j, p)), l, grid);
            entries.push(AmbiguityMap::from_parts(
                l,
                grid.clone(),
                values,
                reference(train, l),
            ));
        }
    }
    Ok(MimoAmbiguity::from_entries(d, entries))
}
