use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

use super::vector::exact_integers;
use crate::error::{invalid, Result};
use crate::scalar::Real;

/// One channel of a `D`-ary design: `S_r(θ) = Σ ω^{r p_n} q_n e^{jnθ}`, `ω = e^{j2π/D}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DArySpectrumInput<T> {
    p: Vec<usize>,
    q: Vec<T>,
    d: usize,
    channel: usize,
}

pub(crate) fn check_alphabet<T: Real>(p: &[usize], q: &[T], d: usize) -> Result<()> {
    if d < 2 || !d.is_power_of_two() {
        return invalid(format!("alphabet size D = {d} is not a power of two >= 2"));
    }
    if p.len() != q.len() {
        return invalid(format!(
            "P has length {}, Q has length {}",
            p.len(),
            q.len()
        ));
    }
    if p.is_empty() {
        return invalid("design must have length >= 1");
    }
    if let Some(bad) = p.iter().find(|&&s| s >= d) {
        return invalid(format!("P symbol {bad} is outside 0..{d}"));
    }
    if q.iter().any(|v| !(*v >= T::zero()) || !v.is_finite()) {
        return invalid("Q entries must be finite and nonnegative");
    }
    Ok(())
}

impl<T: Real> DArySpectrumInput<T> {
    pub fn new(p: Vec<usize>, q: Vec<T>, d: usize, channel: usize) -> Result<Self> {
        check_alphabet(&p, &q, d)?;
        if channel == 0 || channel >= d {
            return invalid(format!("channel {channel} is outside 1..{d}"));
        }
        Ok(Self { p, q, d, channel })
    }

    pub fn p(&self) -> &[usize] {
        &self.p
    }

    pub fn q(&self) -> &[T] {
        &self.q
    }

    pub fn alphabet(&self) -> usize {
        self.d
    }

    pub fn channel(&self) -> usize {
        self.channel
    }

    fn exponent(&self, n: usize) -> usize {
        (self.channel * self.p[n]) % self.d
    }
}

/// `ω^k` for `ω = e^{j2π/D}`; quarter turns are returned exactly.
pub fn omega_power<T: Real>(d: usize, k: i64) -> Complex<T> {
    let k = k.rem_euclid(d as i64) as usize;
    if (4 * k).is_multiple_of(d) {
        let (re, im) = match 4 * k / d {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        };
        return Complex::new(T::from_f64_lossy(re), T::from_f64_lossy(im));
    }
    let angle = T::TAU() * T::from_usize_lossy(k) / T::from_usize_lossy(d);
    Complex::new(angle.cos(), angle.sin())
}

/// `Σ ω^{r p_n} q_n n^m`, `0^0 = 1`.
pub fn dary_moment<T: Real>(input: &DArySpectrumInput<T>, m: usize) -> Complex<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for (n, &q) in input.q.iter().enumerate() {
        let w = omega_power::<T>(input.d, input.exponent(n) as i64);
        acc += w * (q * T::from_usize_lossy(n).powi(m as i32));
    }
    acc
}

/// `S_r(θ)` over a grid; summation order `n = 0..N−1`.
pub fn dary_spectrum_eval<T: Real>(input: &DArySpectrumInput<T>, thetas: &[T]) -> Vec<Complex<T>> {
    let weights: Vec<Complex<T>> = (0..input.q.len())
        .map(|n| omega_power::<T>(input.d, input.exponent(n) as i64) * input.q[n])
        .collect();
    thetas
        .par_iter()
        .map(|&theta| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (n, w) in weights.iter().enumerate() {
                let phase = T::from_usize_lossy(n) * theta;
                acc += w * Complex::new(phase.cos(), phase.sin());
            }
            acc
        })
        .collect()
}

/// Element of `Z[ω]` for `D = 2^m`, as coefficients of `1, ω, …, ω^{D/2−1}`
/// (using `ω^{D/2} = −1`). Zero iff every coefficient is zero.
fn add_omega_power(acc: &mut [BigInt], d: usize, k: usize, value: &BigInt) {
    let half = d / 2;
    let k = k % d;
    if k < half {
        acc[k] += value;
    } else {
        acc[k - half] -= value;
    }
}

fn channel_null_order<T: Real>(input: &DArySpectrumInput<T>, tol: f64) -> Option<usize> {
    let n = input.q.len();
    if input.q.iter().all(|v| v.is_zero()) {
        return None;
    }
    let exact = exact_integers(&input.q);
    let mut order = None;
    for m in 0..n {
        let vanishes = match &exact {
            Some(q) => {
                let mut acc = vec![BigInt::zero(); (input.d / 2).max(1)];
                for (i, qi) in q.iter().enumerate() {
                    let w = qi * BigInt::from(i).pow(m as u32);
                    add_omega_power(&mut acc, input.d, input.exponent(i), &w);
                }
                acc.iter().all(Zero::is_zero)
            }
            None => {
                let mut acc = Complex::new(0.0f64, 0.0);
                let mut size = 0.0;
                for (i, qi) in input.q.iter().enumerate() {
                    let w = omega_power::<f64>(input.d, input.exponent(i) as i64);
                    let t = qi.to_f64().unwrap_or(f64::NAN) * (i as f64 / n as f64).powi(m as i32);
                    acc += w * t;
                    size += t.abs();
                }
                acc.norm() <= tol * size
            }
        };
        if !vanishes {
            break;
        }
        order = Some(m);
    }
    order
}

/// Null order of every channel `r = 1..D−1`, in channel order.
///
/// Integer `Q` is tested exactly in `Z[ω]`; otherwise `|μ_m| ≤ tol·Σ_n q_n n^m`.
pub fn dary_channel_null_orders<T: Real>(
    p: &[usize],
    q: &[T],
    d: usize,
    tol: f64,
) -> Result<Vec<Option<usize>>> {
    check_alphabet(p, q, d)?;
    (1..d)
        .map(|r| {
            let input = DArySpectrumInput::new(p.to_vec(), q.to_vec(), d, r)?;
            Ok(channel_null_order(&input, tol))
        })
        .collect()
}

/// Minimum channel null order; `None` if some channel has none.
pub fn dary_null_order<T: Real>(p: &[usize], q: &[T], d: usize, tol: f64) -> Result<Option<usize>> {
    let orders = dary_channel_null_orders(p, q, d, tol)?;
    Ok(orders
        .into_iter()
        .try_fold(usize::MAX, |acc, o| o.map(|v| acc.min(v))))
}

/// For `D = 2^m` and `r = 2^{m−k}·ℓ` with `ℓ` odd, returns `2^{k−1}`, the
/// multiplier `c` with `ω^{c·r} = −1`.
pub fn sign_flip_multiplier(d: usize, r: usize) -> Result<usize> {
    if d < 2 || !d.is_power_of_two() {
        return invalid(format!("alphabet size D = {d} is not a power of two >= 2"));
    }
    if r == 0 || r >= d {
        return invalid(format!("channel {r} is outside 1..{d}"));
    }
    let m = d.trailing_zeros();
    let k = m - r.trailing_zeros();
    Ok(1 << (k - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{r_from_pq, DesignVector};

    const EX4_P: [usize; 16] = [0, 1, 0, 1, 2, 3, 2, 3, 0, 1, 0, 1, 2, 3, 2, 3];
    const EX4_Q: [f64; 16] = [
        1., 3., 3., 1., 3., 9., 9., 3., 3., 9., 9., 3., 1., 3., 3., 1.,
    ];

    #[test]
    fn example_four_moments() {
        for r in 1..4 {
            let input = DArySpectrumInput::new(EX4_P.to_vec(), EX4_Q.to_vec(), 4, r).unwrap();
            for m in 0..3 {
                assert_eq!(dary_moment(&input, m).norm(), 0.0, "r={r} m={m}");
            }
        }
        let orders = dary_channel_null_orders(&EX4_P, &EX4_Q, 4, 1e-10).unwrap();
        assert_eq!(orders, vec![Some(2), Some(2), Some(2)]);
        let nonzero = (1..4).any(|r| {
            let input = DArySpectrumInput::new(EX4_P.to_vec(), EX4_Q.to_vec(), 4, r).unwrap();
            dary_moment(&input, 3).norm() > 1.0
        });
        assert!(nonzero);
    }

    #[test]
    fn float_path_matches_exact_path() {
        let q: Vec<f64> = EX4_Q.iter().map(|v| v * 0.1).collect();
        assert_eq!(dary_null_order(&EX4_P, &q, 4, 1e-10).unwrap(), Some(2));
        assert_eq!(dary_null_order(&EX4_P, &EX4_Q, 4, 1e-10).unwrap(), Some(2));
    }

    #[test]
    fn binary_reduces_to_design_vector() {
        let p = [0, 1, 1, 0, 1, 0, 0, 1];
        let q: [f64; 8] = [1.0, 2.0, 0.5, 1.0, 3.0, 1.0, 1.0, 2.0];
        let r = r_from_pq(&p, &q).unwrap();
        let input = DArySpectrumInput::new(p.to_vec(), q.to_vec(), 2, 1).unwrap();
        for m in 0..5 {
            let a = dary_moment(&input, m);
            assert!((a.re - r.moment(m)).abs() <= 1e-9 * r.moment(m).abs().max(1.0));
            assert_eq!(a.im, 0.0);
        }
        let ptm = DesignVector::new(vec![1.0, -1.0, -1.0, 1.0, -1.0, 1.0, 1.0, -1.0]).unwrap();
        assert_eq!(
            dary_null_order(&p, &[1.0; 8], 2, 1e-10).unwrap(),
            ptm.null_order_default()
        );
    }

    #[test]
    fn rejects_bad_alphabets() {
        assert!(DArySpectrumInput::new(vec![0, 1], vec![1.0, 1.0], 3, 1).is_err());
        assert!(DArySpectrumInput::new(vec![0, 4], vec![1.0, 1.0], 4, 1).is_err());
        assert!(DArySpectrumInput::new(vec![0, 1], vec![1.0, -1.0], 4, 1).is_err());
        assert!(DArySpectrumInput::new(vec![0, 1], vec![1.0, 1.0], 4, 0).is_err());
        assert!(dary_null_order(&[0, 1], &[1.0, 1.0], 6, 1e-10).is_err());
    }

    #[test]
    fn sign_flip_exhaustive() {
        for m in 1..=4u32 {
            let d = 1usize << m;
            for r in 1..d {
                let c = sign_flip_multiplier(d, r).unwrap();
                assert_eq!((c * r) % d, d / 2, "D={d} r={r}");
                let w = omega_power::<f64>(d, (c * r) as i64);
                assert_eq!(w, Complex::new(-1.0, 0.0));
            }
        }
    }

    #[test]
    fn spectrum_at_zero_is_moment_zero() {
        let input = DArySpectrumInput::new(EX4_P.to_vec(), EX4_Q.to_vec(), 4, 1).unwrap();
        let s = dary_spectrum_eval(&input, &[0.0]);
        assert!(s[0].norm() < 1e-12);
    }
}
