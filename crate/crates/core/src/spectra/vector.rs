use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::scalar::{Coefficient, Real};

/// Signed weights `r_n = (−1)^{p_n} q_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct DesignVector<T> {
    r: Vec<T>,
}

impl<T: Coefficient> DesignVector<T> {
    pub fn new(r: Vec<T>) -> Result<Self> {
        if r.is_empty() {
            return invalid("design vector must have length >= 1");
        }
        Ok(Self { r })
    }

    pub fn values(&self) -> &[T] {
        &self.r
    }

    pub fn into_values(self) -> Vec<T> {
        self.r
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.r.iter().all(Zero::is_zero)
    }

    pub fn l1_norm(&self) -> T {
        self.r.iter().fold(T::zero(), |acc, v| acc + v.abs())
    }

    /// `Σ n^m r_n` with `0^0 = 1`.
    pub fn moment(&self, m: usize) -> T {
        let mut acc = T::zero();
        for (n, v) in self.r.iter().enumerate() {
            acc = acc + pow(T::from_usize(n), m) * v.clone();
        }
        acc
    }

    /// Largest `M` with every moment `m ≤ M` vanishing, `None` if `μ_0` already fails.
    ///
    /// Exact types use a zero test and ignore `tol`. Floating types accept
    /// `|Σ n^m r_n| ≤ tol·Σ |n^m r_n|`, i.e. the moment must cancel to `tol`
    /// relative to the size of its terms. An all-zero vector yields `None`.
    pub fn null_order(&self, tol: f64) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let n = self.r.len();
        let mut order = None;
        for m in 0..n {
            let vanishes = if T::EXACT {
                self.moment(m).is_zero()
            } else {
                let terms = self
                    .r
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (i as f64 / n as f64).powi(m as i32) * v.as_f64());
                cancels(terms, tol)
            };
            if !vanishes {
                break;
            }
            order = Some(m);
        }
        order
    }

    /// [`null_order`](Self::null_order) at the type's default tolerance.
    pub fn null_order_default(&self) -> Option<usize> {
        self.null_order(T::NULL_TOLERANCE_F64)
    }

    pub fn map<U: Coefficient>(&self, f: impl Fn(&T) -> U) -> DesignVector<U> {
        DesignVector {
            r: self.r.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> DesignVector<f64> {
        self.map(Coefficient::as_f64)
    }
}

/// `|Σ t| ≤ tol·Σ|t|`.
pub(crate) fn cancels(terms: impl Iterator<Item = f64>, tol: f64) -> bool {
    let (sum, abs) = terms.fold((0.0, 0.0), |(s, a), t| (s + t, a + t.abs()));
    sum.abs() <= tol * abs
}

fn pow<T: Coefficient>(base: T, exp: usize) -> T {
    let mut out = T::one();
    for _ in 0..exp {
        out = out * base.clone();
    }
    out
}

/// `r_n = (−1)^{p_n} q_n` for binary `P`.
pub fn r_from_pq<T: Coefficient>(p: &[usize], q: &[T]) -> Result<DesignVector<T>> {
    if p.len() != q.len() {
        return invalid(format!(
            "P has length {}, Q has length {}",
            p.len(),
            q.len()
        ));
    }
    if let Some(bad) = p.iter().find(|&&s| s > 1) {
        return invalid(format!("P symbol {bad} is not binary"));
    }
    if q.iter().any(|v| v.is_negative()) {
        return invalid("Q has a negative entry");
    }
    let r = p
        .iter()
        .zip(q)
        .map(|(&s, v)| if s == 1 { -v.clone() } else { v.clone() })
        .collect();
    DesignVector::new(r)
}

/// `p_n = (1 − sgn r_n)/2` with `sgn 0 = 1`, `q_n = |r_n|`.
pub fn pq_from_r<T: Coefficient>(r: &DesignVector<T>) -> (Vec<usize>, Vec<T>) {
    r.values()
        .iter()
        .map(|v| (usize::from(v.is_negative()), v.abs()))
        .unzip()
}

/// `S(θ) = Σ r_n e^{jnθ}` at each grid point, summed in order `n = 0..N−1`.
pub fn spectrum_eval<T: Real>(r: &[T], thetas: &[T]) -> Vec<Complex<T>> {
    thetas
        .par_iter()
        .map(|&theta| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (n, &v) in r.iter().enumerate() {
                let phase = T::from_usize_lossy(n) * theta;
                acc += Complex::new(phase.cos(), phase.sin()) * v;
            }
            acc
        })
        .collect()
}

/// CSV rows `theta,re,im,db` with a −300 dB floor.
pub fn spectrum_csv<T: Real>(thetas: &[T], values: &[Complex<T>]) -> String {
    let mut out = String::from("theta,re,im,db\n");
    for (t, v) in thetas.iter().zip(values) {
        let db = magnitude_db(v.norm().to_f64().unwrap_or(0.0));
        out.push_str(&format!(
            "{:.17e},{:.17e},{:.17e},{:.6}\n",
            t.to_f64().unwrap_or(f64::NAN),
            v.re.to_f64().unwrap_or(f64::NAN),
            v.im.to_f64().unwrap_or(f64::NAN),
            db
        ));
    }
    out
}

/// `20·log10(x)` clamped below at −300 dB.
pub fn magnitude_db(x: f64) -> f64 {
    if x > 0.0 {
        (20.0 * x.log10()).max(-300.0)
    } else {
        -300.0
    }
}

/// Integer `q` as exact `BigInt`s when every entry is integral.
pub(crate) fn exact_integers<T: Real>(values: &[T]) -> Option<Vec<BigInt>> {
    values
        .iter()
        .map(|&v| crate::scalar::integral_to_bigint(v))
        .collect()
}

pub(crate) fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn ints(v: &[i64]) -> DesignVector<BigInt> {
        DesignVector::new(v.iter().map(|&x| BigInt::from(x)).collect()).unwrap()
    }

    #[test]
    fn r_from_pq_examples() {
        let r = r_from_pq(&[0, 1], &[1.0, 1.0]).unwrap();
        assert_eq!(r.values(), &[1.0, -1.0]);
        let ptm = [0, 1, 1, 0, 1, 0, 0, 1];
        let r = r_from_pq(&ptm, &[1.0; 8]).unwrap();
        assert_eq!(r.values(), &[1.0, -1.0, -1.0, 1.0, -1.0, 1.0, 1.0, -1.0]);
        let r = r_from_pq(&[0, 1, 0, 1], &[1.0, 3.0, 3.0, 1.0]).unwrap();
        assert_eq!(r.values(), &[1.0, -3.0, 3.0, -1.0]);
    }

    #[test]
    fn r_from_pq_rejects_bad_input() {
        assert!(r_from_pq(&[0, 2], &[1.0, 1.0]).is_err());
        assert!(r_from_pq(&[0], &[1.0, 1.0]).is_err());
        assert!(r_from_pq(&[0, 1], &[1.0, -1.0]).is_err());
    }

    #[test]
    fn pq_from_r_sign_convention() {
        let (p, q) = pq_from_r(&DesignVector::new(vec![1.0, -1.0]).unwrap());
        assert_eq!((p, q), (vec![0, 1], vec![1.0, 1.0]));
        let (p, q) = pq_from_r(&DesignVector::new(vec![0.0, -2.0]).unwrap());
        assert_eq!((p, q), (vec![0, 1], vec![0.0, 2.0]));
    }

    #[test]
    fn moments_and_null_orders() {
        assert_eq!(ints(&[1, -1, -1, 1]).moment(1), BigInt::zero());
        let ptm = ints(&[1, -1, -1, 1, -1, 1, 1, -1]);
        for m in 0..3 {
            assert!(ptm.moment(m).is_zero());
        }
        assert!(!ptm.moment(3).is_zero());
        assert_eq!(ptm.null_order(0.0), Some(2));
        assert_eq!(ints(&[1, 1]).null_order(0.0), None);
        assert_eq!(ints(&[0, 0]).null_order(0.0), None);
        assert_eq!(ints(&[5]).moment(0), BigInt::from(5));
    }

    #[test]
    fn float_and_exact_orders_agree() {
        let b: Vec<i64> = (0..16)
            .map(|n| {
                let c = binomial(15, n);
                let c: i64 = c.try_into().unwrap();
                if n % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect();
        assert_eq!(ints(&b).null_order(0.0), Some(14));
        let f = DesignVector::new(b.iter().map(|&x| x as f64).collect()).unwrap();
        assert_eq!(f.null_order_default(), Some(14));
        let rat = ints(&b).map(|v| BigRational::from_integer(v.clone()));
        assert_eq!(rat.null_order(0.0), Some(14));
    }

    #[test]
    fn f32_null_order_uses_looser_tolerance() {
        let r: DesignVector<f32> =
            DesignVector::new(vec![1.0, -1.0, -1.0, 1.0, -1.0, 1.0, 1.0, -1.0]).unwrap();
        assert_eq!(r.null_order_default(), Some(2));
    }

    #[test]
    fn spectrum_examples() {
        let s = spectrum_eval(&[1.0, -1.0], &[0.0]);
        assert_eq!(s[0], Complex::new(0.0, 0.0));
        let s = spectrum_eval(&[1.0f64], &[0.3, -2.0]);
        assert!(s
            .iter()
            .all(|v| (v - Complex::new(1.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn binomial_spectrum_closed_form() {
        let n = 9;
        let r: Vec<f64> = (0..n)
            .map(|k| {
                let c: f64 = binomial(n - 1, k).as_f64();
                if k % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect();
        let thetas: Vec<f64> = (0..64).map(|i| -3.0 + 0.09 * i as f64).collect();
        let s = spectrum_eval(&r, &thetas);
        for (t, v) in thetas.iter().zip(&s) {
            let expect = (Complex::new(1.0, 0.0) - Complex::from_polar(1.0, *t)).powi(n as i32 - 1);
            assert!((v - expect).norm() <= 1e-12 * expect.norm().max(1e-300) + 1e-12);
        }
    }

    #[test]
    fn db_floor() {
        assert_eq!(magnitude_db(0.0), -300.0);
        assert_eq!(magnitude_db(1e-200), -300.0);
        assert!((magnitude_db(10.0) - 20.0).abs() < 1e-12);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let csv = spectrum_csv(&[0.0, 1.0], &spectrum_eval(&[1.0, -1.0], &[0.0, 1.0]));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "theta,re,im,db");
        assert!(lines[1].ends_with(",-300.000000"));
    }
}
