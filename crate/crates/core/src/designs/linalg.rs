//! Small dense helpers for the max-SNR solver. Matrices are row-major `Vec<T>`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Solves `a·x = b` in place by LU with partial pivoting; `b` becomes `x`.
pub(crate) fn solve_in_place<T: Real>(a: &mut [T], b: &mut [T], n: usize) -> Result<()> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    for col in 0..n {
        let (piv, best) = (col..n)
            .map(|r| (r, a[r * n + col].abs()))
            .fold((col, -T::one()), |acc, x| if x.1 > acc.1 { x } else { acc });
        if !(best > T::zero()) {
            return Err(Error::InvalidArgument("singular linear system".into()));
        }
        if piv != col {
            for c in 0..n {
                a.swap(piv * n + c, col * n + c);
            }
            b.swap(piv, col);
        }
        let pivot = a[col * n + col];
        for r in col + 1..n {
            let f = a[r * n + col] / pivot;
            if f.is_zero() {
                continue;
            }
            a[r * n + col] = T::zero();
            for c in col + 1..n {
                let v = a[col * n + c];
                a[r * n + c] -= f * v;
            }
            let v = b[col];
            b[r] -= f * v;
        }
    }
    for col in (0..n).rev() {
        let mut acc = b[col];
        for c in col + 1..n {
            acc -= a[col * n + c] * b[c];
        }
        b[col] = acc / a[col * n + col];
    }
    Ok(())
}

pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub(crate) fn norm_inf<T: Real>(a: &[T]) -> T {
    a.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_solves_pivoted_system() {
        let mut a: Vec<f64> = vec![0.0, 2.0, 1.0, 1.0, 1.0, 0.0, 3.0, 0.0, 1.0];
        let mut b = vec![5.0, 3.0, 4.0];
        solve_in_place(&mut a, &mut b, 3).unwrap();
        let expect = [1.0, 2.0, 1.0];
        for (x, e) in b.iter().zip(expect) {
            assert!((x - e).abs() < 1e-12);
        }
    }

    #[test]
    fn lu_reports_singularity() {
        let mut a = vec![1.0, 2.0, 2.0, 4.0];
        let mut b = vec![1.0, 2.0];
        assert!(solve_in_place(&mut a, &mut b, 2).is_err());
    }

    #[test]
    fn generic_over_f32() {
        let mut a = vec![4.0f32, 1.0, 1.0, 3.0];
        let mut b = vec![1.0f32, 2.0];
        solve_in_place(&mut a, &mut b, 2).unwrap();
        assert!((4.0 * b[0] + b[1] - 1.0).abs() < 1e-6);
    }
}
