use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::vector::{binomial, DesignVector};
use crate::error::{invalid, Error, Result};
use crate::scalar::Coefficient;

/// Integer basis of the length-`N` vectors whose moments `0..=M` vanish.
///
/// `b` is `N × (N−M−1)` with `b[n][j] = (−1)^n · C(j+M+1, n)`, so column `j`
/// holds the coefficients of `(1 − z)^{j+M+1}`. `v` is the `(M+1) × N`
/// Vandermonde matrix `v[m][n] = n^m` whose null space the columns span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NullSubspaceBasis {
    n: usize,
    m: usize,
    b: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl NullSubspaceBasis {
    pub fn length(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn dimension(&self) -> usize {
        self.n - self.m - 1
    }

    /// Row-major `N × (N−M−1)`.
    pub fn b(&self) -> &[Vec<BigInt>] {
        &self.b
    }

    /// Row-major `(M+1) × N`.
    pub fn v(&self) -> &[Vec<BigInt>] {
        &self.v
    }

    pub fn column(&self, j: usize) -> DesignVector<BigInt> {
        DesignVector::new(self.b.iter().map(|row| row[j].clone()).collect())
            .expect("basis has N >= 2 rows")
    }

    /// `V·B`, row-major `(M+1) × (N−M−1)`.
    pub fn vb_product(&self) -> Vec<Vec<BigInt>> {
        let cols = self.dimension();
        self.v
            .iter()
            .map(|vrow| {
                (0..cols)
                    .map(|j| {
                        vrow.iter()
                            .zip(&self.b)
                            .fold(BigInt::zero(), |acc, (a, brow)| acc + a * &brow[j])
                    })
                    .collect()
            })
            .collect()
    }

    /// Exact check that every column of `B` lies in `null(V)`.
    pub fn verify(&self) -> bool {
        self.vb_product().iter().flatten().all(Zero::is_zero)
    }

    /// Exact rank of `B` by fraction-free elimination.
    pub fn rank(&self) -> usize {
        exact_rank(self.b.clone())
    }
}

pub fn basis_matrix(n: usize, m: usize) -> Result<NullSubspaceBasis> {
    if n < 2 || m + 2 > n {
        return Err(Error::InfeasibleOrder {
            order: m,
            length: n,
        });
    }
    let cols = n - m - 1;
    let b = (0..n)
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let c = binomial(j + m + 1, row);
                    if row % 2 == 0 {
                        c
                    } else {
                        -c
                    }
                })
                .collect()
        })
        .collect();
    let v = (0..=m)
        .map(|p| {
            (0..n)
                .map(|col| {
                    if p == 0 {
                        BigInt::one()
                    } else {
                        BigInt::from(col).pow(p as u32)
                    }
                })
                .collect()
        })
        .collect();
    Ok(NullSubspaceBasis { n, m, b, v })
}

/// `r = B·a` for the order-`M` basis of length `N`.
pub fn r_from_coeffs<T: Coefficient>(a: &[T], n: usize, m: usize) -> Result<DesignVector<T>> {
    let basis = basis_matrix(n, m)?;
    if a.len() != basis.dimension() {
        return invalid(format!(
            "coefficient vector has length {}, expected N-M-1 = {}",
            a.len(),
            basis.dimension()
        ));
    }
    if a.iter().all(Zero::is_zero) {
        return invalid("coefficient vector is all zero");
    }
    let r = basis
        .b
        .iter()
        .map(|row| {
            row.iter().zip(a).fold(T::zero(), |acc, (bij, aj)| {
                acc + T::from_bigint(bij) * aj.clone()
            })
        })
        .collect();
    DesignVector::new(r)
}

/// Bareiss elimination; exact for integer matrices.
pub(crate) fn exact_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = (&a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c]) / &prev;
                a[r][c] = v;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_basis() {
        let b = basis_matrix(4, 2).unwrap();
        assert_eq!(b.dimension(), 1);
        assert_eq!(b.column(0).values(), big(&[1, -3, 3, -1]).as_slice());
        assert!(b.verify());
        assert_eq!(b.rank(), 1);
    }

    #[test]
    fn infeasible_orders() {
        assert!(matches!(
            basis_matrix(4, 3),
            Err(Error::InfeasibleOrder { .. })
        ));
        assert!(basis_matrix(1, 0).is_err());
        assert!(basis_matrix(2, 0).is_ok());
    }

    #[test]
    fn columns_have_order_at_least_m() {
        let b = basis_matrix(10, 3).unwrap();
        for j in 0..b.dimension() {
            assert!(b.column(j).null_order(0.0).unwrap() >= 3);
        }
        assert_eq!(b.rank(), 6);
    }

    #[test]
    fn coefficient_examples() {
        let r = r_from_coeffs(&[BigInt::one()], 8, 6).unwrap();
        assert_eq!(r.null_order(0.0), Some(6));
        let r = r_from_coeffs(&big(&[1, 0, 0, 0, 0]), 8, 2).unwrap();
        assert_eq!(r.values(), big(&[1, -3, 3, -1, 0, 0, 0, 0]).as_slice());
        assert!((0..3).all(|m| r.moment(m).is_zero()));
        let r = r_from_coeffs(&big(&[1, 1]), 6, 3).unwrap();
        assert_eq!(r.values(), big(&[2, -9, 16, -14, 6, -1]).as_slice());
        assert!(r_from_coeffs(&big(&[0, 0]), 6, 3).is_err());
        assert!(r_from_coeffs(&big(&[1]), 6, 3).is_err());
    }

    #[test]
    fn float_coefficients() {
        let r = r_from_coeffs(&[0.5f64, -0.25], 6, 3).unwrap();
        assert!(r.null_order_default().unwrap() >= 3);
    }

    #[test]
    fn rank_of_dependent_rows() {
        let a = vec![big(&[1, 2, 3]), big(&[2, 4, 6]), big(&[0, 1, 1])];
        assert_eq!(exact_rank(a), 2);
    }
}
