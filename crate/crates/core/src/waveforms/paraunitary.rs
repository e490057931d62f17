use num_complex::Complex;

use super::golay::{ComplementarySet, GolayPair};
use super::sequence::{cross_correlation, reverse_conjugate, Gaussian, UnimodularSeq};
use crate::error::{invalid, Error, Result};

/// Largest `K` accepted by [`paraunitary`].
pub const MAX_PARAUNITARY_ORDER: u32 = 8;

/// `D×D` matrix of length-`L` sequences with `Σ_ℓ S[ℓ] S[ℓ−k]^H = D·L·I·δ[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParaunitaryMatrix {
    size: usize,
    entries: Vec<UnimodularSeq>,
}

impl ParaunitaryMatrix {
    /// `rows[i][j]` is the entry in row `i`, column `j`. Validated exactly.
    pub fn new(rows: Vec<Vec<UnimodularSeq>>) -> Result<Self> {
        let size = rows.len();
        if size == 0 {
            return invalid("paraunitary matrix must be at least 1x1");
        }
        if rows.iter().any(|r| r.len() != size) {
            return invalid("paraunitary matrix must be square");
        }
        let len = rows[0][0].len();
        if rows.iter().flatten().any(|s| s.len() != len) {
            return invalid("paraunitary entries differ in length");
        }
        let m = Self {
            size,
            entries: rows.into_iter().flatten().collect(),
        };
        let residual = m.residual();
        if residual != 0.0 {
            return invalid(format!(
                "matrix is not paraunitary (max residual {residual})"
            ));
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn chip_len(&self) -> usize {
        self.entries[0].len()
    }

    pub fn entry(&self, row: usize, col: usize) -> &UnimodularSeq {
        &self.entries[row * self.size + col]
    }

    /// Column `d` as a scalar complementary set (rows top to bottom).
    pub fn column_set(&self, d: usize) -> ComplementarySet {
        ComplementarySet::new_unchecked((0..self.size).map(|i| self.entry(i, d).clone()).collect())
    }

    /// Row `i` as a scalar complementary set.
    pub fn row_set(&self, i: usize) -> ComplementarySet {
        ComplementarySet::new_unchecked((0..self.size).map(|d| self.entry(i, d).clone()).collect())
    }

    /// Lagged Gram matrix `Σ_ℓ S[ℓ] S[ℓ−k]^H`, row-major.
    pub fn gram(&self, k: i64) -> Vec<Gaussian> {
        let d = self.size;
        let mut out = vec![Complex::new(0, 0); d * d];
        for i in 0..d {
            for j in 0..d {
                out[i * d + j] = (0..d)
                    .map(|c| cross_correlation(self.entry(i, c), self.entry(j, c), k))
                    .sum();
            }
        }
        out
    }

    /// Max entry magnitude of `gram(k) − D·L·I·δ[k]` over all lags.
    pub fn residual(&self) -> f64 {
        let d = self.size;
        let l = self.chip_len() as i64;
        let mut worst = 0i64;
        for k in -(l - 1)..l {
            let g = self.gram(k);
            for i in 0..d {
                for j in 0..d {
                    let mut v = g[i * d + j];
                    if k == 0 && i == j {
                        v -= Complex::new(d as i64 * l, 0);
                    }
                    worst = worst.max(v.norm_sqr());
                }
            }
        }
        (worst as f64).sqrt()
    }

    /// One matrix row per line, entries separated by `;`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.size {
            let cells: Vec<String> = (0..self.size)
                .map(|j| self.entry(i, j).to_csv_line())
                .collect();
            out.push_str(&cells.join(";"));
            out.push('\n');
        }
        out
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|line| line.split(';').map(UnimodularSeq::parse_csv_line).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        Self::new(rows)
    }
}

/// `S_{2^K}` from `S_2 = [[x, −ỹ], [y, x̃]]` and `S_{2D} = [[S, S], [S̃, −S̃]]`,
/// where `S̃` reverse-conjugates every entry in place.
pub fn paraunitary(order: u32, base: &GolayPair) -> Result<ParaunitaryMatrix> {
    if order == 0 {
        return invalid("paraunitary order K must be >= 1");
    }
    if order > MAX_PARAUNITARY_ORDER {
        return Err(Error::Capacity(format!(
            "paraunitary order {order} exceeds {MAX_PARAUNITARY_ORDER}"
        )));
    }
    let (x, y) = (base.x(), base.y());
    let mut size = 2;
    let mut entries = vec![
        x.clone(),
        reverse_conjugate(y).negated(),
        y.clone(),
        reverse_conjugate(x),
    ];
    for _ in 1..order {
        let tilde: Vec<UnimodularSeq> = entries.iter().map(reverse_conjugate).collect();
        let next_size = size * 2;
        let mut next = Vec::with_capacity(next_size * next_size);
        for i in 0..size {
            let row = &entries[i * size..(i + 1) * size];
            next.extend(row.iter().cloned());
            next.extend(row.iter().cloned());
        }
        for i in 0..size {
            let row = &tilde[i * size..(i + 1) * size];
            next.extend(row.iter().cloned());
            next.extend(row.iter().map(UnimodularSeq::negated));
        }
        entries = next;
        size = next_size;
    }
    Ok(ParaunitaryMatrix { size, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waveforms::{check_complementary, golay_pair};

    #[test]
    fn s2_layout() {
        let p = golay_pair(2).unwrap();
        let s = paraunitary(1, &p).unwrap();
        let seq = |t: &str| UnimodularSeq::parse_csv_line(t).unwrap();
        assert_eq!(s.entry(0, 0), &seq("1,1"));
        assert_eq!(s.entry(0, 1), &seq("1,-1"));
        assert_eq!(s.entry(1, 0), &seq("1,-1"));
        assert_eq!(s.entry(1, 1), &seq("1,1"));
        assert_eq!(s.residual(), 0.0);
        let g0 = s.gram(0);
        assert_eq!(
            g0,
            vec![
                Complex::new(4, 0),
                Complex::new(0, 0),
                Complex::new(0, 0),
                Complex::new(4, 0)
            ]
        );
    }

    #[test]
    fn columns_and_rows_are_complementary() {
        let p = golay_pair(4).unwrap();
        for k in 1..=3 {
            let s = paraunitary(k, &p).unwrap();
            for d in 0..s.size() {
                assert_eq!(check_complementary(s.column_set(d).members()).unwrap(), 0.0);
                assert_eq!(check_complementary(s.row_set(d).members()).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn rejects_order_zero_and_non_paraunitary() {
        let p = golay_pair(2).unwrap();
        assert!(paraunitary(0, &p).is_err());
        let s = UnimodularSeq::parse_csv_line("1,1").unwrap();
        assert!(
            ParaunitaryMatrix::new(vec![vec![s.clone(), s.clone()], vec![s.clone(), s]]).is_err()
        );
    }

    #[test]
    fn csv_round_trip() {
        let s = paraunitary(2, &golay_pair(4).unwrap()).unwrap();
        assert_eq!(ParaunitaryMatrix::parse_csv(&s.to_csv()).unwrap(), s);
    }
}
