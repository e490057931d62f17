use std::fmt::Write as _;

use num_complex::Complex;

use super::grid::DopplerGrid;
use crate::error::{invalid, Result};
use crate::scalar::Real;
use crate::spectra::magnitude_db;

/// Lower end of the rendered dB range.
pub const RENDER_FLOOR_DB: f64 = -100.0;

/// `χ(k, θ)` over delay bins `k ∈ [−(L−1), L−1]` and a Doppler grid.
///
/// Values are stored row by row, one row per delay bin.
#[derive(Clone, Debug, PartialEq)]
pub struct AmbiguityMap<T> {
    chip_len: usize,
    grid: DopplerGrid<T>,
    values: Vec<Complex<T>>,
    reference: T,
    pub design_id: String,
    pub waveform_id: String,
}

impl<T: Real> AmbiguityMap<T> {
    pub(crate) fn from_parts(
        chip_len: usize,
        grid: DopplerGrid<T>,
        values: Vec<Complex<T>>,
        reference: T,
    ) -> Self {
        debug_assert_eq!(values.len(), (2 * chip_len - 1) * grid.len());
        Self {
            chip_len,
            grid,
            values,
            reference,
            design_id: String::new(),
            waveform_id: String::new(),
        }
    }

    pub fn with_labels(mut self, design: impl Into<String>, waveform: impl Into<String>) -> Self {
        self.design_id = design.into();
        self.waveform_id = waveform.into();
        self
    }

    pub fn chip_len(&self) -> usize {
        self.chip_len
    }

    pub fn grid(&self) -> &DopplerGrid<T> {
        &self.grid
    }

    pub fn delay_bins(&self) -> usize {
        2 * self.chip_len - 1
    }

    pub fn delays(&self) -> std::ops::RangeInclusive<i64> {
        let l = self.chip_len as i64;
        -(l - 1)..=l - 1
    }

    /// `|χ(0, 0)|`, the level every dB value is quoted against.
    pub fn reference(&self) -> T {
        self.reference
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    /// `χ(k, θ_t)`; zero outside the delay extent.
    pub fn value(&self, k: i64, t: usize) -> Complex<T> {
        let l = self.chip_len as i64;
        if k <= -l || k >= l {
            return Complex::new(T::zero(), T::zero());
        }
        self.values[(k + l - 1) as usize * self.grid.len() + t]
    }

    /// `20·log10(|χ(k, θ_t)| / reference)`, floored at −300 dB.
    pub fn db(&self, k: i64, t: usize) -> f64 {
        magnitude_db(self.relative(k, t))
    }

    fn relative(&self, k: i64, t: usize) -> f64 {
        let r = self.reference.to_f64().unwrap_or(f64::NAN);
        self.value(k, t).norm().to_f64().unwrap_or(f64::NAN) / r
    }

    /// Largest `|χ(k ≠ 0, θ_t)|` in the column.
    pub fn max_sidelobe(&self, t: usize) -> T {
        self.delays()
            .filter(|&k| k != 0)
            .map(|k| self.value(k, t).norm())
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Largest sidelobe in dB over grid points with `lo ≤ θ ≤ hi`.
    pub fn max_sidelobe_db(&self, lo: T, hi: T) -> Result<f64> {
        let cols: Vec<usize> = (0..self.grid.len())
            .filter(|&t| self.grid.thetas()[t] >= lo && self.grid.thetas()[t] <= hi)
            .collect();
        if cols.is_empty() {
            return invalid("no grid points inside the requested band");
        }
        let peak = cols
            .iter()
            .map(|&t| self.max_sidelobe(t))
            .fold(T::zero(), |a, b| a.max(b));
        Ok(magnitude_db(
            peak.to_f64().unwrap_or(f64::NAN) / self.reference.to_f64().unwrap_or(f64::NAN),
        ))
    }

    /// Mainlobe level `|χ(0, θ)|` in dB along the grid.
    pub fn mainlobe_db(&self) -> Vec<f64> {
        (0..self.grid.len()).map(|t| self.db(0, t)).collect()
    }

    /// First row `k` then the θ values; one row per delay bin with dB cells.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k");
        for t in self.grid.thetas() {
            let _ = write!(out, ",{:.17e}", t.to_f64().unwrap_or(f64::NAN));
        }
        out.push('\n');
        for k in self.delays() {
            let _ = write!(out, "{k}");
            for t in 0..self.grid.len() {
                let _ = write!(out, ",{:.6}", self.db(k, t));
            }
            out.push('\n');
        }
        out
    }

    /// Binary PGM (P5): columns are θ, rows run from `k = L−1` at the top
    /// down to `k = −(L−1)`; `−100..0` dB maps to `0..255`.
    pub fn to_pgm(&self) -> Vec<u8> {
        let (w, h) = (self.grid.len(), self.delay_bins());
        let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
        out.reserve(w * h);
        for k in self.delays().rev() {
            for t in 0..w {
                let db = self.db(k, t).clamp(RENDER_FLOOR_DB, 0.0);
                out.push(((db - RENDER_FLOOR_DB) / -RENDER_FLOOR_DB * 255.0).round() as u8);
            }
        }
        out
    }
}

/// `D × D` cross-ambiguity matrix; entry `(i, j)` pairs transmit channel `i` with receive channel `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct MimoAmbiguity<T> {
    size: usize,
    entries: Vec<AmbiguityMap<T>>,
}

impl<T: Real> MimoAmbiguity<T> {
    pub(crate) fn from_entries(size: usize, entries: Vec<AmbiguityMap<T>>) -> Self {
        debug_assert_eq!(entries.len(), size * size);
        Self { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, j: usize) -> &AmbiguityMap<T> {
        &self.entries[i * self.size + j]
    }

    /// Largest off-diagonal magnitude in dB relative to the diagonal peak, over `lo ≤ θ ≤ hi`.
    pub fn max_off_diagonal_db(&self, lo: T, hi: T) -> Result<f64> {
        let first = self.entry(0, 0);
        let cols: Vec<usize> = (0..first.grid().len())
            .filter(|&t| first.grid().thetas()[t] >= lo && first.grid().thetas()[t] <= hi)
            .collect();
        if cols.is_empty() {
            return invalid("no grid points inside the requested band");
        }
        let mut worst = f64::NEG_INFINITY;
        for i in 0..self.size {
            for j in (0..self.size).filter(|&j| j != i) {
                let m = self.entry(i, j);
                for k in m.delays() {
                    for &t in &cols {
                        worst = worst.max(m.db(k, t));
                    }
                }
            }
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> AmbiguityMap<f64> {
        let grid = DopplerGrid::from_thetas(vec![-0.5, 0.5]).unwrap();
        let v = |x: f64| Complex::new(x, 0.0);
        AmbiguityMap::from_parts(
            2,
            grid,
            vec![v(0.1), v(0.0), v(10.0), v(5.0), v(0.0), v(1e-6)],
            10.0,
        )
    }

    #[test]
    fn indexing_and_metrics() {
        let m = toy();
        assert_eq!(m.value(-1, 0).re, 0.1);
        assert_eq!(m.value(1, 1).re, 1e-6);
        assert_eq!(m.value(2, 0).re, 0.0);
        assert_eq!(m.db(0, 0), 0.0);
        assert_eq!(m.db(1, 0), -300.0);
        assert!((m.max_sidelobe_db(-1.0, 0.0).unwrap() + 40.0).abs() < 1e-9);
        assert!(m.max_sidelobe_db(0.6, 0.7).is_err());
    }

    #[test]
    fn csv_layout() {
        let csv = toy().with_labels("d", "w").to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("k,-5.0"));
        assert_eq!(lines[2], "0,0.000000,-6.020600");
    }

    #[test]
    fn pgm_layout() {
        let pgm = toy().to_pgm();
        let header = b"P5\n2 3\n255\n";
        assert_eq!(&pgm[..header.len()], header);
        let px = &pgm[header.len()..];
        assert_eq!(px.len(), 6);
        // Top row is k = +1, entirely below the floor.
        assert_eq!(&px[..2], &[0, 0]);
        assert_eq!(&px[2..4], &[255, 240]);
        assert_eq!(&px[4..], &[153, 0]);
    }
}
