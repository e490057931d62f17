use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Doppler phases `θ = νT` in radians, strictly increasing inside `[−π, π)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DopplerGrid<T> {
    thetas: Vec<T>,
    pri: Option<f64>,
}

impl<T: Real> DopplerGrid<T> {
    pub fn from_thetas(thetas: Vec<T>) -> Result<Self> {
        if thetas.len() < 2 {
            return invalid("Doppler grid needs at least 2 points");
        }
        if thetas.windows(2).any(|w| !(w[0] < w[1])) {
            return invalid("Doppler grid must be strictly increasing");
        }
        let pi = T::PI();
        if thetas[0] < -pi || !(thetas[thetas.len() - 1] < pi) {
            return invalid("Doppler grid must lie in [-pi, pi)");
        }
        Ok(Self { thetas, pri: None })
    }

    /// `count` points from `lo` to `hi`, both included.
    pub fn linspace(lo: T, hi: T, count: usize) -> Result<Self> {
        if count < 2 {
            return invalid(format!("grid count must be at least 2, got {count}"));
        }
        if !(lo < hi) {
            return invalid("grid needs lo < hi");
        }
        // Weighted form keeps endpoints exact and mirrors a symmetric range exactly.
        let span = T::from_usize_lossy(count - 1);
        Self::from_thetas(
            (0..count)
                .map(|i| {
                    let (a, b) = (T::from_usize_lossy(count - 1 - i), T::from_usize_lossy(i));
                    (lo * a + hi * b) / span
                })
                .collect(),
        )
    }

    /// `count` uniform points over `[−π, π)`.
    pub fn periodic(count: usize) -> Result<Self> {
        if count < 2 {
            return invalid(format!("grid count must be at least 2, got {count}"));
        }
        let pi = T::PI();
        let step = (pi + pi) / T::from_usize_lossy(count);
        Self::from_thetas(
            (0..count)
                .map(|i| -pi + step * T::from_usize_lossy(i))
                .collect(),
        )
    }

    /// Parses `lo:hi:count`.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        let [lo, hi, count] = parts[..] else {
            return Err(Error::Parse(format!(
                "grid must be lo:hi:count, got {spec:?}"
            )));
        };
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad grid bound {s:?}")))
        };
        let count = count
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad grid count {count:?}")))?;
        Self::linspace(
            T::from_f64_lossy(num(lo)?),
            T::from_f64_lossy(num(hi)?),
            count,
        )
    }

    /// Attaches a PRI in seconds so that `ν = θ/T` can be labelled.
    pub fn with_pri(mut self, pri: f64) -> Result<Self> {
        if !(pri > 0.0 && pri.is_finite()) {
            return invalid("PRI must be positive");
        }
        self.pri = Some(pri);
        Ok(self)
    }

    pub fn pri(&self) -> Option<f64> {
        self.pri
    }

    pub fn thetas(&self) -> &[T] {
        &self.thetas
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> T {
        self.thetas[0]
    }

    pub fn last(&self) -> T {
        self.thetas[self.thetas.len() - 1]
    }

    /// Doppler frequency `θ/T` in rad/s, when a PRI is attached.
    pub fn doppler(&self, i: usize) -> Option<f64> {
        self.pri
            .map(|t| self.thetas[i].to_f64().unwrap_or(f64::NAN) / t)
    }

    /// Index of `theta` on the grid, within a relative step tolerance.
    pub fn index_of(&self, theta: T) -> Option<usize> {
        let i = self.nearest(theta);
        let step = self.min_step();
        ((self.thetas[i] - theta).abs() <= step * T::from_f64_lossy(1e-6)).then_some(i)
    }

    /// Nearest grid index; ties go to the lower index.
    pub fn nearest(&self, theta: T) -> usize {
        let i = self.thetas.partition_point(|&t| t < theta);
        if i == 0 {
            0
        } else if i == self.thetas.len() || theta - self.thetas[i - 1] <= self.thetas[i] - theta {
            i - 1
        } else {
            i
        }
    }

    pub fn contains(&self, theta: T) -> bool {
        theta >= self.first() && theta <= self.last()
    }

    fn min_step(&self) -> T {
        self.thetas
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(T::infinity(), |a, b| a.min(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_is_inclusive() {
        let g = DopplerGrid::<f64>::linspace(-0.1, 0.1, 5).unwrap();
        for (a, b) in g.thetas().iter().zip([-0.1, -0.05, 0.0, 0.05, 0.1]) {
            assert!((a - b).abs() < 1e-16);
        }
        assert_eq!(g.thetas()[2], 0.0);
        assert_eq!(g.index_of(0.05), Some(3));
        assert_eq!(g.index_of(0.04), None);
        assert_eq!(g.nearest(0.04), 3);
        assert_eq!(g.nearest(-7.0), 0);
        let wide = DopplerGrid::<f64>::linspace(-1.0, 1.0, 1024).unwrap();
        let t = wide.thetas();
        assert!((0..1024).all(|i| t[i] == -t[1023 - i]));
    }

    #[test]
    fn periodic_grid() {
        let g = DopplerGrid::<f64>::periodic(4).unwrap();
        let pi = std::f64::consts::PI;
        assert_eq!(g.thetas(), &[-pi, -pi / 2.0, 0.0, pi / 2.0]);
        assert_eq!(g.index_of(0.0), Some(2));
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(DopplerGrid::<f64>::from_thetas(vec![0.0]).is_err());
        assert!(DopplerGrid::<f64>::from_thetas(vec![0.0, 0.0]).is_err());
        assert!(DopplerGrid::<f64>::from_thetas(vec![0.0, std::f64::consts::PI]).is_err());
        assert!(DopplerGrid::<f64>::linspace(1.0, -1.0, 3).is_err());
        assert!(DopplerGrid::<f64>::parse_spec("-1:1").is_err());
        assert!(DopplerGrid::<f64>::parse_spec("a:1:3").is_err());
        assert!(DopplerGrid::<f64>::periodic(3)
            .unwrap()
            .with_pri(0.0)
            .is_err());
    }

    #[test]
    fn parses_spec_and_labels_doppler() {
        let g = DopplerGrid::<f64>::parse_spec("-1:1:3")
            .unwrap()
            .with_pri(50e-6)
            .unwrap();
        assert_eq!(g.thetas(), &[-1.0, 0.0, 1.0]);
        assert!((g.doppler(2).unwrap() - 2e4).abs() < 1e-9);
    }
}
