use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Longest sequence accepted anywhere in the crate.
pub const MAX_SEQUENCE_LEN: usize = 1 << 20;

/// Gaussian integer used for exact correlation values.
pub type Gaussian = Complex<i64>;

/// A unit in `{1, j, -1, -j}`, stored as the exponent of `j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const J: Phase = Phase(1);
    pub const NEG_ONE: Phase = Phase(2);
    pub const NEG_J: Phase = Phase(3);

    /// `j^k` for any integer `k`.
    pub fn from_quarter_turns(k: i64) -> Self {
        Phase(k.rem_euclid(4) as u8)
    }

    pub fn quarter_turns(self) -> u8 {
        self.0
    }

    pub fn conj(self) -> Self {
        Phase((4 - self.0) % 4)
    }

    pub fn to_gaussian(self) -> Gaussian {
        match self.0 {
            0 => Complex::new(1, 0),
            1 => Complex::new(0, 1),
            2 => Complex::new(-1, 0),
            _ => Complex::new(0, -1),
        }
    }

    pub fn to_complex<T: Real>(self) -> Complex<T> {
        let g = self.to_gaussian();
        Complex::new(
            T::from_f64_lossy(g.re as f64),
            T::from_f64_lossy(g.im as f64),
        )
    }

    pub fn try_from_gaussian(g: Gaussian) -> Option<Self> {
        match (g.re, g.im) {
            (1, 0) => Some(Phase::ONE),
            (0, 1) => Some(Phase::J),
            (-1, 0) => Some(Phase::NEG_ONE),
            (0, -1) => Some(Phase::NEG_J),
            _ => None,
        }
    }
}

impl Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl Neg for Phase {
    type Output = Phase;

    fn neg(self) -> Phase {
        Phase((self.0 + 2) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "1",
            1 => "i",
            2 => "-1",
            _ => "-i",
        })
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Phase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" | "+1" => Ok(Phase::ONE),
            "-1" => Ok(Phase::NEG_ONE),
            "i" | "j" | "+i" | "+j" => Ok(Phase::J),
            "-i" | "-j" => Ok(Phase::NEG_J),
            other => Err(Error::Parse(format!("unknown sequence token {other:?}"))),
        }
    }
}

/// A non-empty sequence of unit-modulus symbols.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UnimodularSeq {
    elements: Vec<Phase>,
}

impl UnimodularSeq {
    pub fn new(elements: Vec<Phase>) -> Result<Self> {
        if elements.is_empty() {
            return invalid("sequence must have length >= 1");
        }
        if elements.len() > MAX_SEQUENCE_LEN {
            return Err(Error::Capacity(format!(
                "sequence length {} exceeds {}",
                elements.len(),
                MAX_SEQUENCE_LEN
            )));
        }
        Ok(Self { elements })
    }

    /// Builds a `±1` sequence; any value other than `1` or `-1` is rejected.
    pub fn from_signs(signs: &[i64]) -> Result<Self> {
        let elements = signs
            .iter()
            .map(|&v| match v {
                1 => Ok(Phase::ONE),
                -1 => Ok(Phase::NEG_ONE),
                other => invalid(format!("binary sequence value {other} is not +-1")),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(elements)
    }

    pub fn from_gaussian(values: &[Gaussian]) -> Result<Self> {
        let elements = values
            .iter()
            .map(|&g| {
                Phase::try_from_gaussian(g).ok_or_else(|| {
                    Error::InvalidArgument(format!("{g} is not a unit in {{1, j, -1, -j}}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(elements)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Phase] {
        &self.elements
    }

    pub fn is_binary(&self) -> bool {
        self.elements
            .iter()
            .all(|p| *p == Phase::ONE || *p == Phase::NEG_ONE)
    }

    pub fn to_gaussian(&self) -> Vec<Gaussian> {
        self.elements.iter().map(|p| p.to_gaussian()).collect()
    }

    pub fn negated(&self) -> Self {
        Self {
            elements: self.elements.iter().map(|&p| -p).collect(),
        }
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut elements = Vec::with_capacity(self.len() + other.len());
        elements.extend_from_slice(&self.elements);
        elements.extend_from_slice(&other.elements);
        Self::new(elements)
    }

    /// Single-line CSV of `1,-1,i,-i` tokens.
    pub fn to_csv_line(&self) -> String {
        let tokens: Vec<String> = self.elements.iter().map(|p| p.to_string()).collect();
        tokens.join(",")
    }

    pub fn parse_csv_line(line: &str) -> Result<Self> {
        let elements = line
            .trim()
            .split(',')
            .map(str::parse)
            .collect::<Result<Vec<Phase>>>()?;
        Self::new(elements)
    }
}

impl fmt::Debug for UnimodularSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_csv_line())
    }
}

/// Aperiodic cross-correlation `Σ_ℓ a[ℓ] b[ℓ-k]^*` at lag `k`; zero outside the overlap.
pub fn cross_correlation(a: &UnimodularSeq, b: &UnimodularSeq, k: i64) -> Gaussian {
    let (la, lb) = (a.len() as i64, b.len() as i64);
    let lo = k.max(0);
    let hi = la.min(lb + k);
    let mut acc = Complex::new(0i64, 0i64);
    for l in lo..hi {
        let p = a.elements[l as usize] * b.elements[(l - k) as usize].conj();
        acc += p.to_gaussian();
    }
    acc
}

/// `C_s[k]`, exact.
pub fn autocorrelation(s: &UnimodularSeq, k: i64) -> Gaussian {
    cross_correlation(s, s, k)
}

/// Cross-correlation at every lag `-(L-1)..=L-1`; index `k + L - 1`.
pub fn cross_correlation_all(a: &UnimodularSeq, b: &UnimodularSeq) -> Vec<Gaussian> {
    debug_assert_eq!(a.len(), b.len());
    let l = a.len() as i64;
    (-(l - 1)..l).map(|k| cross_correlation(a, b, k)).collect()
}

pub fn autocorrelation_all(s: &UnimodularSeq) -> Vec<Gaussian> {
    cross_correlation_all(s, s)
}

/// `out[ℓ] = conj(s[L-1-ℓ])`.
pub fn reverse_conjugate(s: &UnimodularSeq) -> UnimodularSeq {
    UnimodularSeq {
        elements: s.elements.iter().rev().map(|p| p.conj()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(tokens: &str) -> UnimodularSeq {
        UnimodularSeq::parse_csv_line(tokens).unwrap()
    }

    #[test]
    fn autocorrelation_examples() {
        assert_eq!(autocorrelation(&seq("1,1"), 0), Complex::new(2, 0));
        assert_eq!(autocorrelation(&seq("1,-1"), 1), Complex::new(-1, 0));
        assert_eq!(autocorrelation(&seq("1,1,1,-1"), 3), Complex::new(-1, 0));
        assert_eq!(autocorrelation(&seq("1,1,1,-1"), 4), Complex::new(0, 0));
        assert_eq!(autocorrelation(&seq("1,1,1,-1"), -7), Complex::new(0, 0));
    }

    #[test]
    fn autocorrelation_is_hermitian() {
        let s = seq("1,i,-1,-i,i,1,1,-1");
        for k in 0..8 {
            assert_eq!(autocorrelation(&s, -k), autocorrelation(&s, k).conj());
        }
        assert_eq!(autocorrelation(&s, 0), Complex::new(8, 0));
    }

    #[test]
    fn reverse_conjugate_examples() {
        assert_eq!(reverse_conjugate(&seq("1,-1")), seq("-1,1"));
        assert_eq!(reverse_conjugate(&seq("1,i")), seq("-i,1"));
        let s = seq("1,i,-i,-1,1");
        assert_eq!(reverse_conjugate(&reverse_conjugate(&s)), s);
    }

    #[test]
    fn rejects_non_units() {
        assert!(UnimodularSeq::from_signs(&[1, 0, -1]).is_err());
        assert!(UnimodularSeq::from_gaussian(&[Complex::new(1, 1)]).is_err());
        assert!(UnimodularSeq::new(vec![]).is_err());
        assert!(UnimodularSeq::parse_csv_line("1,2").is_err());
    }

    #[test]
    fn csv_line_round_trip() {
        let s = seq("1, -1,i,-i ,j");
        assert_eq!(s.to_csv_line(), "1,-1,i,-i,i");
        assert_eq!(seq(&s.to_csv_line()), s);
    }
}
