use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;
use crate::spectra::{
    check_alphabet, dary_channel_null_orders, exact_integers, r_from_pq, DesignVector,
};

/// A transmit order `P` over `{0..D−1}` and receive weights `Q ≥ 0`.
///
/// No spectral-null guarantee; see [`Design`] for that.
#[derive(Clone, Debug, PartialEq)]
pub struct PulseTrain<T> {
    p: Vec<usize>,
    q: Vec<T>,
    d: usize,
}

impl<T: Real> PulseTrain<T> {
    pub fn new(p: Vec<usize>, q: Vec<T>, d: usize) -> Result<Self> {
        check_alphabet(&p, &q, d)?;
        if q.iter().all(|v| v.is_zero()) {
            return invalid("Q must not be all zero");
        }
        Ok(Self { p, q, d })
    }

    pub fn binary(p: Vec<usize>, q: Vec<T>) -> Result<Self> {
        Self::new(p, q, 2)
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

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn q_sum(&self) -> T {
        self.q.iter().copied().sum()
    }

    /// `r_n = (−1)^{p_n} q_n`; binary trains only.
    pub fn design_vector(&self) -> Result<DesignVector<T>>
    where
        T: crate::scalar::Coefficient,
    {
        if self.d != 2 {
            return invalid(format!(
                "design vector needs D = 2, train has D = {}",
                self.d
            ));
        }
        r_from_pq(&self.p, &self.q)
    }

    /// Per-channel null orders (`D−1` entries; one for binary trains).
    ///
    /// Integral `Q` is checked exactly, otherwise with relative tolerance `tol`.
    pub fn channel_null_orders(&self, tol: f64) -> Vec<Option<usize>> {
        if self.d == 2 {
            if let Some(q) = exact_integers(&self.q) {
                let r: Vec<BigInt> = self
                    .p
                    .iter()
                    .zip(q)
                    .map(|(&s, v)| if s == 1 { -v } else { v })
                    .collect();
                let r = DesignVector::new(r).expect("non-empty train");
                return vec![r.null_order(0.0)];
            }
        }
        dary_channel_null_orders(&self.p, &self.q, self.d, tol).expect("train is validated")
    }

    /// Minimum over channels; `None` when some channel has no null at all.
    pub fn null_order(&self, tol: f64) -> Option<usize> {
        self.channel_null_orders(tol)
            .into_iter()
            .try_fold(usize::MAX, |acc, o| o.map(|v| acc.min(v)))
    }

    pub fn null_order_default(&self) -> Option<usize> {
        self.null_order(default_tolerance::<T>())
    }

    pub fn cast<U: Real>(&self) -> PulseTrain<U> {
        PulseTrain {
            p: self.p.clone(),
            q: self
                .q
                .iter()
                .map(|v| U::from_f64_lossy(v.to_f64().unwrap_or(f64::NAN)))
                .collect(),
            d: self.d,
        }
    }
}

pub(crate) fn default_tolerance<T: Real>() -> f64 {
    T::NULL_TOLERANCE.to_f64().unwrap_or(1e-10)
}

/// A pulse train whose declared null order `M` has been verified.
#[derive(Clone, Debug, PartialEq)]
pub struct Design<T> {
    train: PulseTrain<T>,
    declared: usize,
    verified: usize,
}

impl<T: Real> Design<T> {
    /// Verifies the null order at the scalar type's default tolerance.
    pub fn new(train: PulseTrain<T>, declared: usize) -> Result<Self> {
        Self::with_tolerance(train, declared, default_tolerance::<T>())
    }

    pub fn with_tolerance(train: PulseTrain<T>, declared: usize, tol: f64) -> Result<Self> {
        match train.null_order(tol) {
            Some(verified) if verified >= declared => Ok(Self {
                train,
                declared,
                verified,
            }),
            Some(verified) => invalid(format!(
                "declared null order {declared} but verified order is {verified}"
            )),
            None => invalid(format!(
                "declared null order {declared} but the train has no spectral null"
            )),
        }
    }

    pub fn train(&self) -> &PulseTrain<T> {
        &self.train
    }

    pub fn into_train(self) -> PulseTrain<T> {
        self.train
    }

    pub fn declared_order(&self) -> usize {
        self.declared
    }

    pub fn verified_order(&self) -> usize {
        self.verified
    }

    pub fn p(&self) -> &[usize] {
        self.train.p()
    }

    pub fn q(&self) -> &[T] {
        self.train.q()
    }

    pub fn alphabet(&self) -> usize {
        self.train.alphabet()
    }

    pub fn len(&self) -> usize {
        self.train.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `D N M`, then `P`, then `Q` at 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.alphabet(), self.len(), self.declared);
        let p: Vec<String> = self.p().iter().map(usize::to_string).collect();
        out.push_str(&p.join(" "));
        out.push('\n');
        let mut first = true;
        for v in self.q() {
            if !first {
                out.push(' ');
            }
            first = false;
            let _ = write!(out, "{}", format_q(v.to_f64().unwrap_or(f64::NAN)));
        }
        out.push('\n');
        out
    }

    /// Parses and re-verifies a design; a wrong null order is an error.
    pub fn parse_text(text: &str) -> Result<Self> {
        let (train, declared) = parse_train(text)?;
        Self::new(train, declared)
    }
}

/// Parses the design text format without verifying the declared order.
pub fn parse_train<T: Real>(text: &str) -> Result<(PulseTrain<T>, usize)> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty design file".into()))?;
    let head: Vec<usize> = header
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Parse(format!("bad header token {t:?}")))
        })
        .collect::<Result<_>>()?;
    let [d, n, m] = head[..] else {
        return Err(Error::Parse(format!(
            "header must be `D N M`, got {header:?}"
        )));
    };
    let p: Vec<usize> = lines
        .next()
        .ok_or_else(|| Error::Parse("missing P line".into()))?
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Parse(format!("bad P symbol {t:?}")))
        })
        .collect::<Result<_>>()?;
    let q: Vec<T> = lines
        .next()
        .ok_or_else(|| Error::Parse("missing Q line".into()))?
        .split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .map(T::from_f64_lossy)
                .map_err(|_| Error::Parse(format!("bad Q value {t:?}")))
        })
        .collect::<Result<_>>()?;
    if p.len() != n || q.len() != n {
        return Err(Error::Parse(format!(
            "header says N = {n} but P has {} and Q has {} entries",
            p.len(),
            q.len()
        )));
    }
    Ok((PulseTrain::new(p, q, d)?, m))
}

fn format_q(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{v}")
    } else {
        format!("{v:.16e}")
    }
}
