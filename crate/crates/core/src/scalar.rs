//! Scalar traits shared by the numeric modules.
//!
//! [`Real`] covers the floating-point paths (spectra on a grid, ambiguity maps,
//! the max-SNR solver). [`Coefficient`] is the wider family used for design
//! vectors and moments, which also admits exact big-integer and rational
//! values so that spectral-null checks can be carried out without tolerances.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FloatConst, FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// Floating point: `f32` or `f64`.
pub trait Real:
    num_traits::Float
    + num_traits::NumAssign
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Relative tolerance used by the spectral-null test when the caller does not supply one.
    const NULL_TOLERANCE: Self;

    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).unwrap_or_else(Self::nan)
    }

    fn from_usize_lossy(v: usize) -> Self {
        Self::from_usize(v).unwrap_or_else(Self::infinity)
    }
}

impl Real for f32 {
    const NULL_TOLERANCE: f32 = 1e-5;
}

impl Real for f64 {
    const NULL_TOLERANCE: f64 = 1e-10;
}

/// Scalar type of a design vector `r`.
///
/// Exact types (`BigInt`, `BigRational`) make every moment test an exact zero
/// test; floating types use a relative tolerance scaled by `‖r‖₁·N^m`.
pub trait Coefficient: Clone + Num + Signed + PartialOrd + Debug {
    const EXACT: bool;

    /// Relative moment tolerance used by default; ignored by exact types.
    const NULL_TOLERANCE_F64: f64;

    fn from_usize(n: usize) -> Self;

    fn from_bigint(v: &BigInt) -> Self;

    fn as_f64(&self) -> f64;
}

impl Coefficient for f64 {
    const EXACT: bool = false;
    const NULL_TOLERANCE_F64: f64 = 1e-10;

    fn from_usize(n: usize) -> Self {
        n as f64
    }

    fn from_bigint(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }

    fn as_f64(&self) -> f64 {
        *self
    }
}

impl Coefficient for f32 {
    const EXACT: bool = false;
    const NULL_TOLERANCE_F64: f64 = 1e-5;

    fn from_usize(n: usize) -> Self {
        n as f32
    }

    fn from_bigint(v: &BigInt) -> Self {
        v.to_f32().unwrap_or(f32::NAN)
    }

    fn as_f64(&self) -> f64 {
        f64::from(*self)
    }
}

impl Coefficient for BigInt {
    const EXACT: bool = true;
    const NULL_TOLERANCE_F64: f64 = 0.0;

    fn from_usize(n: usize) -> Self {
        BigInt::from(n)
    }

    fn from_bigint(v: &BigInt) -> Self {
        v.clone()
    }

    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Coefficient for BigRational {
    const EXACT: bool = true;
    const NULL_TOLERANCE_F64: f64 = 0.0;

    fn from_usize(n: usize) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn as_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Exact conversion of an integral float to `BigInt`, `None` for fractional
/// or non-finite values and for magnitudes beyond 2^53.
pub(crate) fn integral_to_bigint<T: Real>(v: T) -> Option<BigInt> {
    let x = v.to_f64()?;
    if !x.is_finite() || x.fract() != 0.0 || x.abs() > 9_007_199_254_740_992.0 {
        return None;
    }
    Some(BigInt::from(x as i64))
}
