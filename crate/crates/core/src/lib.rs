//! Range-sidelobe control for complementary-waveform pulse trains.
//!
//! A `(P, Q)` design orders Golay (or `D`-ary complementary) waveforms in a
//! transmit train with the `P` sequence and weights the matched-filter train
//! with `Q`. Range sidelobes away from zero Doppler are then governed by the
//! spectrum `Σ (−1)^{p_n} q_n e^{jnθ}`, and a high-order null of that spectrum
//! at `θ = 0` clears them from a band around the zero-Doppler axis.
//!
//! The numeric core is generic over the scalar; the aliases below fix the
//! common choices.

// `!(a < b)` is used deliberately so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ambiguity;
pub mod designs;
pub mod error;
pub mod scalar;
pub mod scene;
pub mod spectra;
pub mod waveforms;

pub use error::{Error, Result};

pub type Design64 = designs::Design<f64>;
pub type Design32 = designs::Design<f32>;
pub type PulseTrain64 = designs::PulseTrain<f64>;
pub type DopplerGrid64 = ambiguity::DopplerGrid<f64>;
pub type AmbiguityMap64 = ambiguity::AmbiguityMap<f64>;
pub type MimoAmbiguity64 = ambiguity::MimoAmbiguity<f64>;
pub type Scene64 = scene::Scene<f64>;
pub type DesignVector64 = spectra::DesignVector<f64>;
/// Integer design vectors with exact moments.
pub type ExactDesignVector = spectra::DesignVector<num_bigint::BigInt>;
pub type RationalDesignVector = spectra::DesignVector<num_rational::BigRational>;
