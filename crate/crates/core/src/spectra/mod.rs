//! Sidelobe-controlling spectra `S(θ) = Σ r_n e^{jnθ}` and their moments.
//!
//! A design has an `M`-th order spectral null at `θ = 0` when the moments
//! `Σ n^m r_n` vanish for `m = 0..=M`. For `D`-ary designs each channel
//! `r = 1..D−1` must have the null.

mod basis;
mod dary;
mod vector;

pub use basis::{basis_matrix, r_from_coeffs, NullSubspaceBasis};
pub use dary::{
    dary_channel_null_orders, dary_moment, dary_null_order, dary_spectrum_eval, omega_power,
    sign_flip_multiplier, DArySpectrumInput,
};
pub use vector::{magnitude_db, pq_from_r, r_from_pq, spectrum_csv, spectrum_eval, DesignVector};

pub(crate) use dary::check_alphabet;
pub(crate) use vector::{binomial, exact_integers};
