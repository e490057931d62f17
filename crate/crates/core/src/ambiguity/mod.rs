//! Discretized cross-ambiguity functions of `(P, Q)` pulse trains.
//!
//! The Doppler phase convention is `e^{+jnθ}` with `θ = νT`. Every map is
//! computed column by column over `θ`; each column is evaluated independently
//! so the output does not depend on how the grid is split across threads.

mod compute;
mod grid;
mod map;
mod metrics;

pub use compute::{
    cross_ambiguity, cross_ambiguity_dary, cross_ambiguity_dary_oracle, cross_ambiguity_oracle,
    mimo_cross_ambiguity, mimo_cross_ambiguity_oracle,
};
pub use grid::DopplerGrid;
pub use map::{AmbiguityMap, MimoAmbiguity, RENDER_FLOOR_DB};
pub use metrics::{effective_bandwidth, kappa, output_snr, peak_sidelobe_ratio, snr_gain};

pub(crate) use compute::dary_values;
