//! Transmit/receive pulse-train designs `(P, Q)` with verified spectral nulls.

mod linalg;
mod maxsnr;
mod named;
mod qp;
mod train;

pub use maxsnr::{
    max_snr_design, KktReport, MaxSnrOptions, MaxSnrProblem, MaxSnrSolution, MAX_MAXSNR_LEN,
};
pub use named::{
    binomial_design, compose_dary, conventional_design, general_design, ptm_design, ptm_sequence,
};
pub use qp::{IpmOptions, IpmSolution, IpmStatus, QuadraticProgram};
pub use train::{parse_train, Design, PulseTrain};
