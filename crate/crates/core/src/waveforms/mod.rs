//! Complementary code sequences: Golay pairs, complementary sets and
//! paraunitary sequence matrices, with exact Gaussian-integer correlations.

mod golay;
mod paraunitary;
mod sequence;

pub use golay::{
    check_complementary, golay_matrix, golay_pair, ComplementarySet, GolayPair,
    MAX_GOLAY_MATRIX_ORDER,
};
pub use paraunitary::{paraunitary, ParaunitaryMatrix, MAX_PARAUNITARY_ORDER};
pub use sequence::{
    autocorrelation, autocorrelation_all, cross_correlation, cross_correlation_all,
    reverse_conjugate, Gaussian, Phase, UnimodularSeq, MAX_SEQUENCE_LEN,
};
