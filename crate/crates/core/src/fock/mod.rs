//! Truncated Fock-space states and operators.
//!
//! Every mode is truncated at a maximum photon number `cutoff` (dimension
//! `cutoff + 1`). Multi-mode states use the Kronecker ordering in which the
//! first mode carries the slowest index.
//!
//! Operations that can lose probability through the truncation report the
//! loss as a `defect` and fail with [`Error::Truncation`](crate::Error) when it
//! exceeds [`TRUNCATION_TOL`](crate::TRUNCATION_TOL).

mod channels;
mod density;
mod ops;
mod tmsv;

pub use channels::{
    attenuate_tmsv_signal, beam_splitter, beam_splitter_block, displace, displacement,
    two_mode_beam_splitter,
};
pub use density::{expectation, expectation_pure, partial_trace, thermal_density, DensityMatrix};
pub use ops::ModeOps;
pub use tmsv::{mean_photon, squeeze_vacuum_operator, tmsv_fock, FockTMSV, TwoModePure};

/// A value together with the truncation defect incurred while building it.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncated<T> {
    pub value: T,
    /// Probability (or norm) lost to the finite Fock basis before any
    /// renormalization.
    pub defect: f64,
}

impl<T> Truncated<T> {
    pub fn into_inner(self) -> T {
        self.value
    }
}

pub(crate) fn check_defect(what: &'static str, defect: f64) -> crate::Result<()> {
    if !(defect <= crate::TRUNCATION_TOL) {
        return Err(crate::Error::Truncation {
            what,
            defect,
            tol: crate::TRUNCATION_TOL,
        });
    }
    Ok(())
}
