//! Weak-mixing certificates for interval exchanges and translation flows.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactnum`]: exact rationals and field elements over a declared basis.
//! * [`iet`]: interval exchange maps, `sigma_pi`, its cycles and the `b_S`
//!   vectors.
//! * [`surface`]: translation surfaces, polygon unfolding, suspensions and the
//!   built-in example surfaces.
//! * [`flow`]: straight-line flow, first return maps and return times.
//! * [`weakmix`]: eigenvalue exclusion and the two-cycle independence test.
//! * [`spectral`]: numerical correlation, Cesaro and Weyl-sum diagnostics.

pub mod exactnum;
pub mod iet;
pub mod surface;
pub mod flow;
pub mod weakmix;
pub mod spectral;
