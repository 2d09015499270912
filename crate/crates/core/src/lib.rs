//! Deciding when two local spin observables single out a GHZ state.
//!
//! `A` is a product of single-qubit spin observables along directions
//! `(theta_l, phi_l)` and `B = sigma_Z^{(x)N}`. The crate classifies the pair,
//! solves for the common +1 eigenspace, builds stabilizing pairs for arbitrary
//! GHZ states and simulates the two-setting certification protocol. Every
//! fast path has a brute-force counterpart on the full `2^N` space.

pub mod angle;
pub mod bits;
pub mod certify;
pub mod classifier;
pub mod eigensolver;
pub mod error;
pub mod exec;
pub mod ghz;
pub mod observables;
pub mod sweep;
pub mod tensor;

pub use angle::{Angle, DirectionList};
pub use bits::BitString;
pub use classifier::{classify, Case, ClassificationReport, MSet, Mode};
pub use eigensolver::{solve_common_eigenspace, StabilizerReport};
pub use error::{Error, Result};
pub use exec::Exec;
pub use ghz::{stabilizing_pair_for, GhzSpec, StabilizingPair};
pub use tensor::{Operator, StateVector, SubspaceBasis};
