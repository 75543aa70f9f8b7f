//! Knizhnik–Zamolodchikov systems whose residues come from the natural
//! representation of the symmetric group.
//!
//! The crate builds the system `W' = ρ A(z) W` with
//! `A(z) = Σₖ Pₖ / (z − zₖ)` and `Pₖ` the star transpositions `(1; k+1)`,
//! then works with it on two tracks:
//!
//! * **exact**: Gaussian-rational arithmetic ([`exact`]), local Laurent
//!   analysis at each pole ([`frobenius`]), residue-condition checks and a
//!   nullspace solver for rational solutions ([`ansatz`]), and the closed-form
//!   rational solutions of the `S₄`, `ρ = −1` system ([`s4`]);
//! * **numeric**: adaptive Runge–Kutta transport along paths, monodromy
//!   loops, and floating residual scans ([`numeric`]).
//!
//! [`cli`] wires both into the `kz` binary and its JSON reports.

pub mod ansatz;
pub mod cli;
pub mod error;
pub mod exact;
pub mod frobenius;
pub mod numeric;
pub mod s4;
pub mod symmetric;
pub mod system;

pub use ansatz::RationalVectorFunction;
pub use error::{KzError, Result};
pub use exact::{Matrix, Scalar, Vector};
pub use system::KzSystem;
