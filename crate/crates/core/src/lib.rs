//! Second-price pacing games over exact rationals: equilibrium verification,
//! a constructive solver (simplicial search, rounding, exact LP), the
//! bimatrix hardness gadgets, and an adaptive pacing simulator.
//!
//! Every algorithm is generic over [`Scalar`]; the aliases below fix the
//! arbitrary-precision instantiation used by the solver and the CLI.

pub mod dynamics;
pub mod exactify;
mod flow;
pub mod game;
pub mod gen;
pub mod io;
pub mod lp;
pub mod reduction;
pub mod rounding;
pub mod scalar;
pub mod sperner;
pub mod verify;

pub use num_rational::BigRational;
pub use scalar::{ParseScalarError, Scalar};

pub type Rational = BigRational;
pub type Game = game::SppGame<Rational>;
pub type Profile = game::PacingProfile<Rational>;
pub type Alloc = game::Allocation<Rational>;
pub type Candidate = game::EquilibriumCandidate<Rational>;
pub type Params = game::ApproxParams<Rational>;
pub type Report = verify::VerifyReport<Rational>;
