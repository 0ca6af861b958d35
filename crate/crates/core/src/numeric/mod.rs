//! Exact arithmetic and the linear-programming kernel.
//!
//! Every set-membership question the rest of the crate asks (the relation
//! `r`, the cone order, `0 ∉ D + K`) becomes feasibility of a small
//! [`LinearSystem`] decided here without any tolerance.

mod rational;
mod simplex;
mod system;
mod vector;

pub use rational::Rational;
pub use simplex::{lp_feasible, lp_minimize};
pub use system::{Feasibility, LinearSystem, Outcome};
pub use vector::RationalVector;
