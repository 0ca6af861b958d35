//! Constructive vector Ekeland variational principle on finite metric spaces.
//!
//! Values live in Q^m, ordered by a polyhedral cone `K` given by generators.
//! A polytope `D ⊂ K` with `0 ∉ D + K` supplies the perturbation directions.
//! For every starting point the solver returns a point `x̄` with
//!
//! * (i)  `(f(x) - K) ∩ (f(x̄) + d(x, x̄) D) ≠ ∅`, and
//! * (ii) `(f(x̄) - K) ∩ (f(z) + d(z, x̄) D) = ∅` for every `z ≠ x̄`,
//!
//! together with a certificate that [`oracle::audit`] rechecks using an
//! independent Fourier–Motzkin eliminator. All arithmetic is exact.

pub mod error;
pub mod geometry;
pub mod io;
pub mod numeric;
pub mod oracle;
pub mod principle;
pub mod random;
pub mod relations;
pub mod space;

pub use error::{Error, Result};
pub use geometry::{NormTag, PolyhedralCone, DirectionSet, Scalarizer};
pub use numeric::{Rational, RationalVector};
pub use principle::{EkelandCertificate, RelationWitness};
pub use space::{FiniteMetricSpace, Instance, Objective};
