//! Exact path model for generalized Kac–Moody algebras: root operators on
//! piecewise-linear paths, generalized Lakshmibai–Seshadri paths, the
//! generalized Weyl monoid, the lift to a Kac–Moody path model, and
//! truncated crystal graphs with their decomposition rules.

pub mod cartan_datum;
pub mod crystal;
pub mod error;
pub mod gls;
pub mod lift_embed;
pub mod paths;
pub mod rational;
pub mod suites;
pub mod weight;
pub mod weyl_monoid;

pub use cartan_datum::{BorcherdsCartanDatum, LiftedIndex};
pub use error::{Error, Result};
pub use paths::{Path, Segment};
pub use rational::Q;
pub use weight::{Realization, Weight};
