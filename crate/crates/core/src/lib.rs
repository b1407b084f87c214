//! Finite semi-primal algebras, their finite duality with marked sets, lifted set functors
//! and many-valued coalgebraic modal logic, all checked by exhaustive enumeration.

pub mod algebra;
pub mod duality;
pub mod error;
pub mod lift;
pub mod logic;
pub mod verify;

pub use error::{Error, Result};
