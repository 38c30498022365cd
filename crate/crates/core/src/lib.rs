//! Exact linear rank methods for tensor and polynomial border rank, together
//! with the machinery needed to check cactus-type barriers on concrete
//! instances: Segre-Veronese parameterizations, finite schemes and their
//! linear spans, limits of spans, and the barrier verifiers themselves.
//!
//! All arithmetic is exact. Data live over the rationals; prime fields are
//! used only as a screening image for rank computations.

pub mod barrier;
pub mod error;
pub mod exactalg;
pub mod rankmethods;
pub mod schemes;
pub mod seed;
pub mod varieties;

pub use error::{Error, Result};
pub use exactalg::{ExactMatrix, Field, Rational, Subspace, Vector};
