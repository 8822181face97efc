//! Continued fractions whose elements are arbitrary numbers, and the geometry
//! around them: sails of lattice cones, broken lines encoded by lattice
//! length-sine sequences, areal and angular densities of smooth curves, and
//! reconstruction of curves from their areal density.
//!
//! Exact computations run over [`Ratio`] (arbitrary precision rationals);
//! numerical ones over `f64`. Most routines are generic over [`Scalar`].

pub mod cf;
pub mod cli;
pub mod density;
pub mod error;
pub mod polyline;
pub mod quadrature;
pub mod reconstruct;
pub mod sail;
pub mod scalar;

pub use cf::{continuants, eval_cf, expand_rational, expand_real, CfSequence, Continuant, Parity, ProjectiveRatio};
pub use error::{Error, Result};
pub use polyline::{build, endpoint_pair, is_closed, lls_of, transform, Frame, LlsSequence, Matrix2, Polyline};
pub use sail::{integer_length, integer_sine, sail, ConeSpec, LatticePoint, SailResult};
pub use scalar::{Point2, Ratio, Scalar};
