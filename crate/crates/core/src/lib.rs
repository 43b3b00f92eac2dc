//! Step graphons, homomorphism densities, the similarity metrics used to
//! purify a graphon, spectral decompositions and symmetry analysis.

pub mod cayley;
pub mod error;
pub mod experiments;
pub mod graphon;
pub mod homdensity;
pub mod graphs;
pub mod matrix;
pub mod metrics;
pub mod scalar;
pub mod spectral;
pub mod symmetry;

pub use error::{Error, Result};
pub use graphon::{Kernel, StepGraphon, StepKernel};
pub use graphs::{GraphKind, LabeledGraph, QuantumGraph};
pub use matrix::Matrix;
pub use scalar::{Mode, Rational, Scalar};
