//! Numerics for Livšic functions, Weyl–Titchmarsh functions and
//! characteristic functions of maximal dissipative extensions of symmetric
//! operators with deficiency indices (1, 1).
//!
//! * [`function`]: lazily evaluated analytic functions on the upper
//!   half-plane, probe grids and comparisons.
//! * [`moebius`]: Cayley transform, disk automorphisms, half-plane rotations.
//! * [`measure`]: Herglotz functions from measures and back.
//! * [`extension`]: von Neumann parameters, characteristic functions and
//!   change of reference extension.
//! * [`coupling`]: coupling angles, the coupling formula, the addition and
//!   multiplication theorems.
//! * [`model`]: the differentiation operator on an interval, with a
//!   quadrature oracle.
//! * [`invariants`] and [`cli`]: verification suites and the command line.

pub mod cli;
pub mod coupling;
pub mod error;
pub mod extension;
pub mod function;
pub mod invariants;
pub mod json;
pub mod measure;
pub mod model;
pub mod moebius;
pub mod quadrature;

pub use error::{Error, Result};
pub use function::{AnalyticFn, EvaluationGrid, FnKind, HalfPlanePoint, ToleranceConfig};
