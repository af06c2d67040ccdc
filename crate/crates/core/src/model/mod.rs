//! First-order differentiation on a finite interval `[0, ℓ]`: closed-form
//! Livšic and characteristic functions, an independent quadrature oracle
//! built from the deficiency elements, and the interval-splitting check.
//!
//! `closed_form` and `oracle` share no integration code; the oracle never
//! uses the antiderivatives the closed form is derived from.

mod closed_form;
mod oracle;
mod split;

pub use closed_form::{model_closed_forms, ModelFunctions};
pub use oracle::{model_livsic_quadrature, DeficiencyElement, DeficiencyKind};
pub use split::{split_interval_check, Interval, SplitReport};
