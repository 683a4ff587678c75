//! Verified numerics for hyperbolicity certification.
//!
//! This crate proves, with directed-rounding interval arithmetic and the
//! Krawczyk existence test, that a system of gluing equations exported from
//! an ideal triangulation has a unique positively-oriented solution inside
//! an explicit interval box — which certifies that the underlying
//! 3-manifold carries a complete hyperbolic structure.
//!
//! The layers, bottom to top:
//!
//! * [`interval`] — closed intervals with outward-rounded arithmetic;
//! * [`linalg`] — interval vectors/matrices, approximate inversion, greedy
//!   full-rank row selection;
//! * [`autodiff`] — forward-mode AD over intervals;
//! * [`complex`] — complex numbers built from pairs of AD objects;
//! * [`arg`] — verified arctan/atan2 enclosures;
//! * [`gluing`] — equation data, file format, derived coefficient tables;
//! * [`residual`] — the reduced polynomial system, Newton refinement, and
//!   the orientation/argument side conditions;
//! * [`krawczyk`] — candidate boxes and the Krawczyk test;
//! * [`verify`] — the end-to-end pipeline producing a [`certificate`].

pub mod arg;
pub mod autodiff;
pub mod certificate;
pub mod complex;
pub mod error;
pub mod gluing;
pub mod interval;
pub mod krawczyk;
pub mod linalg;
pub mod residual;
mod round;
pub mod verify;

pub use error::{Error, Result};
pub use interval::Interval;
