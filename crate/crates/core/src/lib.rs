//! Numerical engine for limiting real-interpolation spaces and the Fourier
//! series map on bounded orthonormal systems.
//!
//! The crate is organised bottom-up:
//!
//! * [`measure`] – step functions, finite sequences, rearrangements and
//!   exact energy functionals;
//! * [`quadrature`] – Gauss–Kronrod integration in the logarithmic variable
//!   `u = -ln t` with analytic log-power tails;
//! * [`lognorm`] – Lorentz–Zygmund and limiting L/R quasi-norms;
//! * [`kfunc`] – exact K-functionals for four couples and the interpolation
//!   norms built on them;
//! * [`ons`] – discrete bounded orthonormal systems, the coefficient map and
//!   its inverse;
//! * [`verify`] – ratio campaigns measuring the constants of the inequalities,
//!   embeddings and isomorphisms.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod extreal;
pub mod kfunc;
pub mod lognorm;
pub mod measure;
pub mod ons;
pub mod quadrature;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
