//! Core types for tempered stable distributions: parameter vectors, box
//! bounds, characteristic functions, cumulant generating functions and
//! cumulants.
//!
//! The closed-form parts are generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`, which is what the
//! numerical crates built on top of this one use.

pub mod charfn;
pub mod error;
pub mod params;
pub mod sample;
pub mod scalar;
pub mod special;

pub use charfn::{cgf, cgf_domain, char_fn, cumulant, cumulants, mean_variance, ALPHA_ONE_TOL};
pub use error::{Error, Result};
pub use params::{CtsParams, Family, NtsParams, ParamBounds, ParamVector, TssParams};
pub use sample::{Provenance, Sample};
pub use scalar::Real;

pub use num_complex::Complex;

/// `f64` parameter vector.
pub type Params = ParamVector<f64>;
/// `f64` box bounds.
pub type Bounds = ParamBounds<f64>;
/// `f32` parameter vector.
pub type Params32 = ParamVector<f32>;
pub type C64 = Complex<f64>;
