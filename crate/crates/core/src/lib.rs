//! Noise stability, influence, and mutual information of Boolean functions.
//!
//! The crate works with Boolean functions on the discrete cube `{0,1}^n`,
//! on the discrete torus `(ℤ/pℤ)^n`, and with players placed on a tree of
//! binary symmetric channels. Alongside the quantities themselves it provides
//! the exhaustive search machinery used to locate extremal functions at
//! fixed mean, and the shifting procedure that turns any function into a
//! monotone one without lowering any convex noise functional.

pub mod canonical;
pub mod cube;
pub mod error;
pub mod influence;
pub mod info;
pub mod noise;
pub mod reference;
pub mod search;
pub mod shift;
pub mod torus;
pub mod tree;
pub mod verify;

pub use cube::{BooleanFunction, CubeFunction, Spectrum};
pub use error::{Error, Result};
