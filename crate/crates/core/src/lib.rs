//! Logarithmic Image Processing (LIP) Asplund metrics and distance maps.
//!
//! The crate covers:
//!
//! * pointwise LIP algebra ([`lip`]): addition, scalar multiplication,
//!   negation, subtraction, transmittance and the isomorphism `xi`;
//! * grey-level dilation and erosion by a structuring function ([`morphology`]);
//! * the LIP-multiplicative and LIP-additive Asplund metrics, their bound maps
//!   and distance maps, each by two computation routes, plus scan oracles
//!   ([`asplund`]);
//! * lighting-change simulation, ring probes and detection by map minima
//!   ([`probing`]);
//! * PGM, `fmap` and `probe` file formats ([`io`]).
//!
//! All arithmetic is `f64`. Grey values live in `[0, M]` with `M` carried by
//! every raster as a [`ScaleM`]; binary operations refuse to mix scales.

pub mod asplund;
mod error;
mod ext_real;
pub mod io;
pub mod lip;
pub mod morphology;
pub mod probing;
mod raster;

pub use error::{Error, Result};
pub use ext_real::ExtReal;
pub use morphology::Probe;
pub use raster::{FmMap, GreyImage, RealMap, Regime, ScaleM, ValueMap};
