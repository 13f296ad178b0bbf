//! Closed-form one- and two-slit diffraction amplitudes from the free
//! Feynman propagator, their asymptotic regimes, and the quadrature oracles
//! used to check them.
//!
//! The crate is `no_std` and needs only `alloc`. Amplitude math is carried
//! out in dimensionless variables: screen position `u = x/a`, the slit
//! Fresnel number `N_F(a) = 2a²/λL`, the magnification `η = 1 + L/D` and
//! the separation ratio `β = b/a`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod asymptotics;
pub mod error;
pub mod fixtures;
pub mod fresnel;
pub mod fringes;
pub mod normalization;
pub mod propagator;
pub mod quadrature;
pub mod slit_model;

pub use error::{Error, Result};
pub use fresnel::{fresnel_asymptotic, fresnel_c, fresnel_oracle, fresnel_s, FresnelPair};
pub use num_complex::Complex64;
pub use propagator::{ComplexAmplitude, KinematicScale};
pub use slit_model::{DimensionlessParams, IntensityCurve, SlitGeometry};
