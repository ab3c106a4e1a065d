//! Pseudoanalytic function tools for the two-dimensional conductivity
//! equation `div(σ grad u) = 0` with separable conductivity.
//!
//! A conductivity `σ = s1(x1)·s2(x2)` turns the equation into a Vekua
//! equation for `W = √σ (∂1u, ...)` with weight `p = √(s2/s1)`. The crate
//! builds the generating pairs of that equation, its formal powers (exactly
//! for `σ = e^{2σ1x1 + 2σ2x2}` up to degree 2, by repeated path integration
//! otherwise) and the currents, potentials and streamlines they describe.
//!
//! - [`pseudoanalytic`]: generating pairs, characteristic coefficients, Bers
//!   derivatives and Vekua residuals
//! - [`formal_powers`]: generating sequences, (F, G)-integrals, formal powers
//!   and Taylor series
//! - [`quaternion_ohm`]: quaternions and the three-dimensional form of Ohm's law
//! - [`fields`]: current densities, potentials, streamlines and SVG output
//! - [`conductivity_fit`]: piecewise separable fits to sampled conductivities
//! - [`app`]: the commands behind the `vekua` binary
//!
//! Coordinates follow `ζ = x2 + i x1`, and `∂_ζ = ∂2 − i∂1`,
//! `∂_ζ̄ = ∂2 + i∂1` carry no factor ½.

pub mod app;
pub mod conductivity_fit;
pub mod error;
pub mod fields;
pub mod formal_powers;
pub mod grid;
pub mod pseudoanalytic;
pub mod quadrature;
pub mod quaternion_ohm;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use pseudoanalytic::Point;
