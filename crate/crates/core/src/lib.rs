//! Exact slope gap distributions of square-tiled translation surfaces.
//!
//! A square-tiled surface (origami) is encoded by a pair of permutations
//! (right, up) on its tiles. This crate computes, with exact rational
//! arithmetic end to end:
//!
//! * the SL(2,Z) orbit graph of a surface and its cusp data,
//! * the Poincaré section components of the horocycle flow as triangles
//!   in the plane, partitioned into winner regions,
//! * the exact piecewise-analytic slope gap distribution (breakpoints,
//!   pdf, cdf) and the covolume integral,
//! * independent brute-force oracles for every stage.

pub mod gaps;
pub mod geometry;
pub mod origami;
pub mod orbit;
pub mod quadrature;
pub mod rational;
pub mod transversal;
pub mod verify;
pub mod words;

pub use gaps::{covolume, total_pdf, PiecewisePdf};
pub use origami::{Origami, OrigamiError};
pub use orbit::{CuspDatum, OrbitGraph, OrbitError};
pub use rational::Q;
pub use transversal::{cusp_components, SectionComponent, WinnerRegion};
pub use words::{Letter, Mat2, Word};
