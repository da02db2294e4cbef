//! Exact lattice, polygon, Laurent inversion and period computations.

// index loops read closer to the matrix formulas they implement
#![allow(clippy::needless_range_loop)]

pub mod lattice;
pub mod polygon;
pub mod param;
pub mod scaffold;
pub mod periods;
pub mod fixtures;
