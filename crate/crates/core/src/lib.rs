//! Curvature engine for metric connections with parallel torsion on
//! three-dimensional Lie groups with left-invariant metrics, and the
//! residuals of the heterotic soliton system built from them.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod constructors;
pub mod frame;
pub mod geometry;
pub mod io;
pub mod residuals;
pub mod tensor;
pub mod torsion;
