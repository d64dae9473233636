//! Numerical geometry of Lagrangian and pseudoholomorphic submanifolds of the nearly
//! Kähler 6-sphere.

// Index loops mirror the tensor formulas they implement.
#![allow(clippy::needless_range_loop)]

pub mod cubic_lab;
pub mod gallery;
pub mod geometry_jet;
pub mod linalg;
pub mod nk6_forms;
pub mod octonion;
pub mod report;
pub mod tol;
pub mod tubes_rulings;
