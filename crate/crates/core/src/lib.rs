//! Exact computations with finite groupoids: nerves, inertia groupoids and
//! cyclic nerves, Hochschild/cyclic/periodic homology, the configuration
//! space model on the circle, and Chen–Ruan degree shifting.

pub mod catalog;
pub mod chen_ruan;
pub mod config;
pub mod groupoid;
pub mod homology;
pub mod linalg;
pub mod nerve;
