//! Isostatic pin-jointed frameworks with point-group symmetry.
//!
//! Scalar and symmetry-extended Maxwell counts, per-element necessary
//! conditions, numerical rank of the rigidity matrix, the (2,3) pebble game,
//! and generators for symmetric isostatic frameworks.

pub mod constructgen;
pub mod maxwell;
pub mod framework;
pub mod laman;
pub mod numrank;
pub mod symdetect;

pub use framework::{Bar, Dimension, Framework, FrameworkError, FrameworkFile, Joint};
pub use numrank::{mobility, KinematicSummary};
pub use symdetect::{analyze_symmetry, FrameworkSymmetry, PointGroupInfo};
