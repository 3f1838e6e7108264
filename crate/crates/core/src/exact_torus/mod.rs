//! Exact model of the mapping class group of the once-punctured torus.

pub mod ball;
pub mod centralizer;
pub mod classify;
pub mod cohn;
pub mod curves;
pub mod farey;
pub mod matrix;
pub mod word;

pub use ball::{enumerate_l1_ball, fold_l1_ball, l1_ball_size};
pub use centralizer::{primitive_root, rel_distance_to_centralizer};
pub use classify::{classify_matrix, NTKind, NTType};
pub use cohn::{hyperbolic_length, slope_trace};
pub use curves::{
    apply_matrix, multicurve_intersection, rho_sigma_eta, slope_intersection, PrimitiveClass,
    TorusMulticurve,
};
pub use farey::farey_distance;
pub use matrix::{l1_norm, IntMatrix2};
pub use word::{positive_monoid_length, word_length, GeneratingSet, WordLength};
