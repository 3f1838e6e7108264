//! Measured laminations on punctured surfaces through ideal triangulations.

pub mod classify;
pub mod coords;
pub mod filling;
pub mod library;
pub mod orbit;
pub mod surface;
pub mod triangulation;
pub mod twist;
pub mod word;

pub use coords::{
    components, edge_weight, enumerate_multicurves, is_valid, key_curves, reduce, validate_normal_coords,
    NormalCoords, Validity,
};
pub use surface::SurfaceSpec;
pub use triangulation::{build_triangulation, IdealTriangulation};
pub use twist::twist_word;
pub use word::{apply_word, flip_edge, CompiledWord, MappingWord, Move};
