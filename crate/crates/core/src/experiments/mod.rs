//! Counting harness built on both engines.

pub mod crossval;
pub mod density;
pub mod growth;
pub mod isolation;
pub mod measure;
pub mod multicurves;
pub mod report;

pub use crossval::{cross_validate_torus, CrossValidation};
pub use density::{engine_density, torus_density, EngineConfig, TorusNorm};
pub use growth::{fit_loglog, growth_exponent, GrowthFit};
pub use isolation::{maher_proximity_profile, split_isolated_dense};
pub use measure::{box_mass_series, Marking, Restriction};
pub use multicurves::{count_surface_multicurves, count_torus_multicurves};
pub use report::{Class, CountReport, CountRow, EmpiricalMeasure, IsolationProfile, MassBox, ProximityProfile};

use crate::error::Result;

/// Which engine and size function a density run uses.
#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    Torus(TorusNorm),
    Engine(EngineConfig),
}

/// Counts of each ball on `grid` with the non-pseudo-Anosov share.
pub fn density_experiment(model: &Model, grid: &[i64]) -> Result<CountReport> {
    match model {
        Model::Torus(norm) => torus_density(norm, grid),
        Model::Engine(config) => engine_density(config, grid),
    }
}
