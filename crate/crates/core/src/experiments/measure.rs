//! Empirical measures: normalised counts of marking images in boxes.

use serde::{Deserialize, Serialize};

use super::density::{check_grid, classify_entries, torus_class, EngineConfig, RhoData};
use super::report::{Class, EmpiricalMeasure, MassBox};
use crate::error::{Error, Result};
use crate::exact_torus::ball::fold_l1_ball;
use crate::exact_torus::TorusMulticurve;
use crate::lamination::coords::NormalCoords;
use crate::lamination::library::GeneratorLibrary;
use crate::lamination::orbit::enumerate_orbit_ball;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Restriction {
    All,
    NonPseudoAnosov,
}

/// A marking and the model it lives in.
#[derive(Clone, Debug, PartialEq)]
pub enum Marking {
    /// Image coordinates are `(i(m(gamma0), (1,0)), i(m(gamma0), (0,1)))`,
    /// and their sum is the size counted.
    Torus(TorusMulticurve),
    /// Image coordinates are the edge weights of the images summed.
    Engine { config: EngineConfig, gamma0: Vec<NormalCoords> },
}

/// Mass `count(box, L) / L^d` for each box and `L`, with `d` the dimension
/// of the space of measured laminations.
pub fn box_mass_series(
    marking: &Marking,
    restriction: Restriction,
    boxes: &[MassBox],
    grid: &[i64],
) -> Result<EmpiricalMeasure> {
    check_grid(grid)?;
    let lmax = *grid.last().unwrap();
    let keep = |c: Class| restriction == Restriction::All || c != Class::PseudoAnosov;
    let dim = match marking {
        Marking::Torus(_) => 2,
        Marking::Engine { config, .. } => crate::lamination::build_triangulation(config.surface)?.num_edges(),
    };
    for b in boxes {
        if b.lo.len() != dim || b.hi.len() != dim {
            return Err(Error::invalid(format!("boxes must have dimension {dim}")));
        }
    }
    let empty = Hits { counts: vec![0; grid.len()], inside: vec![vec![0; boxes.len()]; grid.len()] };
    let (model, exponent, hits) = match marking {
        Marking::Torus(gamma0) => {
            if !gamma0.fills() {
                return Err(Error::invalid("the marking does not fill the torus"));
            }
            let rho = RhoData::new(gamma0, &TorusMulticurve::standard_pair())?;
            let denom = rho.sigma_denom();
            let hits = fold_l1_ball(
                rho.l1_radius(lmax)?,
                empty,
                |acc, m| {
                    let parts = rho.parts(m);
                    let size = rho.ceil_from_parts(&parts);
                    if size <= lmax && keep(torus_class(m)) {
                        let x: Vec<i64> = parts.iter().map(|&v| v as i64).collect();
                        acc.add(grid, boxes, size, &x, denom);
                    }
                },
                Hits::merge,
            );
            ("torus".to_string(), 2, hits)
        }
        Marking::Engine { config, gamma0 } => {
            let lib = GeneratorLibrary::standard();
            let sl = lib.get(config.surface)?;
            let ball = enumerate_orbit_ball(sl, gamma0, lmax, config.limits)?;
            if !ball.complete {
                return Err(Error::Budget("orbit ball enumeration hit its caps".into()));
            }
            let classes = classify_entries(sl, ball.entries.iter().map(|e| e.word.as_str()), config.budget)?;
            let t = &sl.triangulation;
            let mut hits = empty;
            for (e, c) in ball.entries.iter().zip(classes) {
                if !keep(c) {
                    continue;
                }
                let w = sl.spell(if e.word.is_empty() { "1" } else { &e.word })?.compile(t)?;
                let mut img = vec![0i64; t.num_edges()];
                for g in gamma0 {
                    for (acc, v) in img.iter_mut().zip(w.apply(g).iter()) {
                        *acc += v;
                    }
                }
                hits.add(grid, boxes, e.weight, &img, 1);
            }
            (format!("engine {}", config.surface), config.surface.dimension(), hits)
        }
    };
    let mass = grid
        .iter()
        .zip(&hits.inside)
        .map(|(&l, row)| {
            let norm = (l as f64).powi(exponent as i32);
            row.iter().map(|&n| n as f64 / norm).collect()
        })
        .collect();
    Ok(EmpiricalMeasure { model, exponent, boxes: boxes.to_vec(), grid: grid.to_vec(), mass, counts: hits.counts })
}

/// Ball counts and box hits per grid value.
#[derive(Clone)]
struct Hits {
    counts: Vec<u64>,
    inside: Vec<Vec<u64>>,
}

impl Hits {
    /// Records a point of size `size` with coordinates `x / denom`.
    fn add(&mut self, grid: &[i64], boxes: &[MassBox], size: i64, x: &[i64], denom: i64) {
        for (i, &l) in grid.iter().enumerate().filter(|(_, &l)| l >= size) {
            self.counts[i] += 1;
            for (j, b) in boxes.iter().enumerate() {
                if b.contains_scaled(x, l * denom) {
                    self.inside[i][j] += 1;
                }
            }
        }
    }

    fn merge(mut self, other: Hits) -> Hits {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        for (ra, rb) in self.inside.iter_mut().zip(other.inside) {
            for (a, b) in ra.iter_mut().zip(rb) {
                *a += b;
            }
        }
        self
    }
}
