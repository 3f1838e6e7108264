//! Normalised, serialisable description of one CLI run.

use std::path::PathBuf;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::cache::sha256_hex;
use super::table::Format;
use crate::error::{Error, Result};
use crate::exact_torus::{IntMatrix2, TorusMulticurve};
use crate::experiments::density::{format_torus_multicurve, parse_torus_multicurve};
use crate::experiments::{EngineConfig, MassBox, Restriction, TorusNorm};
use crate::lamination::classify::ClassifyBudget;
use crate::lamination::orbit::OrbitLimits;
use crate::lamination::SurfaceSpec;

/// Every input that can change a run's output, with defaults filled in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub command: CommandSpec,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub plot_dir: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    pub threads: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum CommandSpec {
    /// `label_only` prints just the kind, as when no format is asked for.
    Classify { target: ClassifyTarget, label_only: bool },
    Ball { model: ModelSpec, radius: i64 },
    Density { model: ModelSpec, grid: Vec<i64> },
    Exponent { source: CountSource, grid: Vec<i64>, top_fraction: f64 },
    Boxmass { model: ModelSpec, marking: Option<String>, restriction: Restriction, boxes: Vec<MassBox>, grid: Vec<i64> },
    Multicurves { surface: Option<SurfaceSpec>, grid: Vec<i64> },
    Isolation { k: u32, radius: i64, window: u32, references: Vec<[i64; 4]> },
    Maher { radius: i64, window: u32, references: Vec<[i64; 4]> },
    Crossval { samples: usize, length_cap: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClassifyTarget {
    /// Entries as decimal strings, so any size survives a round trip.
    Matrix { entries: [String; 4] },
    /// Generator letters of the surface library.
    Word { surface: SurfaceSpec, word: String, budget: ClassifyBudget },
    /// Raw flip and relabel moves.
    Moves { surface: SurfaceSpec, moves: String, budget: ClassifyBudget },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum ModelSpec {
    Torus { norm: NormSpec },
    Engine { surface: SurfaceSpec, limits: OrbitLimits, budget: ClassifyBudget },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "norm", rename_all = "kebab-case")]
pub enum NormSpec {
    L1,
    /// Multicurves in canonical `p,q:w;...` form.
    Rho { sigma: String, eta: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "counts", rename_all = "kebab-case")]
pub enum CountSource {
    Ball { model: ModelSpec },
    Multicurves { surface: Option<SurfaceSpec> },
}

impl RunSpec {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run specs serialise")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })
    }

    /// Hash of everything that shapes the output bytes. Paths and thread
    /// counts are left out; they do not change what is written.
    pub fn content_hash(&self) -> String {
        let key = serde_json::to_string(&(&self.command, self.format)).expect("run specs serialise");
        sha256_hex(key.as_bytes())
    }
}

impl NormSpec {
    pub fn rho(sigma: &str, eta: &str) -> Result<Self> {
        Ok(NormSpec::Rho { sigma: canonical_multicurve(sigma)?, eta: canonical_multicurve(eta)? })
    }

    pub fn to_norm(&self) -> Result<TorusNorm> {
        Ok(match self {
            NormSpec::L1 => TorusNorm::L1,
            NormSpec::Rho { sigma, eta } => {
                TorusNorm::Rho { sigma: parse_torus_multicurve(sigma)?, eta: parse_torus_multicurve(eta)? }
            }
        })
    }
}

impl ModelSpec {
    pub fn engine_config(&self) -> Option<EngineConfig> {
        match self {
            ModelSpec::Engine { surface, limits, budget } => {
                Some(EngineConfig { surface: *surface, limits: *limits, budget: *budget })
            }
            ModelSpec::Torus { .. } => None,
        }
    }
}

pub fn canonical_multicurve(s: &str) -> Result<String> {
    Ok(format_torus_multicurve(&parse_torus_multicurve(s)?))
}

pub fn parse_multicurve(s: &str) -> Result<TorusMulticurve> {
    parse_torus_multicurve(s)
}

/// `g,r` or `S_g,r`.
pub fn parse_surface(s: &str) -> Result<SurfaceSpec> {
    let body = s.trim().trim_start_matches("S_").trim_start_matches('S');
    let (g, r) = body.split_once(',').ok_or_else(|| Error::invalid(format!("surface {s:?} is not g,r")))?;
    let num = |x: &str| x.trim().parse::<u32>().map_err(|_| Error::invalid(format!("surface {s:?} is not g,r")));
    SurfaceSpec::new(num(g)?, num(r)?)
}

/// `a,b,c,d` with determinant one.
pub fn parse_matrix(s: &str) -> Result<IntMatrix2> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Error::invalid(format!("matrix {s:?} needs four comma-separated entries")));
    }
    let mut e = Vec::with_capacity(4);
    for p in parts {
        e.push(p.parse::<BigInt>().map_err(|_| Error::invalid(format!("bad matrix entry {p:?}")))?);
    }
    let [a, b, c, d]: [BigInt; 4] = e.try_into().expect("four entries");
    IntMatrix2::new(a, b, c, d)
}

pub fn parse_small_matrix(s: &str) -> Result<[i64; 4]> {
    parse_matrix(s)?.to_i64().ok_or_else(|| Error::invalid(format!("matrix {s:?} has entries beyond 64 bits")))
}

/// `lo1,lo2,...:hi1,hi2,...`.
pub fn parse_box(s: &str) -> Result<MassBox> {
    let bad = || Error::invalid(format!("box {s:?} is not lo,..:hi,.."));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let nums = |x: &str| -> Result<Vec<f64>> {
        x.split(',').map(|v| v.trim().parse::<f64>().map_err(|_| bad())).collect()
    };
    let (lo, hi) = (nums(lo)?, nums(hi)?);
    if lo.len() != hi.len() || lo.iter().zip(&hi).any(|(a, b)| !(a.is_finite() && b.is_finite() && a <= b)) {
        return Err(bad());
    }
    Ok(MassBox::new(lo, hi))
}

pub fn format_box(b: &MassBox) -> String {
    let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    format!("{}:{}", join(&b.lo), join(&b.hi))
}

/// Grid forms: `50:1600:x2` (geometric), `10:100:+10` (arithmetic) or a
/// list `5,10,20`. The result is strictly increasing and positive.
pub fn parse_grid(s: &str) -> Result<Vec<i64>> {
    let bad = |why: &str| Error::invalid(format!("grid {s:?}: {why}"));
    let int = |x: &str| x.trim().parse::<i64>().map_err(|_| bad("not an integer"));
    let grid: Vec<i64> = if let Some((start, rest)) = s.split_once(':') {
        let (end, step) = rest.split_once(':').ok_or_else(|| bad("expected start:end:step"))?;
        let (start, end) = (int(start)?, int(end)?);
        if start <= 0 || end < start {
            return Err(bad("need 0 < start <= end"));
        }
        let mut out = vec![start];
        let step = step.trim();
        let next: Box<dyn Fn(i64) -> Option<i64>> = if let Some(f) = step.strip_prefix('x') {
            let f = int(f)?;
            if f < 2 {
                return Err(bad("factor must be at least 2"));
            }
            Box::new(move |v: i64| v.checked_mul(f))
        } else if let Some(d) = step.strip_prefix('+') {
            let d = int(d)?;
            if d < 1 {
                return Err(bad("step must be positive"));
            }
            Box::new(move |v: i64| v.checked_add(d))
        } else {
            return Err(bad("step must be xN or +N"));
        };
        while let Some(v) = next(*out.last().unwrap()).filter(|&v| v <= end) {
            out.push(v);
        }
        out
    } else {
        s.split(',').map(int).collect::<Result<_>>()?
    };
    if grid.is_empty() || grid[0] <= 0 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad("values must be positive and strictly increasing"));
    }
    Ok(grid)
}

pub fn format_grid(grid: &[i64]) -> String {
    grid.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("50:1600:x2").unwrap(), vec![50, 100, 200, 400, 800, 1600]);
        assert_eq!(parse_grid("10:35:+10").unwrap(), vec![10, 20, 30]);
        assert_eq!(parse_grid("3,5,9").unwrap(), vec![3, 5, 9]);
        assert_eq!(parse_grid("7:7:x2").unwrap(), vec![7]);
        for bad in ["", "0:10:x2", "5,4", "1:10:x1", "1:10:-1", "1:10", "a,b", "10:5:+1"] {
            assert!(parse_grid(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn matrices_and_surfaces() {
        assert_eq!(parse_small_matrix("1, 99, 0, 1").unwrap(), [1, 99, 0, 1]);
        assert!(parse_matrix("1,0,0,2").is_err());
        assert!(parse_matrix("1,0,0").is_err());
        let big = parse_matrix("1,100000000000000000000000,0,1").unwrap();
        assert!(big.to_i64().is_none());
        assert_eq!(parse_surface("1,2").unwrap(), SurfaceSpec::new(1, 2).unwrap());
        assert_eq!(parse_surface("S_0,5").unwrap(), SurfaceSpec::new(0, 5).unwrap());
        assert!(parse_surface("0,3").is_err());
        assert!(parse_surface("12").is_err());
    }

    #[test]
    fn boxes() {
        let b = parse_box("0,0.5:1,2").unwrap();
        assert_eq!(format_box(&b), "0,0.5:1,2");
        assert!(parse_box("0,0:1").is_err());
        assert!(parse_box("1:0").is_err());
    }

    #[test]
    fn json_round_trip_is_stable() {
        let spec = RunSpec {
            command: CommandSpec::Boxmass {
                model: ModelSpec::Torus { norm: NormSpec::rho("0,1 ; 1,0:2", "1,1").unwrap() },
                marking: Some(canonical_multicurve("1,0;0,1").unwrap()),
                restriction: Restriction::NonPseudoAnosov,
                boxes: vec![MassBox::unit(2), parse_box("0.1,0.2:0.3,0.4").unwrap()],
                grid: vec![50, 100],
            },
            format: Format::Json,
            out: Some("x.json".into()),
            plot_dir: None,
            cache: None,
            threads: Some(3),
        };
        let text = spec.to_json();
        let back = RunSpec::from_json(&text).unwrap();
        assert_eq!(back, spec);
        assert_eq!(back.to_json(), text);
        let mut moved = spec.clone();
        moved.out = None;
        moved.threads = None;
        assert_eq!(moved.content_hash(), spec.content_hash());
        moved.format = Format::Csv;
        assert_ne!(moved.content_hash(), spec.content_hash());
        assert!(RunSpec::from_json("{").is_err());
    }

    #[test]
    fn equal_multicurves_normalise_equally() {
        assert_eq!(NormSpec::rho("1,0;0,1", "0,1:1;1,0").unwrap(), NormSpec::rho("0,1;1,0", "1,0;0,1").unwrap());
    }
}
