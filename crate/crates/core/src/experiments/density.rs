//! Counting balls and the share of non-pseudo-Anosov elements in them.

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{Class, CountReport};
use crate::error::{Error, Result};
use crate::exact_torus::ball::fold_l1_ball;
use crate::exact_torus::classify::kind_from_trace;
use crate::exact_torus::{PrimitiveClass, TorusMulticurve};
use crate::lamination::classify::{ClassifyBudget, Classifier};
use crate::lamination::library::{GeneratorLibrary, SurfaceLibrary};
use crate::lamination::orbit::{enumerate_orbit_ball, OrbitLimits};
use crate::lamination::surface::SurfaceSpec;

/// Size function on `SL(2, Z)` whose sublevel sets are counted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TorusNorm {
    /// `|a| + |b| + |c| + |d|`.
    L1,
    /// `i(m(sigma), eta)` for filling `sigma` and `eta`.
    Rho { sigma: TorusMulticurve, eta: TorusMulticurve },
}

impl TorusNorm {
    pub fn describe(&self) -> String {
        match self {
            TorusNorm::L1 => "|a|+|b|+|c|+|d|".to_string(),
            TorusNorm::Rho { sigma, eta } => {
                format!("i(m({}), {})", format_torus_multicurve(sigma), format_torus_multicurve(eta))
            }
        }
    }
}

/// Text form `p,q:w;p,q:w` with integer weights.
pub fn parse_torus_multicurve(s: &str) -> Result<TorusMulticurve> {
    let mut items = Vec::new();
    for part in s.split(';').filter(|p| !p.trim().is_empty()) {
        let (pq, w) = part.split_once(':').unwrap_or((part, "1"));
        let (p, q) = pq.split_once(',').ok_or_else(|| Error::invalid(format!("bad curve {part:?}")))?;
        let num = |x: &str| x.trim().parse::<i64>().map_err(|_| Error::invalid(format!("bad number in {part:?}")));
        let w = num(w)?;
        if w <= 0 {
            return Err(Error::invalid(format!("weight must be positive in {part:?}")));
        }
        items.push((PrimitiveClass::from_i64(num(p)?, num(q)?)?, w));
    }
    if items.is_empty() {
        return Err(Error::invalid("empty multicurve"));
    }
    Ok(TorusMulticurve::from_integer_weights(items))
}

pub fn format_torus_multicurve(m: &TorusMulticurve) -> String {
    let parts: Vec<String> = m.components().map(|(c, w)| format!("{},{}:{}", c.p(), c.q(), w)).collect();
    parts.join(";")
}

/// `rho` with integer data: components `(p, q, weight)` scaled to integers.
#[derive(Clone, Debug)]
pub(crate) struct RhoData {
    sigma: Vec<(i128, i128, i128)>,
    eta: Vec<(i128, i128, i128)>,
    sigma_denom: i128,
    eta_denom: i128,
    /// `l1(m) <= rho(m) / comparison` for every `m`.
    comparison: BigRational,
}

fn integer_components(m: &TorusMulticurve) -> Result<(Vec<(i128, i128, i128)>, i128)> {
    let denom = m.components().fold(BigInt::one(), |acc, (_, w)| acc.lcm(w.denom()));
    let to = |x: &BigInt| x.to_i128().ok_or_else(|| Error::invalid("multicurve entries too large"));
    let comps = m
        .components()
        .map(|(c, w)| Ok((to(c.p())?, to(c.q())?, to(&(w * &denom).to_integer())?)))
        .collect::<Result<Vec<_>>>()?;
    Ok((comps, to(&denom)?))
}

/// `min N(x)` over the unit sphere of the l1 norm, where
/// `N(x) = sum_j w_j |x x e_j|` is the intersection norm of `m`. `N` is
/// convex and piecewise linear, so the minimum sits at a corner of the
/// sphere or where `x` is parallel to a component.
fn l1_comparison(m: &TorusMulticurve) -> BigRational {
    let mut dirs: Vec<(BigInt, BigInt)> = vec![(BigInt::one(), BigInt::zero()), (BigInt::zero(), BigInt::one())];
    for (c, _) in m.components() {
        dirs.push((c.p().clone(), c.q().clone()));
    }
    dirs.iter()
        .map(|(p, q)| {
            let n: BigRational = m
                .components()
                .map(|(c, w)| w * BigRational::from_integer((p * c.q() - q * c.p()).abs()))
                .fold(BigRational::zero(), |a, b| a + b);
            n / BigRational::from_integer(p.abs() + q.abs())
        })
        .min()
        .expect("nonempty")
}

impl RhoData {
    pub(crate) fn new(sigma: &TorusMulticurve, eta: &TorusMulticurve) -> Result<Self> {
        if !sigma.fills() || !eta.fills() {
            return Err(Error::invalid("sigma and eta must both fill the torus"));
        }
        let (s, ds) = integer_components(sigma)?;
        let (e, de) = integer_components(eta)?;
        let comparison = l1_comparison(sigma) * l1_comparison(eta);
        Ok(RhoData { sigma: s, eta: e, sigma_denom: ds, eta_denom: de, comparison })
    }

    /// Radius of an l1 ball containing `{rho <= l}`.
    pub(crate) fn l1_radius(&self, l: i64) -> Result<i64> {
        let r = (BigRational::from_integer(l.into()) / &self.comparison).floor().to_integer();
        r.to_i64().ok_or_else(|| Error::invalid("grid too large"))
    }

    pub(crate) fn sigma_denom(&self) -> i64 {
        self.sigma_denom as i64
    }

    /// `sigma_denom * i(m(sigma), e_j)` for each component `e_j` of `eta`.
    pub(crate) fn parts(&self, [a, b, c, d]: [i64; 4]) -> Vec<i128> {
        let (a, b, c, d) = (a as i128, b as i128, c as i128, d as i128);
        self.eta
            .iter()
            .map(|&(pe, qe, _)| {
                self.sigma
                    .iter()
                    .map(|&(p, q, ws)| ws * ((a * p + b * q) * qe - (c * p + d * q) * pe).abs())
                    .sum()
            })
            .collect()
    }

    pub(crate) fn ceil_from_parts(&self, parts: &[i128]) -> i64 {
        let total: i128 = parts.iter().zip(&self.eta).map(|(x, e)| x * e.2).sum();
        Integer::div_ceil(&total, &(self.sigma_denom * self.eta_denom)) as i64
    }

    /// `ceil(rho(m))`.
    pub(crate) fn ceil(&self, m: [i64; 4]) -> i64 {
        self.ceil_from_parts(&self.parts(m))
    }
}

/// Exact counts over `{m in SL(2,Z) : norm(m) <= L}` for each `L` in `grid`
/// (increasing, positive).
pub fn torus_density(norm: &TorusNorm, grid: &[i64]) -> Result<CountReport> {
    check_grid(grid)?;
    let start = Instant::now();
    let lmax = *grid.last().unwrap();
    // Radius of an l1 ball containing the whole norm ball.
    let (radius, rho) = match norm {
        TorusNorm::L1 => (lmax, None),
        TorusNorm::Rho { sigma, eta } => {
            let rho = RhoData::new(sigma, eta)?;
            (rho.l1_radius(lmax)?, Some(rho))
        }
    };
    let width = lmax as usize + 1;
    // Histogram of norm values by class.
    let hist = fold_l1_ball(
        radius,
        vec![[0u64; 3]; width],
        |h, m| {
            let v = match &rho {
                None => m.iter().map(|x| x.abs()).sum(),
                Some(r) => r.ceil(m),
            };
            if v <= lmax {
                h[v as usize][torus_class(m) as usize] += 1;
            }
        },
        |mut x, y| {
            for (a, b) in x.iter_mut().zip(y) {
                for i in 0..3 {
                    a[i] += b[i];
                }
            }
            x
        },
    );
    let items = hist.iter().enumerate().flat_map(|(v, counts)| {
        [Class::Periodic, Class::Reducible, Class::PseudoAnosov]
            .into_iter()
            .zip(counts.iter())
            .map(move |(c, &n)| (v as i64, c, n))
    });
    let mut report = CountReport::tally("torus", norm.describe(), grid, std::iter::empty(), true);
    for (v, class, n) in items {
        for row in report.rows.iter_mut().filter(|r| r.l >= v) {
            row.add(class, n);
        }
    }
    report.wall_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

pub(crate) fn torus_class(m: [i64; 4]) -> Class {
    let central = m == [1, 0, 0, 1] || m == [-1, 0, 0, -1];
    Class::from(kind_from_trace(m[0] + m[3], central))
}

/// Elements of `{m : norm(m) <= radius}` with their norm values, in
/// lexicographic order of entries.
pub fn torus_ball(norm: &TorusNorm, radius: i64) -> Result<Vec<([i64; 4], i64)>> {
    if radius <= 0 {
        return Err(Error::invalid("radius must be positive"));
    }
    let rho = match norm {
        TorusNorm::L1 => None,
        TorusNorm::Rho { sigma, eta } => Some(RhoData::new(sigma, eta)?),
    };
    let l1 = match &rho {
        None => radius,
        Some(r) => r.l1_radius(radius)?,
    };
    let mut out = fold_l1_ball(
        l1,
        Vec::new(),
        |v: &mut Vec<([i64; 4], i64)>, m| {
            let size = match &rho {
                None => m.iter().map(|x| x.abs()).sum(),
                Some(r) => r.ceil(m),
            };
            if size <= radius {
                v.push((m, size));
            }
        },
        |mut x, y| {
            x.extend(y);
            x
        },
    );
    out.sort_unstable();
    Ok(out)
}

/// Configuration of the general engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub surface: SurfaceSpec,
    pub limits: OrbitLimits,
    pub budget: ClassifyBudget,
}

impl EngineConfig {
    pub fn new(surface: SurfaceSpec) -> Self {
        EngineConfig { surface, limits: OrbitLimits::default(), budget: ClassifyBudget::default() }
    }
}

/// Counts over the orbit ball `{phi : F(phi(gamma0)) <= L}` with `F` the
/// edge weight and `gamma0` the library marking. One search at the largest
/// `L` serves the whole grid.
pub fn engine_density(config: &EngineConfig, grid: &[i64]) -> Result<CountReport> {
    check_grid(grid)?;
    let start = Instant::now();
    let lib = GeneratorLibrary::standard();
    let sl = lib.get(config.surface)?;
    let lmax = *grid.last().unwrap();
    let ball = enumerate_orbit_ball(sl, &sl.gamma0, lmax, config.limits)?;
    let classes = classify_entries(sl, ball.entries.iter().map(|e| e.word.as_str()), config.budget)?;
    let items = ball.entries.iter().map(|e| e.weight).zip(classes);
    let mut report = CountReport::tally(
        format!("engine {}", config.surface),
        "edge weight of phi(gamma0)",
        grid,
        items,
        ball.complete,
    );
    report.wall_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Classifies generator words in parallel; results keep the input order.
pub fn classify_entries<'a>(
    sl: &SurfaceLibrary,
    words: impl Iterator<Item = &'a str>,
    budget: ClassifyBudget,
) -> Result<Vec<Class>> {
    let t = &sl.triangulation;
    let classifier = Classifier::new(t, budget);
    let words: Vec<&str> = words.collect();
    words
        .par_iter()
        .map(|w| {
            let spelled = if w.is_empty() { sl.spell("1")? } else { sl.spell(w)? };
            let compiled = spelled.compile(t)?;
            Ok(Class::from(&classifier.classify(&compiled)))
        })
        .collect()
}

pub(crate) fn check_grid(grid: &[i64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid("empty grid"));
    }
    if grid[0] <= 0 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("grid must be positive and strictly increasing"));
    }
    Ok(())
}
