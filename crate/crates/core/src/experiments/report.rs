//! Result records shared by the experiments and the CLI.

use serde::{Deserialize, Serialize};

use crate::exact_torus::NTKind;
use crate::lamination::classify::Verdict;

/// Verdict of either engine, reduced to what the counts need.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Class {
    Periodic,
    Reducible,
    PseudoAnosov,
    Unresolved,
}

impl Class {
    pub fn label(self) -> &'static str {
        match self {
            Class::Periodic => "periodic",
            Class::Reducible => "reducible",
            Class::PseudoAnosov => "pseudo-anosov",
            Class::Unresolved => "unresolved",
        }
    }
}

impl From<NTKind> for Class {
    fn from(k: NTKind) -> Self {
        match k {
            NTKind::Periodic => Class::Periodic,
            NTKind::Reducible => Class::Reducible,
            NTKind::PseudoAnosov => Class::PseudoAnosov,
        }
    }
}

impl From<&Verdict> for Class {
    fn from(v: &Verdict) -> Self {
        match v {
            Verdict::Periodic(_) => Class::Periodic,
            Verdict::ReducibleCertified(_) => Class::Reducible,
            Verdict::PseudoAnosovCandidate { .. } => Class::PseudoAnosov,
            Verdict::Unresolved => Class::Unresolved,
        }
    }
}

/// Counts of one ball `{phi : F(phi) <= l}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    pub l: i64,
    pub total: u64,
    pub periodic: u64,
    pub reducible: u64,
    pub pseudo_anosov: u64,
    pub unresolved: u64,
    /// `false` when the enumeration hit a cap and the counts are lower
    /// bounds.
    pub complete: bool,
}

impl CountRow {
    /// Everything not classified pseudo-Anosov, unresolved included.
    pub fn nonpa(&self) -> u64 {
        self.periodic + self.reducible + self.unresolved
    }

    pub fn fraction(&self) -> f64 {
        ratio(self.nonpa(), self.total)
    }

    /// Fraction of elements certified periodic or reducible.
    pub fn certified_fraction(&self) -> f64 {
        ratio(self.periodic + self.reducible, self.total)
    }

    pub fn unresolved_fraction(&self) -> f64 {
        ratio(self.unresolved, self.total)
    }

    pub fn add(&mut self, class: Class, n: u64) {
        self.total += n;
        match class {
            Class::Periodic => self.periodic += n,
            Class::Reducible => self.reducible += n,
            Class::PseudoAnosov => self.pseudo_anosov += n,
            Class::Unresolved => self.unresolved += n,
        }
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub model: String,
    /// The function `F` whose sublevel sets are counted.
    pub f: String,
    pub rows: Vec<CountRow>,
    /// Seconds spent; kept out of serialised output so reports compare
    /// byte for byte.
    #[serde(skip)]
    pub wall_seconds: f64,
}

impl CountReport {
    pub fn complete(&self) -> bool {
        self.rows.iter().all(|r| r.complete)
    }

    /// Tallies `(F value, class)` items into cumulative rows on `grid`.
    pub fn tally(
        model: impl Into<String>,
        f: impl Into<String>,
        grid: &[i64],
        items: impl IntoIterator<Item = (i64, Class)>,
        complete: bool,
    ) -> Self {
        let mut rows: Vec<CountRow> = grid.iter().map(|&l| CountRow { l, complete, ..Default::default() }).collect();
        for (w, class) in items {
            // Rows are sorted, so every row from the first with l >= w counts it.
            let first = grid.partition_point(|&l| l < w);
            for row in &mut rows[first..] {
                row.add(class, 1);
            }
        }
        CountReport { model: model.into(), f: f.into(), rows, wall_seconds: 0.0 }
    }
}

/// Normalised counts in boxes at each `L`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalMeasure {
    pub model: String,
    /// Counts are divided by `L` to this power.
    pub exponent: u32,
    pub boxes: Vec<MassBox>,
    pub grid: Vec<i64>,
    /// `mass[i][j]`: box `j` at `grid[i]`.
    pub mass: Vec<Vec<f64>>,
    /// Ball count at each `L`, over all boxes or not.
    pub counts: Vec<u64>,
}

/// Axis-aligned box `lo <= x <= hi` in normalised image coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl MassBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        MassBox { lo, hi }
    }

    pub fn unit(dim: usize) -> Self {
        MassBox { lo: vec![0.0; dim], hi: vec![1.0; dim] }
    }

    /// Whether the point `x / l` lies in the box.
    pub fn contains_scaled(&self, x: &[i64], l: i64) -> bool {
        x.len() == self.lo.len()
            && x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(&v, (&lo, &hi))| {
                let v = v as f64;
                let l = l as f64;
                v >= lo * l && v <= hi * l
            })
    }
}

/// One non-pseudo-Anosov element of a ball and its neighbourhood data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolationMember {
    /// Entries `[a, b, c, d]`.
    pub matrix: [i64; 4],
    /// Word distance to the nearest other non-pseudo-Anosov element, if it
    /// is below `k`.
    pub nearest: Option<u32>,
    /// Smallest relative distance to the centralizers of the reference
    /// elements.
    pub centralizer_distance: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolationProfile {
    pub k: u32,
    pub radius: i64,
    pub isolated: Vec<IsolationMember>,
    pub dense: Vec<IsolationMember>,
}

/// Histogram of relative distances to centralizers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProximityProfile {
    pub radius: i64,
    pub window: u32,
    /// `(distance, number of elements)`, by increasing distance.
    pub histogram: Vec<(u64, u64)>,
}
