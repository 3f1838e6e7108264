//! Heuristic Nielsen–Thurston classification of flip words.
//!
//! `Periodic` and `ReducibleCertified` are certified by exact checks.
//! `PseudoAnosovCandidate` means the projective orbit of a generic
//! lamination settled into one linear cell with a dominant eigenvalue above
//! one; it is not a proof.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::coords::{edge_weight, enumerate_multicurves, is_valid, key_curves, reduce, NormalCoords};
use super::triangulation::IdealTriangulation;
use super::word::{CompiledWord, MappingWord};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyBudget {
    /// Largest order tried for periodicity.
    pub max_period: u32,
    /// Weight bound of the invariant multicurve search.
    pub max_weight: i64,
    /// Steps of the projective orbit.
    pub orbit_steps: usize,
}

impl Default for ClassifyBudget {
    fn default() -> Self {
        ClassifyBudget { max_period: 12, max_weight: 8, orbit_steps: 3000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Verdict {
    Periodic(u32),
    ReducibleCertified(NormalCoords),
    /// `transition` is the action on the face of the weight cone carrying
    /// the limit lamination, scaled to integers. Its powers converge, up to
    /// scale, to the rank-one projection onto the limit.
    PseudoAnosovCandidate { dilatation: f64, transition: Vec<Vec<i128>> },
    Unresolved,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Periodic(_) => "periodic",
            Verdict::ReducibleCertified(_) => "reducible",
            Verdict::PseudoAnosovCandidate { .. } => "pseudo-anosov",
            Verdict::Unresolved => "unresolved",
        }
    }

    pub fn is_pseudo_anosov(&self) -> bool {
        matches!(self, Verdict::PseudoAnosovCandidate { .. })
    }

    pub fn dilatation(&self) -> Option<f64> {
        match self {
            Verdict::PseudoAnosovCandidate { dilatation, .. } => Some(*dilatation),
            _ => None,
        }
    }
}

/// Reusable state for classifying many words on one triangulation.
#[derive(Clone, Debug)]
pub struct Classifier {
    triangulation: IdealTriangulation,
    keys: Vec<NormalCoords>,
    candidates: Vec<NormalCoords>,
    start: Vec<f64>,
    budget: ClassifyBudget,
}

const PROJECTIVE_TOL: f64 = 1e-12;
const POWER_TOL: f64 = 1e-12;
const EXPANDING: f64 = 1.0 + 1e-9;

impl Classifier {
    pub fn new(t: &IdealTriangulation, budget: ClassifyBudget) -> Self {
        let keys = key_curves(t);
        let candidates = enumerate_multicurves(t, budget.max_weight);
        // Starting point: a combination of the key curves with distinct
        // multiplicities, so that it is not peripheral.
        let sum = keys
            .iter()
            .enumerate()
            .fold(NormalCoords::zero(t.num_edges()), |acc, (i, k)| &acc + &k.scale(i as i64 + 1));
        let sum = reduce(t, &sum);
        let f = edge_weight(&sum) as f64;
        let start = sum.iter().map(|&x| x as f64 / f).collect();
        Classifier { triangulation: t.clone(), keys, candidates, start, budget }
    }

    pub fn triangulation(&self) -> &IdealTriangulation {
        &self.triangulation
    }

    pub fn budget(&self) -> ClassifyBudget {
        self.budget
    }

    /// Smallest `n <= max_period` with `word^n` fixing every key curve.
    pub fn period(&self, word: &CompiledWord) -> Option<u32> {
        let keys: Vec<Vec<i128>> = self.keys.iter().map(|k| k.iter().map(|&x| x as i128).collect()).collect();
        let mut images = keys.clone();
        let mut scratch = vec![0i128; self.start.len()];
        for n in 1..=self.budget.max_period {
            for x in images.iter_mut() {
                word.act_in_place(x, &mut scratch);
            }
            if images == keys {
                return Some(n);
            }
            // Growth this large rules out a short period.
            if images.iter().flatten().any(|&x| x > 1 << 80) {
                return None;
            }
        }
        None
    }

    /// First fixed multicurve in lexicographic order with weight at most
    /// the budget.
    pub fn invariant_multicurve(&self, word: &CompiledWord) -> Option<NormalCoords> {
        self.candidates.iter().find(|x| &word.apply(x) == *x).cloned()
    }

    pub fn classify(&self, word: &CompiledWord) -> Verdict {
        if let Some(n) = self.period(word) {
            return Verdict::Periodic(n);
        }
        if let Some(c) = self.invariant_multicurve(word) {
            return Verdict::ReducibleCertified(c);
        }
        self.orbit_verdict(word)
    }

    fn orbit_verdict(&self, word: &CompiledWord) -> Verdict {
        let n = self.start.len();
        let mut x = self.start.clone();
        let mut y = vec![0.0; n];
        let mut scratch = vec![0.0; n];
        let mut pattern = Vec::new();
        let mut prev_pattern: Vec<bool> = Vec::new();
        let mut settled = false;
        for _ in 0..self.budget.orbit_steps {
            y.copy_from_slice(&x);
            word.act_with_pattern(&mut y, &mut scratch, &mut pattern);
            let f: f64 = y.iter().sum();
            if f <= 0.0 {
                return Verdict::Unresolved;
            }
            y.iter_mut().for_each(|v| *v /= f);
            let delta = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            std::mem::swap(&mut x, &mut y);
            if pattern == prev_pattern && delta < PROJECTIVE_TOL {
                settled = true;
                break;
            }
            std::mem::swap(&mut pattern, &mut prev_pattern);
        }
        if !settled {
            return self.rounded_invariant(word, &x).map_or(Verdict::Unresolved, Verdict::ReducibleCertified);
        }
        let Some(m) = word.cell_matrix(&pattern) else {
            return Verdict::Unresolved;
        };
        let rayleigh: f64 = (0..n).map(|i| (0..n).map(|j| m[i][j] as f64 * x[j]).sum::<f64>()).sum();
        let expanding = match power_iteration(&m, &x) {
            Some(lambda) if lambda > EXPANDING && (lambda - rayleigh).abs() < 1e-6 * lambda => Some(lambda),
            _ => None,
        };
        if let Some(lambda) = expanding {
            if let Some((r, free)) = face_transition(&self.triangulation, &m, &x) {
                let limit: Vec<f64> = free.iter().map(|&e| x[e]).collect();
                if perron_projector_power(&r, &limit) {
                    let transition = r
                        .iter()
                        .map(|row| row.iter().map(|v| v.to_i128()).collect::<Option<Vec<_>>>())
                        .collect::<Option<Vec<_>>>();
                    if let Some(transition) = transition {
                        return Verdict::PseudoAnosovCandidate { dilatation: lambda, transition };
                    }
                }
            }
        }
        self.rounded_invariant(word, &x).map_or(Verdict::Unresolved, Verdict::ReducibleCertified)
    }

    /// Tries integral multicurves near the projective limit `x` of the orbit.
    fn rounded_invariant(&self, word: &CompiledWord, x: &[f64]) -> Option<NormalCoords> {
        for scale in 2..=400 {
            let c: Vec<i64> = x.iter().map(|v| (v * scale as f64).round() as i64).collect();
            if c.iter().all(|&v| v == 0) || !is_valid(&self.triangulation, &c) {
                continue;
            }
            let c = reduce(&self.triangulation, &c);
            if !c.is_zero() && word.apply(&c) == c {
                return Some(c);
            }
        }
        None
    }
}

/// Dominant eigenvalue along `start` by repeated exact products
/// `v <- M v` on an integer vector.
fn power_iteration(m: &[Vec<i128>], start: &[f64]) -> Option<f64> {
    let n = m.len();
    let mb: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let scale = (1u64 << 52) as f64;
    let mut v: Vec<BigInt> = start.iter().map(|&x| BigInt::from((x * scale).round() as i64)).collect();
    let mut prev = f64::NAN;
    for _ in 0..200 {
        let w: Vec<BigInt> = (0..n)
            .map(|i| (0..n).fold(BigInt::zero(), |acc, j| acc + &mb[i][j] * &v[j]))
            .collect();
        let fv: BigInt = v.iter().sum();
        let fw: BigInt = w.iter().sum();
        if !fv.is_positive() || !fw.is_positive() {
            return None;
        }
        let ratio = big_ratio(&fw, &fv);
        if (ratio - prev).abs() < POWER_TOL * ratio {
            return Some(ratio);
        }
        prev = ratio;
        // Keep the vector small by dropping common low bits.
        let shift = w.iter().map(|x| x.bits()).max().unwrap_or(0).saturating_sub(200);
        v = w.into_iter().map(|x| x >> shift).collect();
    }
    Some(prev)
}

/// The cell matrix `m` restricted to the span of the face of the weight
/// cone that the limit `x` lies on (the corners empty at `x` stay empty),
/// written in light edge coordinates that parametrise that span and scaled
/// to integers. `None` if the span is not invariant.
fn face_transition(t: &IdealTriangulation, m: &[Vec<i128>], x: &[f64]) -> Option<(Vec<Vec<BigInt>>, Vec<usize>)> {
    let n = x.len();
    let scale = x.iter().cloned().fold(0.0, f64::max);
    // Rows a + b - c of the corners that vanish at x.
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for tr in t.triangles() {
        for i in 0..3 {
            let (a, b, c) = (tr[(i + 2) % 3], tr[i], tr[(i + 1) % 3]);
            if (x[a] + x[b] - x[c]).abs() < 1e-9 * scale {
                let mut row = vec![BigRational::zero(); n];
                row[a] += BigRational::one();
                row[b] += BigRational::one();
                row[c] -= BigRational::one();
                rows.push(row);
            }
        }
    }
    // Reduced row echelon form, pivoting on the heaviest edges first so that
    // the free columns parametrising the span are the light ones.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| x[j].total_cmp(&x[i]).then(i.cmp(&j)));
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in order {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        rows[r].iter_mut().for_each(|v| *v *= &inv);
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for j in 0..n {
                    let d = &f * &rows[r][j];
                    rows[i][j] -= d;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    // Basis vector for each free column.
    let basis: Vec<Vec<BigRational>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -rows[i][f].clone();
            }
            v
        })
        .collect();
    let mr: Vec<Vec<BigRational>> =
        m.iter().map(|row| row.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect()).collect();
    let apply = |v: &[BigRational]| -> Vec<BigRational> {
        (0..n).map(|i| (0..n).fold(BigRational::zero(), |acc, j| acc + &mr[i][j] * &v[j])).collect()
    };
    let k = free.len();
    let mut restricted = vec![vec![BigRational::zero(); k]; k];
    for (j, b) in basis.iter().enumerate() {
        let img = apply(b);
        let mut back = vec![BigRational::zero(); n];
        for (i, &f) in free.iter().enumerate() {
            restricted[i][j] = img[f].clone();
            for e in 0..n {
                back[e] += &img[f] * &basis[i][e];
            }
        }
        if back != img {
            return None;
        }
    }
    let denom = restricted.iter().flatten().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let scaled = restricted.iter().map(|row| row.iter().map(|v| (v * &denom).to_integer()).collect()).collect();
    Some((scaled, free))
}

/// Whether some power `M^(2^j)`, `j <= 12`, is within `1e-9` (relative)
/// of a rank-one matrix whose range is spanned by `limit`: the dominant
/// eigenvalue is simple and strictly dominant, with `limit` its eigenvector.
fn perron_projector_power(m: &[Vec<BigInt>], limit: &[f64]) -> bool {
    let n = m.len();
    if n == 0 {
        return false;
    }
    let mut p = m.to_vec();
    for _ in 0..=12 {
        if near_rank_one(&p, limit) {
            return true;
        }
        p = (0..n)
            .map(|i| (0..n).map(|j| (0..n).fold(BigInt::zero(), |acc, k| acc + &p[i][k] * &p[k][j])).collect())
            .collect();
        // Only the direction matters; drop low bits to bound the size.
        let shift = p.iter().flatten().map(|x| x.bits()).max().unwrap_or(0).saturating_sub(256);
        p = p.into_iter().map(|row| row.into_iter().map(|x| x >> shift).collect()).collect();
    }
    false
}

fn near_rank_one(p: &[Vec<BigInt>], limit: &[f64]) -> bool {
    let n = p.len();
    let bits = p.iter().flatten().map(|x| x.bits()).max().unwrap_or(0);
    if bits == 0 {
        return false;
    }
    let shift = bits.saturating_sub(60);
    let f: Vec<Vec<f64>> = p
        .iter()
        .map(|row| row.iter().map(|x| (x >> shift).to_f64().unwrap_or(0.0)).collect())
        .collect();
    let top = f.iter().flatten().fold(0.0f64, |a, &b| a.max(b.abs()));
    let f: Vec<Vec<f64>> = f.iter().map(|row| row.iter().map(|v| v / top).collect()).collect();
    let (i0, j0) = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .max_by(|a, b| f[a.0][a.1].abs().total_cmp(&f[b.0][b.1].abs()))
        .unwrap();
    let pivot = f[i0][j0];
    for i in 0..n {
        for j in 0..n {
            if (f[i][j] * pivot - f[i][j0] * f[i0][j]).abs() > 1e-9 {
                return false;
            }
        }
    }
    // The range is the line through the limit.
    let lnorm = limit.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let col: Vec<f64> = (0..n).map(|i| f[i][j0] / pivot).collect();
    let cnorm = col.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    lnorm > 0.0 && (0..n).all(|i| (col[i] / cnorm - limit[i] / lnorm).abs() < 1e-6)
}

fn big_ratio(a: &BigInt, b: &BigInt) -> f64 {
    let shift = a.bits().max(b.bits()).saturating_sub(1000);
    let (a, b) = (a >> shift, b >> shift);
    let s = a.bits().max(b.bits()).saturating_sub(60);
    ((a >> s).to_f64().unwrap()) / ((b >> s).to_f64().unwrap())
}

/// Classifies `word` on `t` with a fresh [`Classifier`].
pub fn classify_word(t: &IdealTriangulation, word: &MappingWord, budget: ClassifyBudget) -> Result<Verdict> {
    let c = word.compile(t)?;
    Ok(Classifier::new(t, budget).classify(&c))
}

pub fn find_invariant_multicurve(
    t: &IdealTriangulation,
    word: &MappingWord,
    max_weight: i64,
) -> Result<Option<NormalCoords>> {
    let c = word.compile(t)?;
    Ok(enumerate_multicurves(t, max_weight).into_iter().find(|x| &c.apply(x) == x))
}
