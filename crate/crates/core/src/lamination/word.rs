//! Mapping classes as words of flips and relabellings.

use std::fmt;
use std::ops::{Add, Sub};

use super::coords::{edge_weight, NormalCoords};
use super::triangulation::{check_permutation, IdealTriangulation};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Flip(usize),
    /// Renames edge `l` to `perm[l]`.
    Relabel(Vec<usize>),
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Flip(e) => write!(f, "F{e}"),
            Move::Relabel(p) => {
                let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                write!(f, "P{}", parts.join(","))
            }
        }
    }
}

impl std::str::FromStr for Move {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("bad move {s:?}"));
        if let Some(rest) = s.strip_prefix('F') {
            return rest.parse().map(Move::Flip).map_err(|_| bad());
        }
        if let Some(rest) = s.strip_prefix('P') {
            return rest
                .split(',')
                .map(|x| x.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()
                .map(Move::Relabel);
        }
        Err(bad())
    }
}

/// A sequence of moves read left to right. As a map on curves, the first
/// move acts first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MappingWord {
    moves: Vec<Move>,
}

impl MappingWord {
    pub fn new(moves: Vec<Move>) -> Self {
        MappingWord { moves }
    }

    pub fn identity() -> Self {
        MappingWord::default()
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn num_flips(&self) -> usize {
        self.moves.iter().filter(|m| matches!(m, Move::Flip(_))).count()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &MappingWord) -> MappingWord {
        let mut moves = self.moves.clone();
        moves.extend(other.moves.iter().cloned());
        MappingWord { moves }
    }

    pub fn inverse(&self) -> MappingWord {
        let moves = self
            .moves
            .iter()
            .rev()
            .map(|m| match m {
                Move::Flip(e) => Move::Flip(*e),
                Move::Relabel(p) => {
                    let mut inv = vec![0; p.len()];
                    for (i, &x) in p.iter().enumerate() {
                        inv[x] = i;
                    }
                    Move::Relabel(inv)
                }
            })
            .collect();
        MappingWord { moves }
    }

    pub fn pow(&self, n: u32) -> MappingWord {
        let mut moves = Vec::with_capacity(self.moves.len() * n as usize);
        for _ in 0..n {
            moves.extend(self.moves.iter().cloned());
        }
        MappingWord { moves }
    }

    /// Replays the word on `start`, failing on an illegal flip or a bad
    /// permutation, and returns the final triangulation.
    pub fn trace(&self, start: &IdealTriangulation) -> Result<IdealTriangulation> {
        let mut cur = start.clone();
        for (k, m) in self.moves.iter().enumerate() {
            cur = match m {
                Move::Flip(e) => cur.flip(*e).map_err(|err| Error::invalid(format!("move {k}: {err}")))?,
                Move::Relabel(p) => cur.relabel(p).map_err(|err| Error::invalid(format!("move {k}: {err}")))?,
            };
        }
        Ok(cur)
    }

    /// Checks legality and the closure certificate: the final labelled
    /// triangulation equals the initial one.
    pub fn validate(&self, start: &IdealTriangulation) -> Result<()> {
        let end = self.trace(start)?;
        if &end != start {
            return Err(Error::invalid("word does not close up: final triangulation differs from the initial one"));
        }
        Ok(())
    }

    /// Precomputes the squares of all flips against `start`.
    pub fn compile(&self, start: &IdealTriangulation) -> Result<CompiledWord> {
        let mut cur = start.clone();
        let mut ops = Vec::with_capacity(self.moves.len());
        for (k, m) in self.moves.iter().enumerate() {
            match m {
                Move::Flip(e) => {
                    let sq = cur.square(*e).map_err(|err| Error::invalid(format!("move {k}: {err}")))?;
                    ops.push(Op::Flip { e: sq.edge, a: sq.a, b: sq.b, c: sq.c, d: sq.d });
                    cur = cur.flip(*e)?;
                }
                Move::Relabel(p) => {
                    check_permutation(p, cur.num_edges())?;
                    ops.push(Op::Relabel(p.clone()));
                    cur = cur.relabel(p)?;
                }
            }
        }
        if &cur != start {
            return Err(Error::invalid("word does not close up: final triangulation differs from the initial one"));
        }
        Ok(CompiledWord { ops, num_edges: start.num_edges() })
    }
}

impl fmt::Display for MappingWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.moves.iter().map(|m| m.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl std::str::FromStr for MappingWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace().map(str::parse).collect::<Result<Vec<Move>>>().map(MappingWord::new)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Op {
    Flip { e: usize, a: usize, b: usize, c: usize, d: usize },
    Relabel(Vec<usize>),
}

/// Coordinate types the piecewise-linear action runs over.
pub trait Weight: Copy + PartialOrd + Add<Output = Self> + Sub<Output = Self> + Default {}
impl Weight for i64 {}
impl Weight for i128 {}
impl Weight for f64 {}

/// A closed word with flip squares resolved, ready to act on coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledWord {
    ops: Vec<Op>,
    num_edges: usize,
}

impl CompiledWord {
    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn concat(&self, other: &CompiledWord) -> CompiledWord {
        let mut ops = self.ops.clone();
        ops.extend(other.ops.iter().cloned());
        CompiledWord { ops, num_edges: self.num_edges }
    }

    /// Applies the word in place. `scratch` must have the same length.
    pub fn act_in_place<W: Weight>(&self, w: &mut [W], scratch: &mut [W]) {
        for op in &self.ops {
            match op {
                Op::Flip { e, a, b, c, d } => {
                    let p = w[*a] + w[*c];
                    let q = w[*b] + w[*d];
                    let m = if p >= q { p } else { q };
                    w[*e] = m - w[*e];
                }
                Op::Relabel(perm) => {
                    for (l, &p) in perm.iter().enumerate() {
                        scratch[p] = w[l];
                    }
                    w.copy_from_slice(scratch);
                }
            }
        }
    }

    pub fn act<W: Weight>(&self, w: &[W]) -> Vec<W> {
        let mut out = w.to_vec();
        let mut scratch = vec![W::default(); w.len()];
        self.act_in_place(&mut out, &mut scratch);
        out
    }

    pub fn apply(&self, w: &NormalCoords) -> NormalCoords {
        NormalCoords::new(self.act(w.weights()))
    }

    /// Applies the word and records which branch of each flip's maximum was
    /// taken (`true` when `a + c` is the larger sum).
    pub fn act_with_pattern(&self, w: &mut [f64], scratch: &mut [f64], pattern: &mut Vec<bool>) {
        pattern.clear();
        for op in &self.ops {
            match op {
                Op::Flip { e, a, b, c, d } => {
                    let p = w[*a] + w[*c];
                    let q = w[*b] + w[*d];
                    pattern.push(p >= q);
                    w[*e] = p.max(q) - w[*e];
                }
                Op::Relabel(perm) => {
                    for (l, &p) in perm.iter().enumerate() {
                        scratch[p] = w[l];
                    }
                    w.copy_from_slice(scratch);
                }
            }
        }
    }

    /// The linear map of the cell selected by `pattern`, as an integer
    /// matrix acting on column vectors of edge weights.
    pub fn cell_matrix(&self, pattern: &[bool]) -> Option<Vec<Vec<i128>>> {
        let n = self.num_edges;
        // Row l expresses current coordinate l in terms of the initial ones.
        let mut rows: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
        let mut k = 0;
        for op in &self.ops {
            match op {
                Op::Flip { e, a, b, c, d } => {
                    let (x, y) = if *pattern.get(k)? { (*a, *c) } else { (*b, *d) };
                    k += 1;
                    let mut new = vec![0i128; n];
                    for j in 0..n {
                        new[j] = rows[x][j].checked_add(rows[y][j])?.checked_sub(rows[*e][j])?;
                    }
                    rows[*e] = new;
                }
                Op::Relabel(perm) => {
                    let mut next = rows.clone();
                    for (l, &p) in perm.iter().enumerate() {
                        next[p] = rows[l].clone();
                    }
                    rows = next;
                }
            }
        }
        Some(rows)
    }
}

/// Applies `word` to `w` after validating it against `t`.
pub fn apply_word(t: &IdealTriangulation, word: &MappingWord, w: &NormalCoords) -> Result<NormalCoords> {
    if w.len() != t.num_edges() {
        return Err(Error::invalid("weight vector length does not match the triangulation"));
    }
    Ok(word.compile(t)?.apply(w))
}

/// Flips one edge of a triangulation carrying a multicurve.
pub fn flip_edge(
    t: &IdealTriangulation,
    w: &NormalCoords,
    e: usize,
) -> Result<(IdealTriangulation, NormalCoords)> {
    if w.len() != t.num_edges() {
        return Err(Error::invalid("weight vector length does not match the triangulation"));
    }
    let sq = t.square(e)?;
    let mut out = w.clone().into_inner();
    out[e] = (w[sq.a] + w[sq.c]).max(w[sq.b] + w[sq.d]) - w[e];
    Ok((t.flip(e)?, NormalCoords::new(out)))
}

/// `edge_weight` of the image of `w`.
pub fn image_weight(word: &CompiledWord, w: &NormalCoords) -> i64 {
    edge_weight(&word.act(w.weights()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lamination::coords::tests::{random_multicurve, tri};
    use crate::lamination::coords::{components, is_valid, reduce};
    use rand::SeedableRng;

    #[test]
    fn flip_examples() {
        let t = tri(1, 1);
        // Square around edge 0 in the torus: sides 1, 2, 1, 2.
        let sq = t.square(0).unwrap();
        assert_eq!((sq.a, sq.b, sq.c, sq.d), (1, 2, 1, 2));
        let (t2, w2) = flip_edge(&t, &NormalCoords::new(vec![2, 1, 1]), 0).unwrap();
        assert_eq!(w2.weights(), &[0, 1, 1]);
        let (t3, w3) = flip_edge(&t2, &w2, 0).unwrap();
        assert_eq!(t3, t);
        assert_eq!(w3.weights(), &[2, 1, 1]);
    }

    #[test]
    fn flip_involution_exhaustive() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for (g, r) in [(1, 1), (0, 4), (1, 2), (0, 5)] {
            let t = tri(g, r);
            let samples: Vec<_> = (0..1000).map(|_| random_multicurve(&t, &mut rng, 5)).collect();
            for e in 0..t.num_edges() {
                if !t.is_flippable(e) {
                    continue;
                }
                for w in &samples {
                    let (t2, w2) = flip_edge(&t, w, e).unwrap();
                    assert!(is_valid(&t2, &w2));
                    let (t3, w3) = flip_edge(&t2, &w2, e).unwrap();
                    assert_eq!((&t3, &w3), (&t, w));
                }
            }
        }
    }

    #[test]
    fn flip_preserves_component_count() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for (g, r) in [(1, 2), (0, 5)] {
            let t = tri(g, r);
            for _ in 0..200 {
                let w = random_multicurve(&t, &mut rng, 3);
                let total: i64 = components(&t, &w).iter().map(|c| c.1).sum();
                for e in (0..t.num_edges()).filter(|&e| t.is_flippable(e)) {
                    let (t2, w2) = flip_edge(&t, &w, e).unwrap();
                    let total2: i64 = components(&t2, &w2).iter().map(|c| c.1).sum();
                    assert_eq!(total, total2);
                    assert_eq!(reduce(&t2, &w2), w2);
                }
            }
        }
    }

    #[test]
    fn word_roundtrip_and_inverse() {
        let t = tri(1, 1);
        // Flip 0 then swap the labels 0 and 1: a closed word on the torus.
        let w: MappingWord = "F0 P1,0,2".parse().unwrap();
        assert_eq!(w.to_string(), "F0 P1,0,2");
        w.validate(&t).unwrap();
        let c = w.compile(&t).unwrap();
        let ci = w.inverse().compile(&t).unwrap();
        let x = NormalCoords::new(vec![3, 2, 1]);
        assert_eq!(ci.apply(&c.apply(&x)), x);
        assert_eq!(c.apply(&x.scale(3)), c.apply(&x).scale(3));
        assert!("F0".parse::<MappingWord>().unwrap().validate(&t).is_err());
        assert!("X1".parse::<MappingWord>().is_err());
        assert_eq!(MappingWord::identity().compile(&t).unwrap().apply(&x), x);
    }

    #[test]
    fn cell_matrix_matches_action() {
        let t = tri(1, 1);
        let w: MappingWord = "F0 P1,0,2 F2 P0,2,1".parse().unwrap();
        let c = w.compile(&t).unwrap();
        let x = [3.0, 2.0, 1.0];
        let mut y = x;
        let mut scratch = [0.0; 3];
        let mut pattern = Vec::new();
        c.act_with_pattern(&mut y, &mut scratch, &mut pattern);
        let m = c.cell_matrix(&pattern).unwrap();
        for i in 0..3 {
            let v: f64 = (0..3).map(|j| m[i][j] as f64 * x[j]).sum();
            assert_eq!(v, y[i]);
        }
    }
}
