//! Integral multicurves in normal coordinates.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Deref};

use serde::{Deserialize, Serialize};

use super::triangulation::IdealTriangulation;
use crate::error::{Error, Result};

/// Edge weights of a normal multicurve, one per edge label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormalCoords(Vec<i64>);

impl NormalCoords {
    pub fn new(weights: Vec<i64>) -> Self {
        NormalCoords(weights)
    }

    pub fn zero(n: usize) -> Self {
        NormalCoords(vec![0; n])
    }

    pub fn weights(&self) -> &[i64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        NormalCoords(self.0.iter().map(|w| w * k).collect())
    }
}

impl Deref for NormalCoords {
    type Target = [i64];
    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl Add for &NormalCoords {
    type Output = NormalCoords;
    fn add(self, rhs: &NormalCoords) -> NormalCoords {
        NormalCoords(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for NormalCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|w| w.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl std::str::FromStr for NormalCoords {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|e| Error::invalid(format!("bad weight {x:?}: {e}"))))
            .collect::<Result<Vec<_>>>()
            .map(NormalCoords)
    }
}

/// Outcome of [`validate_normal_coords`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Invalid { triangle: usize, reason: String },
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

/// Triangle inequalities, parity and non-negativity in every triangle. The
/// diagnosis names the first failing triangle in canonical order.
pub fn validate_normal_coords(t: &IdealTriangulation, w: &[i64]) -> Result<Validity> {
    if w.len() != t.num_edges() {
        return Err(Error::invalid(format!(
            "weight vector has length {}, triangulation has {} edges",
            w.len(),
            t.num_edges()
        )));
    }
    if let Some(e) = w.iter().position(|&x| x < 0) {
        let tri = t.triangles().iter().position(|tr| tr.contains(&e)).unwrap_or(0);
        return Ok(Validity::Invalid { triangle: tri, reason: format!("negative weight on edge {e}") });
    }
    for (i, tr) in t.triangles().iter().enumerate() {
        let [x, y, z] = tr.map(|e| w[e]);
        if (x + y + z) % 2 != 0 {
            return Ok(Validity::Invalid { triangle: i, reason: format!("odd total ({x}, {y}, {z})") });
        }
        if x > y + z || y > x + z || z > x + y {
            return Ok(Validity::Invalid {
                triangle: i,
                reason: format!("triangle inequality fails for ({x}, {y}, {z})"),
            });
        }
    }
    Ok(Validity::Valid)
}

pub fn is_valid(t: &IdealTriangulation, w: &[i64]) -> bool {
    matches!(validate_normal_coords(t, w), Ok(Validity::Valid))
}

/// Sum of all edge weights.
pub fn edge_weight(w: &[i64]) -> i64 {
    w.iter().sum()
}

/// Largest edge weight; an alternative proper homogeneous weight function.
pub fn max_edge_weight(w: &[i64]) -> i64 {
    w.iter().copied().max().unwrap_or(0)
}

/// Number of normal arcs at each corner: corner `i` of a triangle with side
/// weights `(w0, w1, w2)` carries `(w_{i-1} + w_i - w_{i+1}) / 2` arcs.
pub fn corner_counts(t: &IdealTriangulation, w: &[i64]) -> Vec<[i64; 3]> {
    t.triangles()
        .iter()
        .map(|tr| {
            let s = tr.map(|e| w[e]);
            [0, 1, 2].map(|i| (s[(i + 2) % 3] + s[i] - s[(i + 1) % 3]) / 2)
        })
        .collect()
}

/// The loop around puncture `v`: each edge end at `v` contributes 1.
pub fn vertex_link(t: &IdealTriangulation, v: usize) -> NormalCoords {
    let mut w = vec![0; t.num_edges()];
    for (e, ends) in t.edge_ends().iter().enumerate() {
        w[e] = ends.iter().filter(|&&x| x == v).count() as i64;
    }
    NormalCoords(w)
}

/// Multiplicity of the peripheral loop around each puncture.
pub fn peripheral_multiplicities(t: &IdealTriangulation, w: &[i64]) -> Vec<i64> {
    let cc = corner_counts(t, w);
    t.vertex_classes()
        .iter()
        .map(|class| class.iter().map(|&(tr, i)| cc[tr][i]).min().unwrap_or(0))
        .collect()
}

/// Removes all peripheral components.
pub fn reduce(t: &IdealTriangulation, w: &[i64]) -> NormalCoords {
    let mult = peripheral_multiplicities(t, w);
    let mut out = w.to_vec();
    if mult.iter().all(|&m| m == 0) {
        return NormalCoords(out);
    }
    let ends = t.edge_ends();
    for (e, [u, v]) in ends.iter().enumerate() {
        out[e] -= mult[*u] + mult[*v];
    }
    NormalCoords(out)
}

pub fn is_reduced(t: &IdealTriangulation, w: &[i64]) -> bool {
    peripheral_multiplicities(t, w).iter().all(|&m| m == 0)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Connected components of a valid multicurve with multiplicities, sorted.
/// Parallel copies of one curve appear once with their count.
pub fn components(t: &IdealTriangulation, w: &[i64]) -> Vec<(NormalCoords, i64)> {
    let ne = t.num_edges();
    let mut offset = vec![0usize; ne + 1];
    for e in 0..ne {
        offset[e + 1] = offset[e] + w[e] as usize;
    }
    let sides = t.edge_sides();
    // Crossing point `pos` counted from the start of side `(tr, i)`.
    let point = |tr: usize, i: usize, pos: i64| -> usize {
        let e = t.triangles()[tr][i];
        if sides[e][0] == (tr, i) {
            offset[e] + pos as usize
        } else {
            offset[e] + (w[e] - 1 - pos) as usize
        }
    };
    let mut uf = UnionFind::new(offset[ne]);
    let cc = corner_counts(t, w);
    for (tr, tri) in t.triangles().iter().enumerate() {
        for i in 0..3 {
            let prev = (i + 2) % 3;
            let wprev = w[tri[prev]];
            for j in 0..cc[tr][i] {
                uf.union(point(tr, i, j), point(tr, prev, wprev - 1 - j));
            }
        }
    }
    let mut by_root: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    for e in 0..ne {
        for p in offset[e]..offset[e + 1] {
            let r = uf.find(p);
            by_root.entry(r).or_insert_with(|| vec![0; ne])[e] += 1;
        }
    }
    let mut counts: BTreeMap<NormalCoords, i64> = BTreeMap::new();
    for (_, v) in by_root {
        *counts.entry(NormalCoords(v)).or_insert(0) += 1;
    }
    counts.into_iter().collect()
}

pub fn is_connected_curve(t: &IdealTriangulation, w: &[i64]) -> bool {
    let c = components(t, w);
    c.len() == 1 && c[0].1 == 1
}

/// The boundary of a regular neighbourhood of edge `e`, peripheral
/// components removed: each other edge is crossed once per end it has at an
/// endpoint of `e`.
pub fn edge_neighbourhood(t: &IdealTriangulation, e: usize) -> NormalCoords {
    let ends = t.edge_ends();
    let [u, v] = ends[e];
    let mut w = vec![0; t.num_edges()];
    for (f, fe) in ends.iter().enumerate() {
        if f != e {
            w[f] = fe.iter().filter(|&&x| x == u || x == v).count() as i64;
        }
    }
    reduce(t, &w)
}

/// Distinct non-peripheral curves appearing as components of the edge
/// neighbourhoods, sorted.
pub fn neighbourhood_curves(t: &IdealTriangulation) -> Vec<NormalCoords> {
    let mut out: Vec<NormalCoords> = Vec::new();
    for e in 0..t.num_edges() {
        let n = edge_neighbourhood(t, e);
        for (c, _) in components(t, &n) {
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    out.sort();
    out
}

/// Reduced multicurves used to pin down a mapping class: every edge
/// neighbourhood and every pairwise sum of them, without zeros or repeats.
pub fn key_curves(t: &IdealTriangulation) -> Vec<NormalCoords> {
    let base: Vec<NormalCoords> =
        (0..t.num_edges()).map(|e| edge_neighbourhood(t, e)).filter(|c| !c.is_zero()).collect();
    let mut out: Vec<NormalCoords> = Vec::new();
    let mut push = |c: NormalCoords| {
        if !c.is_zero() && !out.contains(&c) {
            out.push(c);
        }
    };
    for b in &base {
        push(b.clone());
    }
    for i in 0..base.len() {
        for j in i + 1..base.len() {
            push(reduce(t, &(&base[i] + &base[j])));
        }
    }
    out
}

/// Every nonzero valid reduced multicurve with `edge_weight <= max_weight`,
/// in lexicographic order of the weight vector.
pub fn enumerate_multicurves(t: &IdealTriangulation, max_weight: i64) -> Vec<NormalCoords> {
    let ne = t.num_edges();
    // For each triangle, the edge position after which all its sides are set.
    let mut last = vec![Vec::new(); ne];
    for (i, tr) in t.triangles().iter().enumerate() {
        let m = *tr.iter().max().unwrap();
        last[m].push(i);
    }
    let mut out = Vec::new();
    let mut w = vec![0i64; ne];
    fn rec(
        t: &IdealTriangulation,
        last: &[Vec<usize>],
        w: &mut Vec<i64>,
        e: usize,
        budget: i64,
        out: &mut Vec<NormalCoords>,
    ) {
        if e == w.len() {
            if w.iter().any(|&x| x > 0) && is_reduced(t, w) {
                out.push(NormalCoords(w.clone()));
            }
            return;
        }
        for x in 0..=budget {
            w[e] = x;
            let ok = last[e].iter().all(|&i| {
                let [a, b, c] = t.triangles()[i].map(|f| w[f]);
                a <= b + c && b <= a + c && c <= a + b && (a + b + c) % 2 == 0
            });
            if ok {
                rec(t, last, w, e + 1, budget - x, out);
            }
        }
        w[e] = 0;
    }
    rec(t, &last, &mut w, 0, max_weight, &mut out);
    out
}
