//! Labelled ideal triangulations.
//!
//! A triangle is a cyclic triple of edge labels in counter-clockwise order.
//! Side `i` of a triangle runs from its vertex `i` to vertex `i + 1`, so the
//! corner at vertex `i` sits between sides `i - 1` and `i`. Two triangulations
//! are equal when their triangle sets agree up to cyclic rotation of each
//! triple; the stored form is always the canonical one (each triple rotated
//! to its smallest rotation, then sorted).

use std::fmt;

use super::surface::SurfaceSpec;
use crate::error::{Error, Result};

/// A side of a triangle: `(triangle index, position 0..3)`.
pub type Side = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdealTriangulation {
    triangles: Vec<[usize; 3]>,
    num_edges: usize,
}

fn rotate_min(t: [usize; 3]) -> [usize; 3] {
    let r = [t, [t[1], t[2], t[0]], [t[2], t[0], t[1]]];
    *r.iter().min().unwrap()
}

/// Data of the square around a flippable edge: the edge, its two triangles
/// and the four outer sides `a, b, c, d` in counter-clockwise order, where
/// `a, c` and `b, d` are opposite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Square {
    pub edge: usize,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl IdealTriangulation {
    /// Builds and validates: every label in `0..E` used on exactly two sides,
    /// connected gluing, and Euler characteristic consistent with a punctured
    /// surface.
    pub fn new(triangles: Vec<[usize; 3]>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::invalid("triangulation has no triangles"));
        }
        let num_edges = 3 * triangles.len() / 2;
        if 3 * triangles.len() != 2 * num_edges {
            return Err(Error::invalid("odd number of triangle sides"));
        }
        let mut uses = vec![0usize; num_edges];
        for t in &triangles {
            for &e in t {
                if e >= num_edges {
                    return Err(Error::invalid(format!("edge label {e} out of range 0..{num_edges}")));
                }
                uses[e] += 1;
            }
        }
        if let Some(e) = uses.iter().position(|&u| u != 2) {
            return Err(Error::invalid(format!("edge {e} is used on {} sides, expected 2", uses[e])));
        }
        let mut tri = IdealTriangulation { triangles, num_edges };
        tri.canonicalize();
        if !tri.is_connected() {
            return Err(Error::invalid("triangulation is not connected"));
        }
        Ok(tri)
    }

    fn canonicalize(&mut self) {
        for t in self.triangles.iter_mut() {
            *t = rotate_min(*t);
        }
        self.triangles.sort_unstable();
    }

    fn is_connected(&self) -> bool {
        let n = self.triangles.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let sides = self.edge_sides();
        while let Some(t) = stack.pop() {
            for &e in &self.triangles[t] {
                for &(u, _) in &sides[e] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// The two sides carrying each edge label.
    pub fn edge_sides(&self) -> Vec<[Side; 2]> {
        let mut out = vec![[(usize::MAX, 0); 2]; self.num_edges];
        let mut filled = vec![0usize; self.num_edges];
        for (t, tri) in self.triangles.iter().enumerate() {
            for (i, &e) in tri.iter().enumerate() {
                out[e][filled[e]] = (t, i);
                filled[e] += 1;
            }
        }
        out
    }

    /// The side glued to `side`.
    pub fn partner(&self, sides: &[[Side; 2]], side: Side) -> Side {
        let e = self.triangles[side.0][side.1];
        if sides[e][0] == side {
            sides[e][1]
        } else {
            sides[e][0]
        }
    }

    /// Punctures as orbits of corners. Corner `(t, i)` is the corner at
    /// vertex `i` of triangle `t`.
    pub fn vertex_classes(&self) -> Vec<Vec<Side>> {
        let sides = self.edge_sides();
        let n = self.triangles.len();
        let mut seen = vec![[false; 3]; n];
        let mut classes = Vec::new();
        for t in 0..n {
            for i in 0..3 {
                if seen[t][i] {
                    continue;
                }
                let mut class = Vec::new();
                let mut cur = (t, i);
                while !seen[cur.0][cur.1] {
                    seen[cur.0][cur.1] = true;
                    class.push(cur);
                    // Side i leaves vertex i; on the other side of that edge
                    // the same puncture is the far end of the partner side.
                    let (u, j) = self.partner(&sides, cur);
                    cur = (u, (j + 1) % 3);
                }
                classes.push(class);
            }
        }
        classes
    }

    /// Puncture index of each corner.
    pub fn corner_vertices(&self) -> Vec<[usize; 3]> {
        let mut out = vec![[0usize; 3]; self.triangles.len()];
        for (v, class) in self.vertex_classes().iter().enumerate() {
            for &(t, i) in class {
                out[t][i] = v;
            }
        }
        out
    }

    pub fn num_punctures(&self) -> usize {
        self.vertex_classes().len()
    }

    /// Genus and puncture count recovered from the combinatorics.
    pub fn surface(&self) -> SurfaceSpec {
        let r = self.num_punctures() as i64;
        let chi = r - self.num_edges as i64 + self.triangles.len() as i64;
        let genus = (2 - chi) / 2;
        SurfaceSpec { genus: genus as u32, punctures: r as u32 }
    }

    pub fn is_flippable(&self, e: usize) -> bool {
        if e >= self.num_edges {
            return false;
        }
        let s = self.edge_sides();
        s[e][0].0 != s[e][1].0
    }

    /// The square around `e`, or an error if `e` is not flippable.
    pub fn square(&self, e: usize) -> Result<Square> {
        if e >= self.num_edges {
            return Err(Error::invalid(format!("edge {e} out of range 0..{}", self.num_edges)));
        }
        let sides = self.edge_sides();
        let [(t1, i1), (t2, i2)] = sides[e];
        if t1 == t2 {
            return Err(Error::invalid(format!("edge {e} is not flippable: both sides lie in one triangle")));
        }
        let x = self.triangles[t1];
        let y = self.triangles[t2];
        Ok(Square {
            edge: e,
            a: x[(i1 + 1) % 3],
            b: x[(i1 + 2) % 3],
            c: y[(i2 + 1) % 3],
            d: y[(i2 + 2) % 3],
        })
    }

    /// Replaces the diagonal `e` of its square by the other diagonal, keeping
    /// the label.
    pub fn flip(&self, e: usize) -> Result<Self> {
        let sq = self.square(e)?;
        let sides = self.edge_sides();
        let [(t1, _), (t2, _)] = sides[e];
        let mut triangles = self.triangles.clone();
        triangles[t1] = [e, sq.d, sq.a];
        triangles[t2] = [e, sq.b, sq.c];
        let mut out = IdealTriangulation { triangles, num_edges: self.num_edges };
        out.canonicalize();
        Ok(out)
    }

    /// Renames edge `l` to `perm[l]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.num_edges)?;
        let mut triangles: Vec<[usize; 3]> =
            self.triangles.iter().map(|t| [perm[t[0]], perm[t[1]], perm[t[2]]]).collect();
        triangles.iter_mut().for_each(|t| *t = rotate_min(*t));
        triangles.sort_unstable();
        Ok(IdealTriangulation { triangles, num_edges: self.num_edges })
    }

    /// Weight of edge `e` at each of its ends: the punctures at the two ends.
    pub fn edge_ends(&self) -> Vec<[usize; 2]> {
        let cv = self.corner_vertices();
        let sides = self.edge_sides();
        sides
            .iter()
            .map(|s| {
                let (t, i) = s[0];
                [cv[t][i], cv[t][(i + 1) % 3]]
            })
            .collect()
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::invalid(format!("permutation has length {}, expected {n}", perm.len())));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::invalid("relabelling is not a permutation"));
        }
        seen[p] = true;
    }
    Ok(())
}

impl fmt::Display for IdealTriangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.triangles.iter().map(|t| format!("{}.{}.{}", t[0], t[1], t[2])).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Standard triangulation: a fan in the `4g`-gon with side pairing
/// `a1 b1 a1' b1' ...` for `g >= 1`, or two triangles glued into a
/// thrice-punctured sphere for `g = 0`; further punctures are added by
/// subdividing triangle 0 at a new interior vertex.
pub fn build_triangulation(s: SurfaceSpec) -> Result<IdealTriangulation> {
    s.validate()?;
    let (mut triangles, mut next, extra) = if s.genus == 0 {
        (vec![[0, 1, 2], [0, 2, 1]], 3usize, s.punctures - 3)
    } else {
        let g = s.genus as usize;
        let n = 4 * g;
        // Polygon sides 0..2g are the paired labels; diagonals from vertex 0
        // get labels 2g.. in order.
        let side_label = |k: usize| -> usize {
            let block = k / 4;
            match k % 4 {
                0 | 2 => 2 * block,
                _ => 2 * block + 1,
            }
        };
        let mut tris = Vec::new();
        let mut next = 2 * g;
        // Triangle k has polygon vertices 0, k+1, k+2 and sides
        // (0 -> k+1), (k+1 -> k+2), (k+2 -> 0).
        let mut prev_diag = side_label(0);
        for k in 0..n - 2 {
            let mid = side_label(k + 1);
            let close = if k == n - 3 {
                side_label(n - 1)
            } else {
                let d = next;
                next += 1;
                d
            };
            tris.push([prev_diag, mid, close]);
            prev_diag = close;
        }
        (tris, next, s.punctures - 1)
    };
    for _ in 0..extra {
        let [x, y, z] = triangles[0];
        let (p, q, r) = (next, next + 1, next + 2);
        next += 3;
        triangles[0] = [x, q, p];
        triangles.push([y, r, q]);
        triangles.push([z, p, r]);
    }
    let tri = IdealTriangulation::new(triangles)?;
    debug_assert_eq!(tri.surface(), s);
    Ok(tri)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_counts() {
        for (g, r) in [(1, 1), (0, 4), (1, 2), (0, 5), (2, 1), (1, 3), (2, 2), (0, 6)] {
            let s = SurfaceSpec::new(g, r).unwrap();
            let t = build_triangulation(s).unwrap();
            assert_eq!(t.num_edges(), s.num_edges(), "{s}");
            assert_eq!(t.num_triangles(), s.num_triangles(), "{s}");
            assert_eq!(t.num_punctures(), r as usize, "{s}");
            assert_eq!(t.surface(), s);
        }
    }

    #[test]
    fn punctured_torus_shape() {
        let t = build_triangulation(SurfaceSpec::new(1, 1).unwrap()).unwrap();
        assert_eq!(t.triangles(), &[[0, 1, 2], [0, 1, 2]]);
        for e in 0..3 {
            assert!(t.is_flippable(e));
            // Every flip of the once-punctured torus returns the same shape.
            assert_eq!(t.flip(e).unwrap().num_punctures(), 1);
        }
    }

    #[test]
    fn flip_twice_is_identity() {
        for (g, r) in [(1, 1), (0, 4), (1, 2), (0, 5), (2, 1)] {
            let t = build_triangulation(SurfaceSpec::new(g, r).unwrap()).unwrap();
            for e in 0..t.num_edges() {
                if let Ok(f) = t.flip(e) {
                    assert_eq!(f.surface(), t.surface());
                    assert_eq!(f.flip(e).unwrap(), t);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_gluings() {
        assert!(IdealTriangulation::new(vec![[0, 1, 2], [0, 1, 1]]).is_err());
        assert!(IdealTriangulation::new(vec![[0, 1, 2], [0, 1, 7]]).is_err());
        assert!(IdealTriangulation::new(vec![[0, 0, 1], [1, 2, 2], [3, 4, 5], [3, 4, 5]]).is_err());
    }

    #[test]
    fn unflippable_self_folded() {
        // A self-folded triangle: edge 1 appears twice in one triangle.
        let t = IdealTriangulation::new(vec![[0, 1, 1], [0, 2, 3], [2, 4, 5], [3, 5, 4]]).unwrap();
        let e = 1;
        assert!(!t.is_flippable(e));
        assert!(t.flip(e).is_err());
    }

    #[test]
    fn relabel_roundtrip() {
        let t = build_triangulation(SurfaceSpec::new(1, 2).unwrap()).unwrap();
        let perm = vec![3, 0, 5, 1, 2, 4];
        let mut inv = vec![0; 6];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        assert_eq!(t.relabel(&perm).unwrap().relabel(&inv).unwrap(), t);
        assert!(t.relabel(&[0, 0, 1, 2, 3, 4]).is_err());
    }
}
