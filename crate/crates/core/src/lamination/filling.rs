//! Disjointness and filling for systems of curves.

use super::coords::{components, is_reduced, NormalCoords};
use super::triangulation::IdealTriangulation;
use crate::error::{Error, Result};

/// Box vectors examined before a filling check gives up.
pub const FILLING_BUDGET: usize = 20_000_000;

/// Whether two multicurves can be realised disjointly: exactly when the
/// normal sum splits into the components of both.
pub fn disjoint(t: &IdealTriangulation, x: &[i64], y: &[i64]) -> bool {
    let sum: Vec<i64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
    let mut expected = components(t, x);
    for (c, k) in components(t, y) {
        match expected.iter_mut().find(|(d, _)| d == &c) {
            Some(entry) => entry.1 += k,
            None => expected.push((c, k)),
        }
    }
    expected.sort();
    components(t, &sum) == expected
}

/// A non-peripheral multicurve disjoint from every curve in `curves`, if
/// one exists.
///
/// The search is exact: a boundary component of a regular neighbourhood of
/// the union crosses edge `e` at most `2 * sum_i curves[i][e]` times, so if
/// the system does not fill, a witness lies in that box.
pub fn disjoint_witness(t: &IdealTriangulation, curves: &[NormalCoords]) -> Result<Option<NormalCoords>> {
    let ne = t.num_edges();
    if curves.is_empty() {
        return Err(Error::invalid("empty curve system"));
    }
    for c in curves {
        if c.len() != ne {
            return Err(Error::invalid("curve length does not match the triangulation"));
        }
    }
    let bound: Vec<i64> = (0..ne).map(|e| 2 * curves.iter().map(|c| c[e]).sum::<i64>()).collect();
    let mut last = vec![Vec::new(); ne];
    for (i, tr) in t.triangles().iter().enumerate() {
        last[*tr.iter().max().unwrap()].push(i);
    }
    let mut w = vec![0i64; ne];
    let mut visited = 0usize;
    let found = search(t, curves, &bound, &last, &mut w, 0, &mut visited)?;
    Ok(found.map(NormalCoords::new))
}

fn search(
    t: &IdealTriangulation,
    curves: &[NormalCoords],
    bound: &[i64],
    last: &[Vec<usize>],
    w: &mut Vec<i64>,
    e: usize,
    visited: &mut usize,
) -> Result<Option<Vec<i64>>> {
    if e == w.len() {
        *visited += 1;
        if *visited > FILLING_BUDGET {
            return Err(Error::Budget("filling check exceeded its search budget".into()));
        }
        if w.iter().any(|&x| x > 0) && is_reduced(t, w) && curves.iter().all(|c| disjoint(t, w, c)) {
            return Ok(Some(w.clone()));
        }
        return Ok(None);
    }
    for x in 0..=bound[e] {
        w[e] = x;
        let ok = last[e].iter().all(|&i| {
            let [a, b, c] = t.triangles()[i].map(|f| w[f]);
            a <= b + c && b <= a + c && c <= a + b && (a + b + c) % 2 == 0
        });
        if ok {
            if let Some(found) = search(t, curves, bound, last, w, e + 1, visited)? {
                return Ok(Some(found));
            }
        }
    }
    w[e] = 0;
    Ok(None)
}

/// Whether the curves fill: every complementary region is a disc or a
/// once-punctured disc.
pub fn fills(t: &IdealTriangulation, curves: &[NormalCoords]) -> Result<bool> {
    Ok(disjoint_witness(t, curves)?.is_none())
}
