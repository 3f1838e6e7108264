//! Balls in the orbit of a marking, by best-first search over group words.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::coords::{edge_weight, enumerate_multicurves, key_curves, neighbourhood_curves, NormalCoords};
use super::filling::disjoint_witness;
use super::library::SurfaceLibrary;
use super::word::CompiledWord;
use crate::error::{Error, Result};

/// One mapping class found in the ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitEntry {
    /// Concatenated images of the edge-neighbourhood curves, which pin
    /// down the class up to its action on curves.
    pub key: Vec<i64>,
    /// Generator letters, uppercase for inverses; the rightmost acts first.
    pub word: String,
    /// Total edge weight of the image of the marking.
    pub weight: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitBall {
    /// Entries sorted by `(weight, key)`.
    pub entries: Vec<OrbitEntry>,
    /// Distortion factor used for pruning.
    pub distortion: f64,
    /// `true` when neither the word cap nor the node cap was reached, so
    /// the listing is exact up to the pruning rule.
    pub complete: bool,
    pub nodes: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitLimits {
    pub word_cap: usize,
    pub max_nodes: usize,
}

impl Default for OrbitLimits {
    fn default() -> Self {
        OrbitLimits { word_cap: 64, max_nodes: 2_000_000 }
    }
}

/// Largest ratio `F(g x) / F(x)` over the generators and a fixed sample of
/// multicurves: an estimate of the coordinate operator bound.
pub fn distortion(lib: &SurfaceLibrary, gens: &[(char, CompiledWord)]) -> f64 {
    let t = &lib.triangulation;
    let mut sample = key_curves(t);
    sample.extend(enumerate_multicurves(t, 6));
    sample.extend(lib.gamma0_curves());
    let mut ratio: f64 = 1.0;
    for (_, g) in gens {
        for x in &sample {
            ratio = ratio.max(edge_weight(&g.apply(x)) as f64 / edge_weight(x) as f64);
        }
    }
    ratio
}

struct Node {
    /// Key curve images followed by marking images, `E` entries each.
    flat: Vec<i64>,
    word: String,
}

/// Every mapping class `phi` (modulo those acting trivially on curves) with
/// `F(phi(gamma0)) <= l`, where `gamma0` is a list of curves whose weights
/// add. Nodes above `l * distortion` are not expanded.
pub fn enumerate_orbit_ball(
    lib: &SurfaceLibrary,
    gamma0: &[NormalCoords],
    l: i64,
    limits: OrbitLimits,
) -> Result<OrbitBall> {
    let t = &lib.triangulation;
    if l <= 0 {
        return Err(Error::invalid("L must be positive"));
    }
    if let Some(w) = disjoint_witness(t, gamma0)? {
        return Err(Error::invalid(format!("marking does not fill: {w} is disjoint from it")));
    }
    let gens = lib.compiled_generators()?;
    let d = distortion(lib, &gens);
    let prune = (l as f64 * d).floor() as i64;
    let ne = t.num_edges();

    let mut flat0: Vec<i64> = neighbourhood_curves(t).into_iter().flat_map(|k| k.into_inner()).collect();
    let key_len = flat0.len();
    flat0.extend(gamma0.iter().flat_map(|c| c.weights().iter().copied()));
    let weight = |flat: &[i64]| -> i64 { flat[key_len..].iter().sum() };

    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    // Pending nodes grouped by weight, each group ordered by key.
    let mut pending: BTreeMap<i64, BTreeMap<Vec<i64>, Node>> = BTreeMap::new();
    let k0 = flat0[..key_len].to_vec();
    seen.insert(k0.clone());
    pending.entry(weight(&flat0)).or_default().insert(k0, Node { flat: flat0, word: String::new() });

    let mut entries = Vec::new();
    let mut complete = true;
    let mut nodes = 1usize;
    while let Some((&w, _)) = pending.iter().next() {
        if w > prune {
            break;
        }
        let layer: Vec<(Vec<i64>, Node)> = pending.remove(&w).unwrap().into_iter().collect();
        for (key, node) in &layer {
            if w <= l {
                entries.push(OrbitEntry { key: key.clone(), word: node.word.clone(), weight: w });
            }
        }
        let expandable: Vec<&Node> = layer
            .iter()
            .map(|(_, n)| n)
            .filter(|n| {
                let ok = n.word.len() < limits.word_cap;
                complete &= ok;
                ok
            })
            .collect();
        // Children are computed in parallel and merged in a fixed order.
        let children: Vec<Vec<(i64, Node)>> = expandable
            .par_iter()
            .map(|n| {
                let mut scratch = vec![0i64; ne];
                gens.iter()
                    .map(|(name, g)| {
                        let mut flat = n.flat.clone();
                        for chunk in flat.chunks_mut(ne) {
                            g.act_in_place(chunk, &mut scratch);
                        }
                        let mut word = String::with_capacity(n.word.len() + 1);
                        word.push(*name);
                        word.push_str(&n.word);
                        (weight(&flat), Node { flat, word })
                    })
                    .collect()
            })
            .collect();
        for (cw, node) in children.into_iter().flatten() {
            if cw > prune || seen.contains(&node.flat[..key_len]) {
                continue;
            }
            if nodes >= limits.max_nodes {
                complete = false;
                continue;
            }
            let key = node.flat[..key_len].to_vec();
            seen.insert(key.clone());
            nodes += 1;
            pending.entry(cw).or_default().insert(key, node);
        }
    }
    entries.sort_by(|a, b| (a.weight, &a.key).cmp(&(b.weight, &b.key)));
    Ok(OrbitBall { entries, distortion: d, complete, nodes })
}

/// Keys of all classes reachable by words of length at most `cap`, with
/// their weights; the plain breadth-first oracle for the ball search.
pub fn words_up_to(lib: &SurfaceLibrary, gamma0: &[NormalCoords], cap: usize) -> Result<BTreeSet<(i64, Vec<i64>)>> {
    let t = &lib.triangulation;
    let gens = lib.compiled_generators()?;
    let keys0: Vec<Vec<i64>> = neighbourhood_curves(t).into_iter().map(|k| k.into_inner()).collect();
    let marks0: Vec<Vec<i64>> = gamma0.iter().map(|c| c.weights().to_vec()).collect();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut out = BTreeSet::new();
    let mut layer = vec![(keys0, marks0)];
    for depth in 0..=cap {
        let mut next = Vec::new();
        for (keys, marks) in layer {
            let key: Vec<i64> = keys.iter().flatten().copied().collect();
            if !seen.insert(key.clone()) {
                continue;
            }
            out.insert((marks.iter().map(|m| edge_weight(m)).sum(), key));
            if depth < cap {
                for (_, g) in &gens {
                    next.push((keys.iter().map(|k| g.act(k)).collect(), marks.iter().map(|m| g.act(m)).collect()));
                }
            }
        }
        layer = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lamination::coords::tests::random_multicurve;
    use crate::lamination::library::GeneratorLibrary;
    use crate::lamination::surface::SurfaceSpec;
    use rand::SeedableRng;

    fn lib(g: u32, r: u32) -> SurfaceLibrary {
        GeneratorLibrary::standard().get(SurfaceSpec::new(g, r).unwrap()).unwrap().clone()
    }

    #[test]
    fn identity_at_marking_weight() {
        let l = lib(1, 1);
        let g0 = l.gamma0_curves();
        let f0: i64 = g0.iter().map(|c| edge_weight(c)).sum();
        let ball = enumerate_orbit_ball(&l, &g0, f0, OrbitLimits::default()).unwrap();
        assert!(ball.entries.iter().any(|e| e.word.is_empty() && e.weight == f0));
        assert!(ball.entries.iter().all(|e| e.weight <= f0));
        assert!(enumerate_orbit_ball(&l, &g0[..1], 10, OrbitLimits::default()).is_err());
        assert!(ball.distortion >= 1.0);
    }

    #[test]
    fn words_reproduce_keys() {
        let l = lib(1, 2);
        let g0 = l.gamma0_curves();
        let ball = enumerate_orbit_ball(&l, &g0, 24, OrbitLimits::default()).unwrap();
        let keys = neighbourhood_curves(&l.triangulation);
        for e in ball.entries.iter().take(200) {
            let w = l.spell(&e.word).unwrap().compile(&l.triangulation).unwrap();
            let k: Vec<i64> = keys.iter().flat_map(|c| w.apply(c).into_inner()).collect();
            assert_eq!(k, e.key);
            let f: i64 = g0.iter().map(|c| edge_weight(&w.apply(c))).sum();
            assert_eq!(f, e.weight);
        }
    }

    #[test]
    fn matches_breadth_first_oracle() {
        let l = lib(1, 2);
        let g0 = l.gamma0_curves();
        let f0: i64 = g0.iter().map(|c| edge_weight(c)).sum();
        let cap = 6;
        let oracle = words_up_to(&l, &g0, cap).unwrap();
        for ll in [f0, f0 + 3, f0 + 6] {
            let ball = enumerate_orbit_ball(&l, &g0, ll, OrbitLimits::default()).unwrap();
            let found: BTreeSet<(i64, Vec<i64>)> = ball.entries.iter().map(|e| (e.weight, e.key.clone())).collect();
            let expected: BTreeSet<(i64, Vec<i64>)> = oracle.iter().filter(|(w, _)| *w <= ll).cloned().collect();
            assert!(expected.is_subset(&found), "L = {ll}");
            // Anything the search reached by a short word, the oracle has too.
            for e in ball.entries.iter().filter(|e| e.word.len() <= cap) {
                assert!(expected.contains(&(e.weight, e.key.clone())), "L = {ll}: {}", e.word);
            }
        }
    }

    #[test]
    fn dedupe_soundness() {
        // Different words with the same key act identically on random curves.
        let l = lib(1, 2);
        let t = &l.triangulation;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let tests: Vec<_> = (0..1000).map(|_| random_multicurve(t, &mut rng, 4)).collect();
        let gens = l.compiled_generators().unwrap();
        let keys = neighbourhood_curves(t);
        let mut by_key: std::collections::HashMap<Vec<i64>, CompiledWord> = Default::default();
        let mut layer = vec![CompiledWord::concat(&gens[0].1, &gens[1].1)];
        let mut collisions = 0;
        for _ in 0..4 {
            let mut next = Vec::new();
            for w in &layer {
                let k: Vec<i64> = keys.iter().flat_map(|c| w.apply(c).into_inner()).collect();
                if let Some(prev) = by_key.get(&k) {
                    collisions += 1;
                    assert!(tests.iter().all(|x| prev.apply(x) == w.apply(x)));
                    continue;
                }
                by_key.insert(k, w.clone());
                for (_, g) in &gens {
                    next.push(w.concat(g));
                }
            }
            layer = next;
        }
        assert!(collisions > 0);
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let l = lib(0, 4);
        let g0 = l.gamma0_curves();
        let a = enumerate_orbit_ball(&l, &g0, 30, OrbitLimits::default()).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| enumerate_orbit_ball(&l, &g0, 30, OrbitLimits::default()).unwrap());
        assert_eq!(a, b);
    }
}
