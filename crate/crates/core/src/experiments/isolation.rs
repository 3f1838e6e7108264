//! Where the non-pseudo-Anosov elements of a torus ball sit: isolated or in
//! clusters, and how close to centralizers.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;

use super::density::torus_class;
use super::report::{Class, IsolationMember, IsolationProfile, ProximityProfile};
use crate::error::{Error, Result};
use crate::exact_torus::ball::enumerate_l1_ball;
use crate::exact_torus::{rel_distance_to_centralizer, GeneratingSet, IntMatrix2, PrimitiveClass};

/// Largest `k` accepted; word balls grow exponentially.
pub const MAX_ISOLATION_K: u32 = 4;

/// Default reference elements: `T` and `S T S^-1`.
pub fn default_references() -> Vec<IntMatrix2> {
    let (s, t) = (IntMatrix2::s(), IntMatrix2::t());
    vec![t.clone(), &(&s * &t) * &s.inverse()]
}

type M4 = [i64; 4];

fn mul([a, b, c, d]: M4, [e, f, g, h]: M4) -> M4 {
    [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h]
}

fn small(m: &IntMatrix2) -> Result<M4> {
    m.to_i64().ok_or_else(|| Error::invalid(format!("matrix entries too large: {m}")))
}

/// Distinct non-identity elements of word length `1..=radius`, each with its
/// length, by increasing length.
fn word_sphere_layers(gens: &GeneratingSet, radius: u32) -> Result<Vec<(M4, u32)>> {
    let g: Vec<M4> = gens.elements().iter().map(small).collect::<Result<_>>()?;
    let id = [1, 0, 0, 1];
    let mut seen: HashSet<M4> = HashSet::from([id]);
    let mut layer = vec![id];
    let mut out = Vec::new();
    for d in 1..=radius {
        let mut next = Vec::new();
        for &x in &layer {
            for &y in &g {
                let z = mul(x, y);
                if seen.insert(z) {
                    next.push(z);
                    out.push((z, d));
                }
            }
        }
        layer = next;
    }
    Ok(out)
}

fn ball_non_pa(radius: i64) -> Vec<M4> {
    enumerate_l1_ball(radius)
        .map(|m| m.to_i64().expect("ball entries are small"))
        .filter(|&m| torus_class(m) != Class::PseudoAnosov)
        .collect()
}

fn centralizer_distance(m: M4, references: &[IntMatrix2], window: u32) -> Result<u64> {
    let psi = IntMatrix2::from_i64(m[0], m[1], m[2], m[3])?;
    let alpha0 = PrimitiveClass::horizontal();
    let mut best = u64::MAX;
    for phi0 in references {
        best = best.min(rel_distance_to_centralizer(&psi, phi0, &alpha0, window)?);
    }
    Ok(best)
}

/// Splits the non-pseudo-Anosov elements of the l1 ball of `radius` into
/// `k`-isolated ones (no other non-pseudo-Anosov element within word
/// distance `< k`) and `k`-dense ones. The neighbourhood test is exact and
/// ranges over the whole group, not just the ball.
pub fn split_isolated_dense(
    k: u32,
    radius: i64,
    gens: &GeneratingSet,
    references: &[IntMatrix2],
    window: u32,
) -> Result<IsolationProfile> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if k > MAX_ISOLATION_K {
        return Err(Error::Budget(format!("k = {k} exceeds the supported bound {MAX_ISOLATION_K}")));
    }
    let neighbours = word_sphere_layers(gens, k - 1)?;
    let members: Vec<IsolationMember> = ball_non_pa(radius)
        .par_iter()
        .map(|&m| {
            let nearest = neighbours
                .iter()
                .find(|(g, _)| torus_class(mul(m, *g)) != Class::PseudoAnosov)
                .map(|&(_, d)| d);
            Ok(IsolationMember { matrix: m, nearest, centralizer_distance: centralizer_distance(m, references, window)? })
        })
        .collect::<Result<_>>()?;
    let (dense, isolated) = members.into_iter().partition(|m| m.nearest.is_some());
    Ok(IsolationProfile { k, radius, isolated, dense })
}

/// Histogram over the non-pseudo-Anosov elements `psi` of the l1 ball of
/// `min_i d_rel(psi, C(references_i))`, each searched within `window`
/// powers of the centralizer's root.
pub fn maher_proximity_profile(radius: i64, references: &[IntMatrix2], window: u32) -> Result<ProximityProfile> {
    if references.is_empty() {
        return Err(Error::invalid("no reference elements"));
    }
    for r in references {
        if r.is_central() {
            return Err(Error::invalid(format!("reference element {r} is central")));
        }
    }
    let values: Vec<u64> = ball_non_pa(radius)
        .par_iter()
        .map(|&m| centralizer_distance(m, references, window))
        .collect::<Result<_>>()?;
    let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
    for v in values {
        *hist.entry(v).or_default() += 1;
    }
    Ok(ProximityProfile { radius, window, histogram: hist.into_iter().collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nothing_is_dense_at_k_one() {
        let p = split_isolated_dense(1, 12, &GeneratingSet::s_t(), &default_references(), 4).unwrap();
        assert!(p.dense.is_empty());
        assert_eq!(p.isolated.len(), ball_non_pa(12).len());
    }

    #[test]
    fn powers_of_t_are_two_dense() {
        let p = split_isolated_dense(2, 12, &GeneratingSet::s_t(), &default_references(), 4).unwrap();
        for m in [[1, 1, 0, 1], [1, 2, 0, 1]] {
            let member = p.dense.iter().find(|x| x.matrix == m).expect("T and T^2 are dense");
            assert_eq!(member.nearest, Some(1));
        }
    }

    #[test]
    fn partition_matches_brute_force() {
        // Oracle: compare against every non-pA element reachable by explicit
        // words of length < k.
        let gens = GeneratingSet::s_t();
        let g: Vec<M4> = gens.elements().iter().map(|m| small(m).unwrap()).collect();
        for k in 1..=3u32 {
            let p = split_isolated_dense(k, 10, &gens, &default_references(), 4).unwrap();
            let all = ball_non_pa(10);
            assert_eq!(p.isolated.len() + p.dense.len(), all.len());
            for m in &p.dense {
                assert!(!p.isolated.iter().any(|x| x.matrix == m.matrix));
            }
            for x in &all {
                let mut words = vec![[1, 0, 0, 1]];
                let mut dense = false;
                for _ in 1..k {
                    words = words.iter().flat_map(|w| g.iter().map(move |h| mul(*w, *h))).collect();
                    dense |= words.iter().any(|w| *w != [1, 0, 0, 1] && torus_class(mul(*x, *w)) != Class::PseudoAnosov);
                }
                assert_eq!(p.dense.iter().any(|m| m.matrix == *x), dense, "{x:?} k={k}");
            }
        }
    }

    #[test]
    fn too_large_k_is_refused() {
        assert!(matches!(
            split_isolated_dense(5, 10, &GeneratingSet::s_t(), &default_references(), 4),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn centralizer_members_report_zero() {
        let refs = default_references();
        let p = maher_proximity_profile(20, &refs, 30).unwrap();
        let total: u64 = p.histogram.iter().map(|h| h.1).sum();
        assert_eq!(total as usize, ball_non_pa(20).len());
        // Powers of T, and conjugates g T^k g^-1 with reference g T g^-1.
        assert_eq!(centralizer_distance([1, 5, 0, 1], &refs, 30).unwrap(), 0);
        let s = IntMatrix2::s();
        let conj = &(&s * &IntMatrix2::t().pow(3)) * &s.inverse();
        assert_eq!(centralizer_distance(conj.to_i64().unwrap(), &refs[1..], 30).unwrap(), 0);
        assert!(maher_proximity_profile(10, &[IntMatrix2::identity()], 4).is_err());
    }
}
