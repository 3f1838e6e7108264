use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix2;
use crate::error::{Error, Result};

/// Finite symmetric generating set of `SL(2, Z)`.
#[derive(Clone, Debug)]
pub struct GeneratingSet {
    name: String,
    elements: Vec<IntMatrix2>,
}

impl GeneratingSet {
    /// Closes `elements` under inverses and removes duplicates. The identity
    /// is not allowed.
    pub fn new(name: impl Into<String>, elements: Vec<IntMatrix2>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::invalid("empty generating set"));
        }
        let mut all: Vec<IntMatrix2> = Vec::with_capacity(2 * elements.len());
        for g in elements {
            if g.is_identity() {
                return Err(Error::invalid("generating set contains the identity"));
            }
            let inv = g.inverse();
            for h in [g, inv] {
                if !all.contains(&h) {
                    all.push(h);
                }
            }
        }
        Ok(GeneratingSet { name: name.into(), elements: all })
    }

    /// `{S, T}` and inverses.
    pub fn s_t() -> Self {
        Self::new("S,T", vec![IntMatrix2::s(), IntMatrix2::t()]).unwrap()
    }

    /// `{T, T^transpose}` and inverses: the two elementary shears.
    pub fn shears() -> Self {
        let tt = IntMatrix2::from_i64(1, 0, 1, 1).unwrap();
        Self::new("T,Tt", vec![IntMatrix2::t(), tt]).unwrap()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn elements(&self) -> &[IntMatrix2] {
        &self.elements
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordLength {
    Exact(u32),
    /// Longer than the search cap.
    Exceeded,
}

/// Geodesic word length by bidirectional breadth-first search.
pub fn word_length(m: &IntMatrix2, gens: &GeneratingSet, cap: u32) -> Result<WordLength> {
    if gens.elements.is_empty() {
        return Err(Error::invalid("empty generating set"));
    }
    if m.is_identity() {
        return Ok(WordLength::Exact(0));
    }
    let mut fwd: HashMap<IntMatrix2, u32> = HashMap::from([(IntMatrix2::identity(), 0)]);
    let mut bwd: HashMap<IntMatrix2, u32> = HashMap::from([(m.clone(), 0)]);
    let mut fwd_front = vec![IntMatrix2::identity()];
    let mut bwd_front = vec![m.clone()];
    let (mut df, mut db) = (0u32, 0u32);
    while df + db < cap {
        let expand_fwd = fwd_front.len() <= bwd_front.len();
        let (front, seen, other, depth) = if expand_fwd {
            (&mut fwd_front, &mut fwd, &bwd, &mut df)
        } else {
            (&mut bwd_front, &mut bwd, &fwd, &mut db)
        };
        let mut best: Option<u32> = None;
        let mut next = Vec::new();
        for x in front.iter() {
            for g in &gens.elements {
                let y = x * g;
                if let Some(&k) = other.get(&y) {
                    let total = *depth + 1 + k;
                    best = Some(best.map_or(total, |b| b.min(total)));
                }
                if !seen.contains_key(&y) {
                    seen.insert(y.clone(), *depth + 1);
                    next.push(y);
                }
            }
        }
        *depth += 1;
        *front = next;
        if let Some(b) = best {
            return Ok(if b <= cap { WordLength::Exact(b) } else { WordLength::Exceeded });
        }
        if front.is_empty() {
            break;
        }
    }
    Ok(WordLength::Exceeded)
}

/// Length of `m` in the free monoid on `L = [[1,0],[1,1]]`, `R = [[1,1],[0,1]]`,
/// or `None` when `m` has a negative entry and so lies outside the monoid.
pub fn positive_monoid_length(m: &IntMatrix2) -> Option<BigInt> {
    if m.entries().iter().any(|e| e.is_negative()) {
        return None;
    }
    // Quotient that treats division by zero as unbounded.
    fn runs(x: &BigInt, y: &BigInt) -> Option<BigInt> {
        (!y.is_zero()).then(|| x / y)
    }
    let (mut a, mut b, mut c, mut d) = (m.a().clone(), m.b().clone(), m.c().clone(), m.d().clone());
    let mut len = BigInt::zero();
    while !(b.is_zero() && c.is_zero()) {
        // Peel a whole run of R (top row dominates) or L (bottom row dominates).
        let top = a >= c && b >= d;
        let (hi0, hi1, lo0, lo1) = if top {
            (&mut a, &mut b, &c, &d)
        } else if c >= a && d >= b {
            (&mut c, &mut d, &a, &b)
        } else {
            return None;
        };
        let k = match (runs(hi0, lo0), runs(hi1, lo1)) {
            (Some(x), Some(y)) => x.min(y),
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => return None,
        };
        *hi0 -= &k * lo0;
        *hi1 -= &k * lo1;
        len += k;
    }
    Some(len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn m(a: i64, b: i64, c: i64, d: i64) -> IntMatrix2 {
        IntMatrix2::from_i64(a, b, c, d).unwrap()
    }

    /// Plain enumeration of all words up to length `n`.
    fn brute_length(target: &IntMatrix2, gens: &GeneratingSet, n: u32) -> Option<u32> {
        let mut layer: HashSet<IntMatrix2> = HashSet::from([IntMatrix2::identity()]);
        for len in 0..=n {
            if layer.contains(target) {
                return Some(len);
            }
            layer = layer
                .iter()
                .flat_map(|x| gens.elements().iter().map(move |g| x * g))
                .collect::<HashSet<_>>()
                .union(&layer)
                .cloned()
                .collect();
        }
        None
    }

    #[test]
    fn basic_lengths() {
        let g = GeneratingSet::s_t();
        assert_eq!(word_length(&IntMatrix2::identity(), &g, 5).unwrap(), WordLength::Exact(0));
        for x in g.elements() {
            assert_eq!(word_length(x, &g, 5).unwrap(), WordLength::Exact(1));
        }
        assert_eq!(word_length(&IntMatrix2::t().pow(2), &g, 5).unwrap(), WordLength::Exact(2));
        assert_eq!(brute_length(&IntMatrix2::t().pow(2), &g, 4), Some(2));
    }

    #[test]
    fn agrees_with_brute_force() {
        let g = GeneratingSet::s_t();
        for target in [m(2, 1, 1, 1), m(1, 3, 0, 1), m(-1, 0, 0, -1), m(3, 2, 1, 1), m(1, 0, 4, 1)] {
            let fast = word_length(&target, &g, 8).unwrap();
            match brute_length(&target, &g, 8) {
                Some(n) => assert_eq!(fast, WordLength::Exact(n), "{target}"),
                None => assert_eq!(fast, WordLength::Exceeded),
            }
        }
    }

    #[test]
    fn cap_reports_exceeded() {
        let g = GeneratingSet::s_t();
        assert_eq!(word_length(&IntMatrix2::t().pow(9), &g, 4).unwrap(), WordLength::Exceeded);
    }

    #[test]
    fn bad_sets() {
        assert!(GeneratingSet::new("x", vec![]).is_err());
        assert!(GeneratingSet::new("x", vec![IntMatrix2::identity()]).is_err());
    }

    #[test]
    fn monoid_lengths() {
        assert_eq!(positive_monoid_length(&m(1, 99, 0, 1)), Some(BigInt::from(99)));
        assert_eq!(positive_monoid_length(&m(2, 1, 1, 1)), Some(BigInt::from(2)));
        assert_eq!(positive_monoid_length(&m(1, -1, 0, 1)), None);
        let big = IntMatrix2::new(
            "5904283700961130691".parse::<BigInt>().unwrap(),
            "4322235651404355330".parse::<BigInt>().unwrap(),
            "2161117825702177665".parse::<BigInt>().unwrap(),
            "1582048049556775361".parse::<BigInt>().unwrap(),
        )
        .unwrap();
        assert_eq!(positive_monoid_length(&big), Some(BigInt::from(99)));
    }
}
