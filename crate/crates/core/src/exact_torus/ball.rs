//! Enumeration of `{m in SL(2,Z) : |a|+|b|+|c|+|d| <= R}`.
//!
//! Each matrix is determined by its primitive first column `(a, c)` and a
//! point on the line of solutions `(b, d) = (b0 + t a, d0 + t c)`, so the
//! walk costs `O(R^2 log R)` instead of scanning entries.

use rayon::prelude::*;

use super::matrix::IntMatrix2;

/// `(g, x, y)` with `a x + b y = g = gcd(a, b) >= 0`.
pub(crate) fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Calls `f(b, d)` for every completion of the column `(a, c)` whose second
/// column has l1 norm at most `budget`. Order is by increasing `t`.
fn walk_column(a: i64, c: i64, budget: i64, mut f: impl FnMut(i64, i64)) {
    let (g, x, y) = ext_gcd(a, c);
    debug_assert_eq!(g, 1);
    let (b0, d0) = (-y, x);
    let cost = |t: i64| (b0 + t * a).abs() + (d0 + t * c).abs();
    // The minimiser of the convex cost sits next to one of the breakpoints.
    let mut cands = Vec::with_capacity(4);
    if a != 0 {
        cands.push((-b0).div_euclid(a));
    }
    if c != 0 {
        cands.push((-d0).div_euclid(c));
    }
    let mut best = cands[0];
    for &t0 in &cands {
        for t in [t0 - 1, t0, t0 + 1] {
            if cost(t) < cost(best) {
                best = t;
            }
        }
    }
    if cost(best) > budget {
        return;
    }
    let mut lo = best;
    while cost(lo - 1) <= budget {
        lo -= 1;
    }
    let mut t = lo;
    while cost(t) <= budget {
        f(b0 + t * a, d0 + t * c);
        t += 1;
    }
}

/// All matrices of the ball with first entry `a`, sorted by `(b, c, d)`.
pub fn l1_ball_slice(a: i64, radius: i64) -> Vec<[i64; 4]> {
    let mut out = Vec::new();
    let rest = radius - a.abs();
    if rest < 0 {
        return out;
    }
    for c in -rest..=rest {
        if ext_gcd(a, c).0 != 1 {
            continue;
        }
        let budget = rest - c.abs();
        walk_column(a, c, budget, |b, d| out.push([a, b, c, d]));
    }
    out.sort_unstable();
    out
}

/// Streams the ball in lexicographic order of `(a, b, c, d)`. Empty for
/// `radius < 2`.
pub fn enumerate_l1_ball(radius: i64) -> impl Iterator<Item = IntMatrix2> {
    let (lo, hi) = if radius < 2 { (1, 0) } else { (-radius, radius) };
    (lo..=hi).flat_map(move |a| {
        l1_ball_slice(a, radius)
            .into_iter()
            .map(|[a, b, c, d]| IntMatrix2::from_i64(a, b, c, d).expect("det-1 by construction"))
    })
}

/// Folds a per-matrix statistic over the ball, sharded by first entry. The
/// fold runs in parallel but the result is merged in shard order.
pub fn fold_l1_ball<T, F, M>(radius: i64, init: T, f: F, merge: M) -> T
where
    T: Clone + Send + Sync,
    F: Fn(&mut T, [i64; 4]) + Send + Sync,
    M: Fn(T, T) -> T + Send + Sync,
{
    if radius < 2 {
        return init;
    }
    let parts: Vec<T> = (-radius..=radius)
        .into_par_iter()
        .map(|a| {
            let mut acc = init.clone();
            let rest = radius - a.abs();
            for c in -rest..=rest {
                if ext_gcd(a, c).0 != 1 {
                    continue;
                }
                walk_column(a, c, rest - c.abs(), |b, d| f(&mut acc, [a, b, c, d]));
            }
            acc
        })
        .collect();
    parts.into_iter().fold(init, merge)
}

/// Number of matrices in the ball.
pub fn l1_ball_size(radius: i64) -> u64 {
    fold_l1_ball(radius, 0u64, |n, _| *n += 1, |x, y| x + y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_torus::matrix::l1_norm;
    use num_bigint::BigInt;

    /// Entry scan: choose a, b, c, then every d in the residual budget.
    fn brute(radius: i64) -> Vec<[i64; 4]> {
        let mut out = Vec::new();
        for a in -radius..=radius {
            for b in -radius..=radius {
                for c in -radius..=radius {
                    let r = radius - a.abs() - b.abs() - c.abs();
                    if r < 0 {
                        continue;
                    }
                    for d in -r..=r {
                        if a * d - b * c == 1 {
                            out.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn ext_gcd_identity() {
        for a in -20i64..=20 {
            for b in -20i64..=20 {
                let (g, x, y) = ext_gcd(a, b);
                assert_eq!(a * x + b * y, g);
                assert!(g >= 0);
            }
        }
    }

    #[test]
    fn small_radii() {
        assert_eq!(enumerate_l1_ball(1).count(), 0);
        assert_eq!(enumerate_l1_ball(0).count(), 0);
        let two: Vec<_> = enumerate_l1_ball(2).collect();
        assert_eq!(two.len(), 4);
        assert!(two.contains(&IntMatrix2::s()));
        assert!(two.contains(&IntMatrix2::identity().neg()));
        assert_eq!(enumerate_l1_ball(3).count(), 20);
    }

    #[test]
    fn matches_entry_scan() {
        for r in [2, 3, 4, 7, 12, 25] {
            let fast: Vec<[i64; 4]> =
                enumerate_l1_ball(r).map(|m| m.to_i64().unwrap()).collect();
            let slow = brute(r);
            assert_eq!(fast, slow, "radius {r}");
            assert_eq!(l1_ball_size(r), slow.len() as u64);
        }
    }

    #[test]
    fn lexicographic_and_within_norm() {
        let v: Vec<_> = enumerate_l1_ball(30).collect();
        let raw: Vec<_> = v.iter().map(|m| m.to_i64().unwrap()).collect();
        assert!(raw.windows(2).all(|w| w[0] < w[1]));
        assert!(v.iter().all(|m| l1_norm(m) <= BigInt::from(30)));
    }
}
