//! Distance in the Farey graph, the curve complex of the once-punctured torus.
//!
//! `x` is moved to `(1, 0)` by an `SL(2,Z)` change of basis. The distance from
//! `1/0` to `p/q` then follows from the Stern–Brocot descent towards `p/q`: if
//! `p/q` sits in the Farey interval `(u, v)` with mediant `m`, and lies
//! between `u` and `m`, every path from `v` to `p/q` passes through `u` or
//! `m`, so `d(v) = 1 + min(d(u), d(m))`. A run of `k` steps in the same
//! direction collapses to `d(v) = min(d(v_k) + k, d(u) + 1)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::curves::PrimitiveClass;

/// Bezout coefficients `(u, v)` with `u p + v q = 1` for coprime `p, q`.
pub(crate) fn bezout(p: &BigInt, q: &BigInt) -> (BigInt, BigInt) {
    let e = p.extended_gcd(q);
    if e.gcd.is_negative() {
        (-e.x, -e.y)
    } else {
        (e.x, e.y)
    }
}

/// Coordinates of `y` after the change of basis sending `x` to `(1, 0)`.
pub(crate) fn normalize_pair(x: &PrimitiveClass, y: &PrimitiveClass) -> (BigInt, BigInt) {
    let (u, v) = bezout(x.p(), x.q());
    // [[u, v], [-q, p]] has determinant 1 and sends (p, q) to (1, 0).
    let p2 = &u * y.p() + &v * y.q();
    let q2 = -x.q() * y.p() + x.p() * y.q();
    if q2.is_negative() {
        (-p2, -q2)
    } else {
        (p2, q2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Dir {
    Left,
    Right,
}

/// Stern–Brocot descent from the interval `(n/1, (n+1)/1)` to the fraction
/// `p/q` (`q >= 2`), as run-length encoded steps.
fn descent_runs(p: &BigInt, q: &BigInt) -> Vec<(Dir, BigInt)> {
    let n = p.div_floor(q);
    // Endpoints u = a/b < v = c/d.
    let (mut a, mut b) = (n.clone(), BigInt::one());
    let (mut c, mut d) = (n + 1, BigInt::one());
    let mut runs = Vec::new();
    loop {
        let (ma, mb) = (&a + &c, &b + &d);
        // Compare p/q with the mediant.
        let cmp = (p * &mb).cmp(&(q * &ma));
        match cmp {
            std::cmp::Ordering::Equal => return runs,
            std::cmp::Ordering::Less => {
                // x in (u, m_j) while j * t < s, with m_j = (j a + c)/(j b + d).
                let s = q * &c - p * &d;
                let t = p * &b - q * &a;
                let k = (&s - 1) / &t;
                c = &k * &a + &c;
                d = &k * &b + &d;
                runs.push((Dir::Left, k));
            }
            std::cmp::Ordering::Greater => {
                let s = p * &b - q * &a;
                let t = q * &c - p * &d;
                let k = (&s - 1) / &t;
                a = &k * &c + &a;
                b = &k * &d + &b;
                runs.push((Dir::Right, k));
            }
        }
    }
}

fn min(a: &BigInt, b: &BigInt) -> BigInt {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// Distance from `1/0` to `p/q` in the Farey graph.
pub(crate) fn distance_from_infinity(p: &BigInt, q: &BigInt) -> u64 {
    let q_abs = q.abs();
    if q_abs.is_zero() {
        return 0;
    }
    if q_abs.is_one() {
        return 1;
    }
    let (p, q) = if q.is_negative() { (-p, q_abs) } else { (p.clone(), q_abs) };
    let one = BigInt::one();
    // Distances from the two endpoints of the current interval to p/q.
    let (mut du, mut dv) = (one.clone(), one.clone());
    for (dir, k) in descent_runs(&p, &q).into_iter().rev() {
        match dir {
            Dir::Left => dv = min(&(&dv + &k), &(&du + 1)),
            Dir::Right => du = min(&(&du + &k), &(&dv + 1)),
        }
    }
    // 1/0 is adjacent to both integer endpoints.
    let d = 1 + min(&du, &dv);
    num_traits::ToPrimitive::to_u64(&d).expect("Farey distance fits in u64")
}

/// Graph distance between two vertices of the Farey graph.
pub fn farey_distance(x: &PrimitiveClass, y: &PrimitiveClass) -> u64 {
    let (p, q) = normalize_pair(x, y);
    distance_from_infinity(&p, &q)
}
