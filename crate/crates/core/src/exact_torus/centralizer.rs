//! Relative distance from a mapping class to the centralizer of another.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use super::curves::PrimitiveClass;
use super::farey::farey_distance;
use super::matrix::IntMatrix2;
use crate::error::{Error, Result};

/// Default half-width of the centralizer window.
pub const DEFAULT_WINDOW: u32 = 1000;

/// Largest `gcd(b, c, a - d)` whose divisors are searched for a primitive
/// hyperbolic root.
const MAX_ROOT_SEARCH: u64 = 1 << 40;

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Generator of the maximal cyclic subgroup containing `phi0`, up to sign.
///
/// Hyperbolic: every integer matrix commuting with `phi0` is `x I + y N` with
/// `N = (phi0 - d I) / g`, `g = gcd(b, c, a - d)`; the root is the unit of
/// that order with the smallest `y > 0`. Parabolic: the primitive
/// transvection with the same fixed slope. Elliptic: `phi0` itself.
pub fn primitive_root(phi0: &IntMatrix2) -> Result<IntMatrix2> {
    if phi0.is_central() {
        return Err(Error::invalid("phi0 is central (plus or minus the identity)"));
    }
    let t = phi0.trace();
    let t_abs = t.abs();
    let two = BigInt::from(2);
    if t_abs < two {
        return Ok(phi0.clone());
    }
    let (a, b, c, d) = (phi0.a(), phi0.b(), phi0.c(), phi0.d());
    let g = b.gcd(c).gcd(&(a - d));
    if t_abs == two {
        // phi0 - sign I is nilpotent; dividing by its content leaves the
        // primitive K with I + K the root transvection.
        let sign = if t.is_negative() { -BigInt::one() } else { BigInt::one() };
        return IntMatrix2::new(
            BigInt::one() + (a - &sign) / &g,
            b / &g,
            c / &g,
            BigInt::one() + (d - &sign) / &g,
        );
    }
    let alpha = (a - d) / &g;
    let beta = b / &g;
    let gamma = c / &g;
    let g_small = g
        .to_u64()
        .filter(|&g| g <= MAX_ROOT_SEARCH)
        .ok_or_else(|| Error::Budget(format!("centralizer root search: gcd {g} too large")))?;
    for y in divisors(g_small) {
        let y = BigInt::from(y);
        // x^2 + alpha x y - beta gamma y^2 = 1.
        let disc: BigInt = &alpha * &alpha * &y * &y + (BigInt::one() + &beta * &gamma * &y * &y) * 4;
        if disc.is_negative() {
            continue;
        }
        let r = disc.sqrt();
        if &r * &r != disc {
            continue;
        }
        for root in [&r - &alpha * &y, -&r - &alpha * &y] {
            if root.is_odd() {
                continue;
            }
            let x: BigInt = root / 2;
            let cand = IntMatrix2::new(&x + &alpha * &y, &beta * &y, &gamma * &y, x.clone());
            if let Ok(cand) = cand {
                if cand.trace().abs() > two {
                    return Ok(cand);
                }
            }
        }
    }
    unreachable!("phi0 itself solves the norm equation with y = g")
}

/// `min_{|k| <= window} d_Farey(psi(alpha0), rho^k(alpha0))`, with `rho` the
/// primitive root of `phi0`. An upper bound for the infimum over the whole
/// centralizer; exact when the minimiser lies inside the window.
pub fn rel_distance_to_centralizer(
    psi: &IntMatrix2,
    phi0: &IntMatrix2,
    alpha0: &PrimitiveClass,
    window: u32,
) -> Result<u64> {
    let root = primitive_root(phi0)?;
    let target = alpha0.apply(psi);
    let mut best = farey_distance(&target, alpha0);
    for step in [root.clone(), root.inverse()] {
        let mut cur = alpha0.clone();
        for _ in 0..window {
            if best == 0 {
                return Ok(0);
            }
            cur = cur.apply(&step);
            best = best.min(farey_distance(&target, &cur));
        }
    }
    Ok(best)
}

/// Brute check that `x` commutes with `y`.
pub fn commutes(x: &IntMatrix2, y: &IntMatrix2) -> bool {
    &(x * y) == &(y * x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_power_of(root: &IntMatrix2, m: &IntMatrix2, limit: u32) -> bool {
        let mut p = IntMatrix2::identity();
        for _ in 0..limit {
            p = &p * root;
            if &p == m || p == m.neg() {
                return true;
            }
        }
        false
    }

    fn m(a: i64, b: i64, c: i64, d: i64) -> IntMatrix2 {
        IntMatrix2::from_i64(a, b, c, d).unwrap()
    }

    #[test]
    fn roots() {
        let cat = m(2, 1, 1, 1);
        assert_eq!(primitive_root(&cat.pow(3)).unwrap(), cat);
        let r = primitive_root(&m(1, 7, 0, 1)).unwrap();
        assert_eq!(r, IntMatrix2::t());
        let r = primitive_root(&m(1, -4, 0, 1)).unwrap();
        assert!(is_power_of(&r, &m(1, -4, 0, 1), 10));
        let r = primitive_root(&m(-1, 3, 0, -1)).unwrap();
        assert!(commutes(&r, &m(-1, 3, 0, -1)));
        assert!(is_power_of(&r.inverse(), &m(-1, 3, 0, -1), 10));
        assert!(primitive_root(&IntMatrix2::identity()).is_err());
        assert!(primitive_root(&IntMatrix2::identity().neg()).is_err());
    }

    #[test]
    fn conjugated_roots() {
        let g = m(3, 1, 5, 2);
        let cat = m(2, 1, 1, 1);
        for k in 1..5 {
            let phi = cat.pow(k).conjugate_by(&g);
            let r = primitive_root(&phi).unwrap();
            assert!(commutes(&r, &phi));
            assert!(is_power_of(&r, &phi, 10) || is_power_of(&r.inverse(), &phi, 10));
            assert_eq!(r.trace().abs(), BigInt::from(3));
        }
        let par = m(1, 6, 0, 1).conjugate_by(&g);
        let r = primitive_root(&par).unwrap();
        assert!(is_power_of(&r, &par, 10));
    }

    #[test]
    fn distance_examples() {
        let alpha = PrimitiveClass::horizontal();
        let t = IntMatrix2::t();
        assert_eq!(rel_distance_to_centralizer(&t.pow(5), &t, &alpha, 10).unwrap(), 0);
        assert_eq!(rel_distance_to_centralizer(&IntMatrix2::s(), &t, &alpha, 10).unwrap(), 1);
        assert!(rel_distance_to_centralizer(&t, &IntMatrix2::identity(), &alpha, 10).is_err());
    }

    #[test]
    fn cat_map_against_parabolic() {
        // Exhaustive minimisation over the window as an independent oracle.
        let psi = m(2, 1, 1, 1);
        let t = IntMatrix2::t();
        let alpha = PrimitiveClass::horizontal();
        let target = alpha.apply(&psi);
        let oracle = (-50i64..=50)
            .map(|k| farey_distance(&target, &alpha.apply(&t.powi(k))))
            .min()
            .unwrap();
        assert_eq!(oracle, 1);
        assert_eq!(rel_distance_to_centralizer(&psi, &t, &alpha, 50).unwrap(), oracle);
    }
}
