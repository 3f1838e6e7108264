use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix2;
use crate::error::{Error, Result};

/// Homology class of a simple closed curve on the torus: a coprime pair up to
/// global sign, stored with `q > 0`, or `q == 0` and `p == 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimitiveClass {
    p: BigInt,
    q: BigInt,
}

impl PrimitiveClass {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let (p, q) = (p.into(), q.into());
        if !p.gcd(&q).is_one() {
            return Err(Error::invalid(format!("({p}, {q}) is not primitive")));
        }
        Ok(Self::canonical(p, q))
    }

    /// Canonical sign for an already-primitive pair.
    pub(crate) fn canonical(p: BigInt, q: BigInt) -> Self {
        debug_assert!(p.gcd(&q).is_one());
        if q.is_negative() || (q.is_zero() && p.is_negative()) {
            PrimitiveClass { p: -p, q: -q }
        } else {
            PrimitiveClass { p, q }
        }
    }

    pub fn from_i64(p: i64, q: i64) -> Result<Self> {
        Self::new(p, q)
    }

    /// The `(1, 0)` curve.
    pub fn horizontal() -> Self {
        PrimitiveClass { p: BigInt::one(), q: BigInt::zero() }
    }

    /// The `(0, 1)` curve.
    pub fn vertical() -> Self {
        PrimitiveClass { p: BigInt::zero(), q: BigInt::one() }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }
    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// Image under a matrix, re-canonicalised.
    pub fn apply(&self, m: &IntMatrix2) -> Self {
        let (p, q) = m.apply(&self.p, &self.q);
        Self::canonical(p, q)
    }
}

impl fmt::Display for PrimitiveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// `|p q' - q p'|`.
pub fn slope_intersection(x: &PrimitiveClass, y: &PrimitiveClass) -> BigInt {
    (&x.p * &y.q - &x.q * &y.p).abs()
}

/// Finite weighted sum of primitive classes with positive rational weights.
/// Components may intersect; this is an integral (or rational) current, not
/// necessarily a disjoint multicurve.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TorusMulticurve {
    components: BTreeMap<PrimitiveClass, BigRational>,
}

impl TorusMulticurve {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(x: PrimitiveClass) -> Self {
        let mut m = Self::zero();
        m.add(x, BigRational::one());
        m
    }

    /// `{(1,0): 1, (0,1): 1}`, the pair of standard homology generators.
    pub fn standard_pair() -> Self {
        Self::from_integer_weights([
            (PrimitiveClass::horizontal(), 1),
            (PrimitiveClass::vertical(), 1),
        ])
    }

    pub fn from_integer_weights(items: impl IntoIterator<Item = (PrimitiveClass, i64)>) -> Self {
        let mut m = Self::zero();
        for (x, w) in items {
            m.add(x, BigRational::from_integer(w.into()));
        }
        m
    }

    /// Adds weight to a component; weights that cancel to zero are dropped and
    /// negative totals are rejected by a debug assertion.
    pub fn add(&mut self, x: PrimitiveClass, w: BigRational) {
        let entry = self.components.entry(x).or_insert_with(BigRational::zero);
        *entry += w;
        debug_assert!(!entry.is_negative());
        if entry.is_zero() {
            self.components.retain(|_, v| !v.is_zero());
        }
    }

    pub fn scale(&self, t: &BigRational) -> Self {
        if t.is_zero() {
            return Self::zero();
        }
        TorusMulticurve {
            components: self.components.iter().map(|(k, v)| (k.clone(), v * t)).collect(),
        }
    }

    pub fn sum(&self, other: &TorusMulticurve) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.components {
            out.add(k.clone(), v.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&PrimitiveClass, &BigRational)> {
        self.components.iter()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Fills the torus when two of its components intersect.
    pub fn fills(&self) -> bool {
        let keys: Vec<_> = self.components.keys().collect();
        keys.iter()
            .enumerate()
            .any(|(i, x)| keys[i + 1..].iter().any(|y| !slope_intersection(x, y).is_zero()))
    }
}

/// Bilinear extension of [`slope_intersection`].
pub fn multicurve_intersection(x: &TorusMulticurve, y: &TorusMulticurve) -> BigRational {
    let mut total = BigRational::zero();
    for (cx, wx) in x.components() {
        for (cy, wy) in y.components() {
            let i = slope_intersection(cx, cy);
            if !i.is_zero() {
                total += wx * wy * BigRational::from_integer(i);
            }
        }
    }
    total
}

/// Pushes every component through `m`, merging collisions.
pub fn apply_matrix(m: &IntMatrix2, x: &TorusMulticurve) -> TorusMulticurve {
    let mut out = TorusMulticurve::zero();
    for (c, w) in x.components() {
        out.add(c.apply(m), w.clone());
    }
    out
}

/// `i(m(sigma), eta)` for filling `sigma`, `eta`.
pub fn rho_sigma_eta(
    sigma: &TorusMulticurve,
    eta: &TorusMulticurve,
    m: &IntMatrix2,
) -> Result<BigRational> {
    if !sigma.fills() {
        return Err(Error::invalid("sigma does not fill the torus"));
    }
    if !eta.fills() {
        return Err(Error::invalid("eta does not fill the torus"));
    }
    Ok(multicurve_intersection(&apply_matrix(m, sigma), eta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_torus::matrix::l1_norm;

    fn pc(p: i64, q: i64) -> PrimitiveClass {
        PrimitiveClass::from_i64(p, q).unwrap()
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn canonical_sign() {
        assert_eq!(pc(-2, -1), pc(2, 1));
        assert_eq!(pc(-1, 0), pc(1, 0));
        assert_eq!(pc(3, -2).q(), &BigInt::from(2));
        assert!(PrimitiveClass::from_i64(2, 4).is_err());
        assert!(PrimitiveClass::from_i64(0, 0).is_err());
    }

    #[test]
    fn slope_intersection_examples() {
        assert_eq!(slope_intersection(&pc(1, 0), &pc(0, 1)), BigInt::from(1));
        assert_eq!(slope_intersection(&pc(1, 0), &pc(1, 0)), BigInt::from(0));
        assert_eq!(slope_intersection(&pc(5, 2), &pc(2, 1)), BigInt::from(1));
    }

    #[test]
    fn multicurve_intersection_examples() {
        let s = TorusMulticurve::standard_pair();
        assert_eq!(multicurve_intersection(&s, &s), rat(2));
        assert_eq!(multicurve_intersection(&TorusMulticurve::zero(), &s), rat(0));
        let x = TorusMulticurve::from_integer_weights([(pc(1, 0), 2)]);
        let y = TorusMulticurve::from_integer_weights([(pc(0, 1), 3)]);
        assert_eq!(multicurve_intersection(&x, &y), rat(6));
    }

    #[test]
    fn apply_examples() {
        let n = IntMatrix2::from_i64(1, 99, 0, 1).unwrap();
        let img = apply_matrix(&n, &TorusMulticurve::single(pc(0, 1)));
        assert_eq!(img, TorusMulticurve::single(pc(99, 1)));
        let s = TorusMulticurve::standard_pair();
        assert_eq!(apply_matrix(&IntMatrix2::identity(), &s), s);
        let m = IntMatrix2::from_i64(2, 1, 1, 1).unwrap();
        let i = multicurve_intersection(&apply_matrix(&m, &s), &apply_matrix(&m, &s));
        assert_eq!(i, rat(2));
    }

    #[test]
    fn rho_examples() {
        let s = TorusMulticurve::standard_pair();
        let n = IntMatrix2::from_i64(1, 99, 0, 1).unwrap();
        assert_eq!(rho_sigma_eta(&s, &s, &n).unwrap(), rat(101));
        assert_eq!(rho_sigma_eta(&s, &s, &IntMatrix2::identity()).unwrap(), rat(2));
        // m(1,0) = (2,1), m(0,1) = (1,1); against (1,0): 1 + 1, against (0,1): 2 + 1.
        let m = IntMatrix2::from_i64(2, 1, 1, 1).unwrap();
        let by_hand = rat(1 + 1 + 2 + 1);
        assert_eq!(rho_sigma_eta(&s, &s, &m).unwrap(), by_hand);
        assert_eq!(BigRational::from_integer(l1_norm(&m)), by_hand);
    }

    #[test]
    fn non_filling_rejected() {
        let s = TorusMulticurve::standard_pair();
        let single = TorusMulticurve::single(pc(1, 0));
        assert!(rho_sigma_eta(&single, &s, &IntMatrix2::identity()).is_err());
        assert!(rho_sigma_eta(&s, &single, &IntMatrix2::identity()).is_err());
    }
}
