use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A determinant-one integer matrix `[[a, b], [c, d]]`, i.e. a mapping class
/// of the once-punctured torus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix2 {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl IntMatrix2 {
    /// Builds a matrix, rejecting anything whose determinant is not 1.
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        let (a, b, c, d) = (a.into(), b.into(), c.into(), d.into());
        let det = &a * &d - &b * &c;
        if !det.is_one() {
            return Err(Error::invalid(format!(
                "matrix [[{a}, {b}], [{c}, {d}]] has determinant {det}, expected 1"
            )));
        }
        Ok(IntMatrix2 { a, b, c, d })
    }

    pub(crate) fn new_unchecked(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        debug_assert!((&a * &d - &b * &c).is_one());
        IntMatrix2 { a, b, c, d }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(a, b, c, d)
    }

    pub fn identity() -> Self {
        Self::new_unchecked(BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one())
    }

    /// `T = [[1, 1], [0, 1]]`, the left Dehn twist about the `(1, 0)` curve.
    pub fn t() -> Self {
        Self::new_unchecked(BigInt::one(), BigInt::one(), BigInt::zero(), BigInt::one())
    }

    /// `S = [[0, -1], [1, 0]]`, the order-four rotation.
    pub fn s() -> Self {
        Self::new_unchecked(BigInt::zero(), -BigInt::one(), BigInt::one(), BigInt::zero())
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn inverse(&self) -> Self {
        Self::new_unchecked(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn neg(&self) -> Self {
        Self::new_unchecked(-&self.a, -&self.b, -&self.c, -&self.d)
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.d.is_one() && self.b.is_zero() && self.c.is_zero()
    }

    /// True for `I` and `-I`, the center of `SL(2, Z)`.
    pub fn is_central(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    /// Integer power, negative exponents through the inverse.
    pub fn powi(&self, n: i64) -> Self {
        if n >= 0 {
            self.pow(n as u64)
        } else {
            self.inverse().pow(n.unsigned_abs())
        }
    }

    /// `g * self * g^-1`.
    pub fn conjugate_by(&self, g: &IntMatrix2) -> Self {
        &(g * self) * &g.inverse()
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
        (&self.a * x + &self.b * y, &self.c * x + &self.d * y)
    }

    /// Small-entry view, when every entry fits in an `i64`.
    pub fn to_i64(&self) -> Option<[i64; 4]> {
        use num_traits::ToPrimitive;
        Some([
            self.a.to_i64()?,
            self.b.to_i64()?,
            self.c.to_i64()?,
            self.d.to_i64()?,
        ])
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.entries()
            .into_iter()
            .map(|e| e.abs())
            .max()
            .unwrap_or_default()
    }
}

impl<'a> Mul<&'a IntMatrix2> for &'a IntMatrix2 {
    type Output = IntMatrix2;

    fn mul(self, o: &'a IntMatrix2) -> IntMatrix2 {
        IntMatrix2::new_unchecked(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }
}

impl Mul for IntMatrix2 {
    type Output = IntMatrix2;

    fn mul(self, o: IntMatrix2) -> IntMatrix2 {
        &self * &o
    }
}

impl fmt::Display for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Sum of absolute values of the entries.
pub fn l1_norm(m: &IntMatrix2) -> BigInt {
    m.entries().into_iter().map(|e| e.abs()).sum()
}
