use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::matrix::IntMatrix2;

/// Nielsen–Thurston type of an element of `SL(2, Z)`.
#[derive(Clone, Debug, PartialEq)]
pub enum NTType {
    /// Finite order; `order` is the order in `SL(2, Z)` and divides 12.
    Periodic { order: u32 },
    /// Parabolic: fixes a slope.
    Reducible,
    /// Hyperbolic. `trace` is `|tr|`, exact; `dilatation` is the larger root
    /// of `x^2 - |tr| x + 1`.
    PseudoAnosov { trace: BigInt, dilatation: f64 },
}

impl NTType {
    pub fn is_pseudo_anosov(&self) -> bool {
        matches!(self, NTType::PseudoAnosov { .. })
    }

    pub fn kind(&self) -> NTKind {
        match self {
            NTType::Periodic { .. } => NTKind::Periodic,
            NTType::Reducible => NTKind::Reducible,
            NTType::PseudoAnosov { .. } => NTKind::PseudoAnosov,
        }
    }

    pub fn dilatation(&self) -> Option<f64> {
        match self {
            NTType::PseudoAnosov { dilatation, .. } => Some(*dilatation),
            _ => None,
        }
    }
}

/// Coarse Nielsen–Thurston kind, shared by both engines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NTKind {
    Periodic,
    Reducible,
    PseudoAnosov,
}

impl fmt::Display for NTKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NTKind::Periodic => "periodic",
            NTKind::Reducible => "reducible",
            NTKind::PseudoAnosov => "pseudo-anosov",
        })
    }
}

impl fmt::Display for NTType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NTType::Periodic { order } => write!(f, "periodic {order}"),
            NTType::Reducible => f.write_str("reducible"),
            NTType::PseudoAnosov { dilatation, .. } => write!(f, "pseudo-anosov {dilatation:.12}"),
        }
    }
}

/// `(t + sqrt(t^2 - 4)) / 2` for `t >= 3`.
pub fn dilatation_from_trace(t: &BigInt) -> f64 {
    let t = t.abs().to_f64().unwrap_or(f64::INFINITY);
    // t - sqrt(t^2-4) cancels badly; use the product of roots instead.
    let disc = (t - 2.0).sqrt() * (t + 2.0).sqrt();
    (t + disc) / 2.0
}

/// Classifies by trace. Periodic orders come from explicit powers up to 12,
/// which is exact because element orders in `SL(2, Z)` divide 12.
pub fn classify_matrix(m: &IntMatrix2) -> NTType {
    let t = m.trace().abs();
    let two = BigInt::from(2);
    if m.is_central() || t < two {
        let mut p = m.clone();
        for n in 1..=12u32 {
            if p.is_identity() {
                return NTType::Periodic { order: n };
            }
            p = &p * m;
        }
        unreachable!("finite-order element of SL(2,Z) with order not dividing 12: {m}");
    }
    if t == two {
        NTType::Reducible
    } else {
        let dilatation = dilatation_from_trace(&t);
        NTType::PseudoAnosov { trace: t, dilatation }
    }
}

/// Kind from small entries, used on hot enumeration paths.
#[inline]
pub fn kind_from_trace(trace: i64, central: bool) -> NTKind {
    let t = trace.abs();
    if central || t < 2 {
        NTKind::Periodic
    } else if t == 2 {
        NTKind::Reducible
    } else {
        NTKind::PseudoAnosov
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: i64, b: i64, c: i64, d: i64) -> IntMatrix2 {
        IntMatrix2::from_i64(a, b, c, d).unwrap()
    }

    #[test]
    fn intro_matrices() {
        assert_eq!(classify_matrix(&m(1, 99, 0, 1)), NTType::Reducible);
        let big = IntMatrix2::new(
            "5904283700961130691".parse::<BigInt>().unwrap(),
            "4322235651404355330".parse::<BigInt>().unwrap(),
            "2161117825702177665".parse::<BigInt>().unwrap(),
            "1582048049556775361".parse::<BigInt>().unwrap(),
        )
        .unwrap();
        assert!(classify_matrix(&big).is_pseudo_anosov());
    }

    #[test]
    fn periodic_orders() {
        assert_eq!(classify_matrix(&m(0, -1, 1, 0)), NTType::Periodic { order: 4 });
        assert_eq!(classify_matrix(&IntMatrix2::identity()), NTType::Periodic { order: 1 });
        assert_eq!(classify_matrix(&m(-1, 0, 0, -1)), NTType::Periodic { order: 2 });
        assert_eq!(classify_matrix(&m(0, -1, 1, 1)), NTType::Periodic { order: 6 });
        assert_eq!(classify_matrix(&m(0, -1, 1, -1)), NTType::Periodic { order: 3 });
        assert_eq!(classify_matrix(&m(-1, 1, -1, 0)), NTType::Periodic { order: 3 });
    }

    #[test]
    fn cat_map_dilatation() {
        let ty = classify_matrix(&m(2, 1, 1, 1));
        let golden_sq = (3.0 + 5f64.sqrt()) / 2.0;
        let d = ty.dilatation().unwrap();
        assert!((d - golden_sq).abs() < 1e-12);
        assert!((d + 1.0 / d - 3.0).abs() < 1e-12);
    }

    #[test]
    fn negative_parabolic_is_reducible() {
        assert_eq!(classify_matrix(&m(-1, 5, 0, -1)), NTType::Reducible);
    }
}
