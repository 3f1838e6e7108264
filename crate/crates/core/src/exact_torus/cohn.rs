//! Exact geodesic lengths on the modular once-punctured torus.
//!
//! The marking sends `(1, 0)` to the Cohn matrix `A = [[1,1],[1,2]]` and
//! `(0, 1)` to `B = [[2,1],[1,1]]`. Farey neighbours `u, v` with matrices
//! `W_u, W_v` give their mediant `u + v` the matrix `W_u W_v`, and the
//! length of a slope is `2 arccosh(|tr W| / 2)`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::curves::PrimitiveClass;
use super::matrix::IntMatrix2;

fn cohn_a() -> IntMatrix2 {
    IntMatrix2::from_i64(1, 1, 1, 2).unwrap()
}

fn cohn_b() -> IntMatrix2 {
    IntMatrix2::from_i64(2, 1, 1, 1).unwrap()
}

/// Word in the Fricke group representing the slope, from the Stern–Brocot
/// descent between two Farey neighbours.
pub fn cohn_matrix(x: &PrimitiveClass) -> IntMatrix2 {
    let (p, q) = (x.p().clone(), x.q().clone());
    // Left endpoint, right endpoint (counter-clockwise), with their matrices.
    let (mut u, mut v, mut wu, mut wv) = if !p.is_negative() {
        (
            (BigInt::from(1), BigInt::from(0)),
            (BigInt::from(0), BigInt::from(1)),
            cohn_a(),
            cohn_b(),
        )
    } else {
        (
            (BigInt::from(0), BigInt::from(1)),
            (BigInt::from(-1), BigInt::from(0)),
            cohn_b(),
            cohn_a().inverse(),
        )
    };
    loop {
        if (&u.0, &u.1) == (&p, &q) {
            return wu;
        }
        if (&v.0, &v.1) == (&p, &q) {
            return wv;
        }
        let m = (&u.0 + &v.0, &u.1 + &v.1);
        let wm = &wu * &wv;
        if m == (p.clone(), q.clone()) {
            return wm;
        }
        // Which side of the mediant: sign of det(m, x).
        let side = &m.0 * &q - &m.1 * &p;
        if side.is_positive() {
            // x is counter-clockwise from m: between m and v.
            u = m;
            wu = wm;
        } else {
            v = m;
            wv = wm;
        }
    }
}

/// `|trace|` of the Cohn word of the slope.
pub fn slope_trace(x: &PrimitiveClass) -> BigInt {
    cohn_matrix(x).trace().abs()
}

/// `2 arccosh(trace / 2)`.
pub fn hyperbolic_length(x: &PrimitiveClass) -> f64 {
    length_from_trace(&slope_trace(x))
}

pub fn length_from_trace(t: &BigInt) -> f64 {
    match t.to_f64() {
        Some(tf) if tf.is_finite() => 2.0 * (tf / 2.0).acosh(),
        _ => {
            // arccosh(t/2) = ln(t) + O(t^-2) for huge t.
            let bits = t.bits();
            let shift = bits.saturating_sub(60);
            let mant = (t >> shift).to_f64().unwrap();
            2.0 * (mant.ln() + shift as f64 * std::f64::consts::LN_2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pc(p: i64, q: i64) -> PrimitiveClass {
        PrimitiveClass::from_i64(p, q).unwrap()
    }

    #[test]
    fn base_traces() {
        assert_eq!(slope_trace(&pc(1, 0)), BigInt::from(3));
        assert_eq!(slope_trace(&pc(0, 1)), BigInt::from(3));
        // AB = [[3,2],[4,3]]
        assert_eq!(cohn_matrix(&pc(1, 1)), IntMatrix2::from_i64(3, 2, 4, 3).unwrap());
        assert_eq!(slope_trace(&pc(1, 1)), BigInt::from(6));
        assert_eq!(slope_trace(&pc(-1, 1)), BigInt::from(3));
        assert!((hyperbolic_length(&pc(1, 0)) - 2.0 * 1.5f64.acosh()).abs() < 1e-12);
        assert!((hyperbolic_length(&pc(1, 0)) - 1.9248473).abs() < 1e-7);
    }

    /// Markov triples: neighbours u, v with mediant m satisfy
    /// a^2 + b^2 + c^2 = 3abc for (a, b, c) = traces / 3.
    #[test]
    fn markov_equation_on_farey_triangles() {
        for (u, v) in [((1, 0), (0, 1)), ((2, 1), (1, 1)), ((3, 2), (2, 1)), ((1, 3), (0, 1))] {
            let (a, b) = (pc(u.0, u.1), pc(v.0, v.1));
            let m = pc(u.0 + v.0, u.1 + v.1);
            let [x, y, z] = [&a, &b, &m].map(|s| slope_trace(s) / 3);
            assert_eq!(&x * &x + &y * &y + &z * &z, 3 * &x * &y * &z, "{a} {b} {m}");
        }
    }

    #[test]
    fn huge_trace_length() {
        let t = BigInt::from(10).pow(400);
        let l = length_from_trace(&t);
        assert!((l - 2.0 * 400.0 * 10f64.ln()).abs() < 1e-6);
    }
}
