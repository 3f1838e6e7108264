//! Counts of integral multicurves, the lattice points behind the Thurston
//! measure.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::lamination::coords::enumerate_multicurves;
use crate::lamination::surface::SurfaceSpec;
use crate::lamination::triangulation::build_triangulation;

/// Multicurves `k * x` on the torus, `x` a slope, with `k (|p| + |q|) <= l`.
/// Disjoint curves on the torus are parallel, so these are all of them.
pub fn count_torus_multicurves(l: i64) -> Result<u64> {
    if l < 1 {
        return Err(Error::invalid("L must be at least 1"));
    }
    let mut total = 0u64;
    for s in 1..=l {
        // Slopes up to sign with |p| + |q| = s: take q > 0, or (1, 0).
        let slopes = if s == 1 {
            2
        } else {
            (-(s - 1)..=(s - 1)).filter(|&p| p.gcd(&(s - p.abs())) == 1).count() as u64
        };
        total += slopes * (l / s) as u64;
    }
    Ok(total)
}

/// Nonzero non-peripheral integral multicurves with edge weight at most `l`
/// on the standard triangulation of `s`.
pub fn count_surface_multicurves(s: SurfaceSpec, l: i64) -> Result<u64> {
    if l < 1 {
        return Err(Error::invalid("L must be at least 1"));
    }
    let t = build_triangulation(s)?;
    Ok(enumerate_multicurves(&t, l).len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_torus_counts() {
        assert_eq!(count_torus_multicurves(1).unwrap(), 2);
        // (1,0), (0,1), (1,1), (1,-1) once each; (1,0), (0,1) doubled.
        assert_eq!(count_torus_multicurves(2).unwrap(), 6);
        assert!(count_torus_multicurves(0).is_err());
    }

    #[test]
    fn torus_matches_lattice_oracle() {
        // Every nonzero integer vector up to sign is k times a slope.
        for l in 1..40i64 {
            let mut n = 0u64;
            for p in -l..=l {
                for q in -l..=l {
                    if (p, q) != (0, 0) && p.abs() + q.abs() <= l {
                        n += 1;
                    }
                }
            }
            assert_eq!(count_torus_multicurves(l).unwrap(), n / 2, "L = {l}");
        }
    }

    #[test]
    fn torus_triangulation_counts_match_slopes() {
        // With edge weights, the slope (p, q) has weight |p| + |q| + |p - q|.
        let s = SurfaceSpec::new(1, 1).unwrap();
        for l in 1..12i64 {
            let mut n = 0;
            for p in -l..=l {
                for q in -l..=l {
                    if (p, q) != (0, 0) && p.abs() + q.abs() + (p - q).abs() <= l {
                        n += 1;
                    }
                }
            }
            assert_eq!(count_surface_multicurves(s, l).unwrap(), n / 2, "L = {l}");
        }
    }
}
