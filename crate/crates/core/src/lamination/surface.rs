use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A surface of genus `g` with `r >= 1` punctures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub genus: u32,
    pub punctures: u32,
}

impl SurfaceSpec {
    pub fn new(genus: u32, punctures: u32) -> Result<Self> {
        let s = SurfaceSpec { genus, punctures };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.punctures == 0 {
            return Err(Error::invalid("closed surfaces have no ideal triangulation; need r >= 1"));
        }
        if 3 * self.genus as i64 - 3 + self.punctures as i64 <= 0 {
            return Err(Error::invalid(format!(
                "surface ({}, {}) has finite mapping class group",
                self.genus, self.punctures
            )));
        }
        Ok(())
    }

    /// Real dimension of measured lamination space, `6g - 6 + 2r`.
    pub fn dimension(&self) -> u32 {
        6 * self.genus + 2 * self.punctures - 6
    }

    pub fn num_edges(&self) -> usize {
        (6 * self.genus + 3 * self.punctures - 6) as usize
    }

    pub fn num_triangles(&self) -> usize {
        (4 * self.genus + 2 * self.punctures - 4) as usize
    }
}

impl fmt::Display for SurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S_{},{}", self.genus, self.punctures)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let s = SurfaceSpec::new(1, 1).unwrap();
        assert_eq!((s.num_edges(), s.num_triangles(), s.dimension()), (3, 2, 2));
        let s = SurfaceSpec::new(0, 4).unwrap();
        assert_eq!((s.num_edges(), s.num_triangles(), s.dimension()), (6, 4, 2));
        let s = SurfaceSpec::new(1, 2).unwrap();
        assert_eq!((s.num_edges(), s.num_triangles(), s.dimension()), (6, 4, 4));
    }

    #[test]
    fn excluded() {
        assert!(SurfaceSpec::new(0, 3).is_err());
        assert!(SurfaceSpec::new(0, 2).is_err());
        assert!(SurfaceSpec::new(2, 0).is_err());
        assert!(SurfaceSpec::new(0, 5).is_ok());
    }
}
