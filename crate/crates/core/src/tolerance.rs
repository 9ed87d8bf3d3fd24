use crate::error::{Error, Result};

/// Stopping and acceptance thresholds shared by the iterative routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_iter: usize) -> Result<Self> {
        let t = Tolerance {
            abs_tol,
            rel_tol,
            max_iter,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.abs_tol > 0.0
            && self.rel_tol > 0.0
            && self.abs_tol.is_finite()
            && self.rel_tol.is_finite()
            && self.max_iter >= 1;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidTolerance)
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_iter: 200,
        }
    }
}
