//! Complex-valued functions sampled on a radial grid.

use crate::error::Result;
use crate::interp::ComplexSpline;
use crate::quadrature::{integrate_interval, QuadratureSpec};
use num_complex::Complex64;

/// A wave function known through samples on a strictly increasing r-grid.
/// Between nodes it evaluates through a cubic spline; outside the grid it is
/// treated as zero at the far end and clamped near the origin.
#[derive(Debug, Clone)]
pub struct SampledWave {
    nodes: Vec<f64>,
    values: Vec<Complex64>,
    spline: ComplexSpline,
}

impl SampledWave {
    pub fn new(nodes: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        let spline = ComplexSpline::new(nodes.clone(), &values)?;
        Ok(Self {
            nodes,
            values,
            spline,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn eval(&self, r: f64) -> Complex64 {
        if r > *self.nodes.last().unwrap() {
            return Complex64::new(0.0, 0.0);
        }
        self.spline.eval(r)
    }

    pub fn domain_end(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// L2 norm over the sampled domain.
    pub fn l2_norm(&self, quad: &QuadratureSpec) -> Result<f64> {
        let q = integrate_interval(
            |r| Complex64::new(self.eval(r).norm_sqr(), 0.0),
            self.nodes[0],
            self.domain_end(),
            quad,
        )?;
        Ok(q.value.re.max(0.0).sqrt())
    }

    /// Inner product (self, other) over the common sampled domain, conjugating
    /// the left factor.
    pub fn inner(&self, other: &SampledWave, quad: &QuadratureSpec) -> Result<Complex64> {
        let end = self.domain_end().min(other.domain_end());
        let start = self.nodes[0].max(other.nodes()[0]);
        let q = integrate_interval(
            |r| self.eval(r).conj() * other.eval(r),
            start,
            end,
            quad,
        )?;
        Ok(q.value)
    }
}
