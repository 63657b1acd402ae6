//! Natural cubic spline interpolation on a strictly increasing node set.
//!
//! Used to evaluate sampled energy functions and sampled waves between their
//! nodes. The natural boundary condition (vanishing second derivative) is
//! exact for every wave this library produces: position-side samples vanish
//! oddly at the origin and decay at the far end.

use crate::error::{Error, Result};
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    // second derivatives at the nodes
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 2 || y.len() != n {
            return Err(Error::InvalidGrid(
                "spline needs at least two nodes and matching values".into(),
            ));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid(
                "spline nodes must be strictly increasing".into(),
            ));
        }

        // Thomas solve of the tridiagonal natural-spline system
        let mut m = vec![0.0; n];
        if n > 2 {
            let mut sub = vec![0.0; n - 2];
            let mut diag = vec![0.0; n - 2];
            let mut sup = vec![0.0; n - 2];
            let mut rhs = vec![0.0; n - 2];
            for i in 1..n - 1 {
                let h0 = x[i] - x[i - 1];
                let h1 = x[i + 1] - x[i];
                sub[i - 1] = h0;
                diag[i - 1] = 2.0 * (h0 + h1);
                sup[i - 1] = h1;
                rhs[i - 1] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
            }
            for i in 1..n - 2 {
                let w = sub[i] / diag[i - 1];
                diag[i] -= w * sup[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            m[n - 2] = rhs[n - 3] / diag[n - 3];
            for i in (1..n - 2).rev() {
                m[i] = (rhs[i - 1] - sup[i - 1] * m[i + 1]) / diag[i - 1];
            }
        }

        Ok(Self { x, y, m })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.x
    }

    /// Evaluates the spline; clamps to the boundary values outside the range.
    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        if t <= self.x[0] {
            return self.y[0];
        }
        if t >= self.x[n - 1] {
            return self.y[n - 1];
        }
        let i = match self
            .x
            .binary_search_by(|v| v.partial_cmp(&t).unwrap_or(std::cmp::Ordering::Less))
        {
            Ok(i) => return self.y[i],
            Err(i) => i - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }
}

/// Pair of splines carrying a complex-valued sample set.
#[derive(Debug, Clone)]
pub struct ComplexSpline {
    re: CubicSpline,
    im: CubicSpline,
}

impl ComplexSpline {
    pub fn new(x: Vec<f64>, values: &[Complex64]) -> Result<Self> {
        let re: Vec<f64> = values.iter().map(|v| v.re).collect();
        let im: Vec<f64> = values.iter().map(|v| v.im).collect();
        Ok(Self {
            re: CubicSpline::new(x.clone(), re)?,
            im: CubicSpline::new(x, im)?,
        })
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        Complex64::new(self.re.eval(t), self.im.eval(t))
    }

    pub fn nodes(&self) -> &[f64] {
        self.re.nodes()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_linear_function_exactly() {
        let x: Vec<f64> = (0..20).map(|i| i as f64 * 0.5).collect();
        let y: Vec<f64> = x.iter().map(|&t| 3.0 * t - 1.0).collect();
        let s = CubicSpline::new(x, y).unwrap();
        for t in [0.13, 2.71, 7.9, 9.49] {
            assert!((s.eval(t) - (3.0 * t - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn interpolates_smooth_function_closely() {
        let n = 400;
        let x: Vec<f64> = (0..n).map(|i| 10.0 * i as f64 / (n - 1) as f64).collect();
        let y: Vec<f64> = x.iter().map(|&t| t.sin() * (-0.1 * t).exp()).collect();
        let s = CubicSpline::new(x, y).unwrap();
        for i in 0..200 {
            let t = 0.025 + i as f64 * 0.05;
            let exact = t.sin() * (-0.1 * t).exp();
            assert!(
                (s.eval(t) - exact).abs() < 1e-6,
                "at {t}: {} vs {exact}",
                s.eval(t)
            );
        }
    }

    #[test]
    fn rejects_unsorted_nodes() {
        let r = CubicSpline::new(vec![0.0, 2.0, 1.0], vec![0.0, 1.0, 2.0]);
        assert!(r.is_err());
    }

    #[test]
    fn exact_at_nodes() {
        let x = vec![0.0, 1.0, 2.5, 4.0];
        let y = vec![1.0, -2.0, 0.5, 3.0];
        let s = CubicSpline::new(x.clone(), y.clone()).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            assert_eq!(s.eval(*xi), *yi);
        }
    }
}
