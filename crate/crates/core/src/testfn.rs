//! The built-in test-function family: finite sums of terms
//! `a r^p e^{-w r^2 / 2}`.
//!
//! The family is closed under differentiation (powers shift by one) and under
//! the free Hamiltonian (odd powers stay odd), so every derivative and every
//! power of the operator applied to a member is again an exact member of the
//! wider polynomial-Gaussian algebra. Membership in the test space requires
//! odd powers, which makes the function and all its operator images vanish at
//! the origin.

use crate::error::{Error, Result};
use crate::scale::PhysicalScale;
use num_complex::Complex64;

/// One term `coeff * r^power * e^{-width r^2 / 2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussTerm {
    pub coeff: Complex64,
    pub power: u32,
    pub width: f64,
}

/// A finite polynomial-Gaussian sum with arbitrary nonnegative powers.
/// Closed under `d/dr`, scalar multiplication, and addition.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GaussPoly {
    terms: Vec<GaussTerm>,
}

impl GaussPoly {
    pub fn new(terms: Vec<GaussTerm>) -> Result<Self> {
        if terms.iter().any(|t| !(t.width > 0.0)) {
            return Err(Error::InvalidTestFunction(
                "all widths must be positive".into(),
            ));
        }
        let mut p = Self { terms };
        p.normalize();
        Ok(p)
    }

    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[GaussTerm] {
        &self.terms
    }

    /// Merge like terms and drop exact zeros. Widths are matched bitwise;
    /// derivative and operator images only ever reuse existing widths, so no
    /// tolerance is needed.
    fn normalize(&mut self) {
        self.terms.sort_by(|a, b| {
            a.width
                .partial_cmp(&b.width)
                .unwrap()
                .then(a.power.cmp(&b.power))
        });
        let mut merged: Vec<GaussTerm> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            if let Some(last) = merged.last_mut() {
                if last.width == t.width && last.power == t.power {
                    last.coeff += t.coeff;
                    continue;
                }
            }
            merged.push(t);
        }
        merged.retain(|t| t.coeff != Complex64::new(0.0, 0.0));
        self.terms = merged;
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, r: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            acc += t.coeff * r.powi(t.power as i32) * (-0.5 * t.width * r * r).exp();
        }
        acc
    }

    /// Exact derivative: `d/dr [r^p e^{-w r^2/2}] = p r^{p-1} e^{..} - w r^{p+1} e^{..}`.
    pub fn derivative(&self) -> Self {
        let mut terms = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            if t.power > 0 {
                terms.push(GaussTerm {
                    coeff: t.coeff * t.power as f64,
                    power: t.power - 1,
                    width: t.width,
                });
            }
            terms.push(GaussTerm {
                coeff: -t.coeff * t.width,
                power: t.power + 1,
                width: t.width,
            });
        }
        let mut p = Self { terms };
        p.normalize();
        p
    }

    pub fn derivative_n(&self, order: u32) -> Self {
        let mut d = self.clone();
        for _ in 0..order {
            d = d.derivative();
        }
        d
    }

    /// One application of the free Hamiltonian, `-(1/c) d^2/dr^2`.
    pub fn h0(&self, scale: &PhysicalScale) -> Self {
        self.derivative().derivative().scaled(Complex64::new(-1.0 / scale.c(), 0.0))
    }

    /// `(h0 + 1)^m`, exact in the family.
    pub fn h0_plus_one_pow(&self, m: u32, scale: &PhysicalScale) -> Self {
        let mut acc = self.clone();
        for _ in 0..m {
            acc = acc.h0(scale).add(&acc);
        }
        acc
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut p = Self {
            terms: self
                .terms
                .iter()
                .map(|t| GaussTerm {
                    coeff: t.coeff * factor,
                    ..*t
                })
                .collect(),
        };
        p.normalize();
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        let mut p = Self { terms };
        p.normalize();
        p
    }

    pub fn conj(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| GaussTerm {
                    coeff: t.coeff.conj(),
                    ..*t
                })
                .collect(),
        }
    }

    /// Smallest width in the sum; governs the decay rate.
    pub fn min_width(&self) -> Option<f64> {
        self.terms
            .iter()
            .map(|t| t.width)
            .min_by(|a, b| a.partial_cmp(b).unwrap())
    }
}

/// A member of the built-in test-function space: odd powers only, so the
/// function and every power of the Hamiltonian applied to it vanish at the
/// origin, and all weighted norms are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    poly: GaussPoly,
}

impl TestFunction {
    /// Builds a member from `(coefficient, power, width)` triples. Powers must
    /// be odd and positive, widths positive.
    pub fn new(terms: &[(f64, u32, f64)]) -> Result<Self> {
        for &(_, p, w) in terms {
            if p % 2 == 0 {
                return Err(Error::InvalidTestFunction(format!(
                    "power {p} is even; membership requires odd powers so that \
                     the function and its operator images vanish at the origin"
                )));
            }
            if !(w > 0.0) {
                return Err(Error::InvalidTestFunction(format!(
                    "width {w} must be positive for square-integrability"
                )));
            }
        }
        let poly = GaussPoly::new(
            terms
                .iter()
                .map(|&(a, p, w)| GaussTerm {
                    coeff: Complex64::new(a, 0.0),
                    power: p,
                    width: w,
                })
                .collect(),
        )?;
        Ok(Self { poly })
    }

    pub fn zero() -> Self {
        Self {
            poly: GaussPoly::zero(),
        }
    }

    /// The standard unit-width fixture `r e^{-r^2/2}`.
    pub fn gaussian_times_r() -> Self {
        Self::new(&[(1.0, 1, 1.0)]).unwrap()
    }

    pub fn poly(&self) -> &GaussPoly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn eval(&self, r: f64) -> Complex64 {
        self.poly.eval(r)
    }

    /// Evaluation for real-coefficient members.
    pub fn eval_real(&self, r: f64) -> f64 {
        self.poly.eval(r).re
    }

    /// Scalar multiple; complex factors are admitted (the family extension
    /// used by antilinearity checks).
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            poly: self.poly.scaled(factor),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            poly: self.poly.add(&other.poly),
        }
    }
}

/// Exact `order`-th derivative of a family member evaluated at `r`.
pub fn testfn_eval(phi: &TestFunction, r: f64, derivative_order: u32) -> Complex64 {
    phi.poly().derivative_n(derivative_order).eval(r)
}

/// Applies the free Hamiltonian `n` times; the odd-power family is closed
/// under it, so the result is again a member.
pub fn h0_apply(phi: &TestFunction, n: u32, scale: &PhysicalScale) -> TestFunction {
    let mut poly = phi.poly().clone();
    for _ in 0..n {
        poly = poly.h0(scale);
    }
    debug_assert!(poly.terms().iter().all(|t| t.power % 2 == 1));
    TestFunction { poly }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const EXP_HALF: f64 = 0.60653065971263342;

    #[test]
    fn direct_evaluation() {
        let phi = TestFunction::gaussian_times_r();
        assert!((testfn_eval(&phi, 1.0, 0).re - EXP_HALF).abs() < 1e-15);
    }

    #[test]
    fn second_derivative_closed_form() {
        // (r e^{-r^2/2})'' = (r^3 - 3r) e^{-r^2/2}; at r=1 that is -2 e^{-1/2}
        let phi = TestFunction::gaussian_times_r();
        let v = testfn_eval(&phi, 1.0, 2);
        assert!((v.re + 2.0 * EXP_HALF).abs() < 1e-14);
    }

    #[test]
    fn odd_members_vanish_at_origin() {
        let phi = TestFunction::new(&[(2.0, 3, 0.7), (-1.0, 1, 2.0)]).unwrap();
        assert_eq!(testfn_eval(&phi, 0.0, 0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn h0_of_unit_member() {
        let s = PhysicalScale::default();
        let phi = TestFunction::gaussian_times_r();
        let h = h0_apply(&phi, 1, &s);
        // (3r - r^3) e^{-r^2/2} at r = 1
        assert!((h.eval_real(1.0) - 2.0 * EXP_HALF).abs() < 1e-14);
    }

    #[test]
    fn h0_of_zero_is_zero() {
        let s = PhysicalScale::default();
        let z = h0_apply(&TestFunction::zero(), 3, &s);
        assert!(z.is_zero());
    }

    #[test]
    fn h0_powers_vanish_at_origin() {
        let s = PhysicalScale::default();
        let members = [
            TestFunction::gaussian_times_r(),
            TestFunction::new(&[(1.0, 3, 1.0)]).unwrap(),
            TestFunction::new(&[(0.5, 1, 0.4), (-2.0, 5, 1.3)]).unwrap(),
        ];
        for phi in &members {
            for n in 0..=4 {
                let img = h0_apply(phi, n, &s);
                assert_eq!(img.eval_real(0.0), 0.0, "n = {n}");
            }
        }
    }

    #[test]
    fn even_power_is_rejected() {
        let r = TestFunction::new(&[(1.0, 2, 1.0)]);
        assert!(matches!(r, Err(Error::InvalidTestFunction(_))));
    }

    #[test]
    fn nonpositive_width_is_rejected() {
        assert!(TestFunction::new(&[(1.0, 1, 0.0)]).is_err());
        assert!(TestFunction::new(&[(1.0, 1, -2.0)]).is_err());
    }

    #[test]
    fn like_terms_merge_and_cancel() {
        let p = GaussPoly::new(vec![
            GaussTerm {
                coeff: Complex64::new(1.0, 0.0),
                power: 1,
                width: 1.0,
            },
            GaussTerm {
                coeff: Complex64::new(-1.0, 0.0),
                power: 1,
                width: 1.0,
            },
        ])
        .unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn scaling_by_i_keeps_structure() {
        let phi = TestFunction::gaussian_times_r().scaled(Complex64::i());
        let v = phi.eval(1.0);
        assert!((v - Complex64::new(0.0, EXP_HALF)).norm() < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn derivative_matches_finite_differences(
            a in -2.0..2.0f64,
            w in 0.3..2.5f64,
            pidx in 0usize..3,
            r in 0.1..3.0f64,
        ) {
            let p = [1u32, 3, 5][pidx];
            let phi = TestFunction::new(&[(a, p, w)]).unwrap();
            let d = phi.poly().derivative();
            let exact = d.eval(r).re;
            let h = 1e-5;
            let fd = (phi.eval_real(r + h) - phi.eval_real(r - h)) / (2.0 * h);
            prop_assert!((exact - fd).abs() < 1e-6 * (1.0 + exact.abs()));
        }

        #[test]
        fn h0_is_linear(
            a in -2.0..2.0f64,
            b in -2.0..2.0f64,
        ) {
            let s = PhysicalScale::default();
            let f = TestFunction::new(&[(1.0, 1, 1.0)]).unwrap();
            let g = TestFunction::new(&[(1.0, 3, 0.5)]).unwrap();
            let lhs = h0_apply(
                &f.scaled(Complex64::new(a, 0.0)).add(&g.scaled(Complex64::new(b, 0.0))),
                1,
                &s,
            );
            let rhs = h0_apply(&f, 1, &s)
                .scaled(Complex64::new(a, 0.0))
                .add(&h0_apply(&g, 1, &s).scaled(Complex64::new(b, 0.0)));
            for r in [0.2, 0.9, 1.7, 3.1] {
                prop_assert!((lhs.eval(r) - rhs.eval(r)).norm() < 1e-12);
            }
        }
    }
}
