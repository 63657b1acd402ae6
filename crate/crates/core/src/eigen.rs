//! Closed-form eigenfunctions of the free radial operator in each energy
//! region, their Wronskians, and a numeric ODE cross-check of the regular
//! solution.

use crate::energy::{branch_sqrt, ComplexEnergy, Region};
use crate::error::{Error, Result};
use crate::scale::PhysicalScale;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// The closed-form solutions used across the energy plane. `ChiTilde` and
/// `FTilde` live on the negative-real side; the other four on the positive
/// side. `Chi` is the solution regular at the origin, `FPlus`/`FMinus` are
/// square-integrable at infinity in the upper/lower half-plane, and
/// `Sigma2Cos` is the second basis element used in the kernel expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EigenfunctionKind {
    ChiTilde,
    FTilde,
    Chi,
    FPlus,
    FMinus,
    Sigma2Cos,
}

impl EigenfunctionKind {
    /// Whether this closed form is defined for energies in `region`.
    pub fn valid_in(&self, region: Region) -> bool {
        match self {
            EigenfunctionKind::ChiTilde | EigenfunctionKind::FTilde => {
                matches!(region, Region::NegRe | Region::NegativeAxis)
            }
            _ => matches!(
                region,
                Region::UpperHalf | Region::LowerHalf | Region::PositiveAxis
            ),
        }
    }
}

fn check_kind(kind: EigenfunctionKind, e: &ComplexEnergy) -> Result<()> {
    if kind.valid_in(e.region()) {
        Ok(())
    } else {
        Err(Error::KindRegionMismatch {
            kind,
            region: e.region(),
        })
    }
}

/// Evaluates the closed-form eigenfunction `kind` at radius `r`.
///
/// With `k_minus = branch_sqrt(-cE)` and `k = branch_sqrt(cE)`:
/// `ChiTilde = e^{k_minus r} - e^{-k_minus r}`, `FTilde = e^{-k_minus r}`,
/// `Chi = sin(kr)`, `FPlus = e^{ikr}`, `FMinus = e^{-ikr}`,
/// `Sigma2Cos = cos(kr)`.
pub fn eigenfunction(
    kind: EigenfunctionKind,
    r: f64,
    e: &ComplexEnergy,
    scale: &PhysicalScale,
) -> Result<Complex64> {
    check_kind(kind, e)?;
    let c = scale.c();
    Ok(match kind {
        EigenfunctionKind::ChiTilde => {
            let km = branch_sqrt(-c * e.value());
            (km * r).exp() - (-km * r).exp()
        }
        EigenfunctionKind::FTilde => {
            let km = branch_sqrt(-c * e.value());
            (-km * r).exp()
        }
        EigenfunctionKind::Chi => (branch_sqrt(c * e.value()) * r).sin(),
        EigenfunctionKind::FPlus => {
            (Complex64::i() * branch_sqrt(c * e.value()) * r).exp()
        }
        EigenfunctionKind::FMinus => {
            (-Complex64::i() * branch_sqrt(c * e.value()) * r).exp()
        }
        EigenfunctionKind::Sigma2Cos => (branch_sqrt(c * e.value()) * r).cos(),
    })
}

/// First derivative in `r` of the closed form.
pub fn eigenfunction_deriv1(
    kind: EigenfunctionKind,
    r: f64,
    e: &ComplexEnergy,
    scale: &PhysicalScale,
) -> Result<Complex64> {
    check_kind(kind, e)?;
    let c = scale.c();
    Ok(match kind {
        EigenfunctionKind::ChiTilde => {
            let km = branch_sqrt(-c * e.value());
            km * ((km * r).exp() + (-km * r).exp())
        }
        EigenfunctionKind::FTilde => {
            let km = branch_sqrt(-c * e.value());
            -km * (-km * r).exp()
        }
        EigenfunctionKind::Chi => {
            let k = branch_sqrt(c * e.value());
            k * (k * r).cos()
        }
        EigenfunctionKind::FPlus => {
            let k = branch_sqrt(c * e.value());
            Complex64::i() * k * (Complex64::i() * k * r).exp()
        }
        EigenfunctionKind::FMinus => {
            let k = branch_sqrt(c * e.value());
            -Complex64::i() * k * (-Complex64::i() * k * r).exp()
        }
        EigenfunctionKind::Sigma2Cos => {
            let k = branch_sqrt(c * e.value());
            -k * (k * r).sin()
        }
    })
}

/// Second derivative in `r` of the closed form, written termwise rather than
/// through the eigenvalue relation so ODE-residual tests stay independent.
pub fn eigenfunction_deriv2(
    kind: EigenfunctionKind,
    r: f64,
    e: &ComplexEnergy,
    scale: &PhysicalScale,
) -> Result<Complex64> {
    check_kind(kind, e)?;
    let c = scale.c();
    Ok(match kind {
        EigenfunctionKind::ChiTilde => {
            let km = branch_sqrt(-c * e.value());
            km * km * ((km * r).exp() - (-km * r).exp())
        }
        EigenfunctionKind::FTilde => {
            let km = branch_sqrt(-c * e.value());
            km * km * (-km * r).exp()
        }
        EigenfunctionKind::Chi => {
            let k = branch_sqrt(c * e.value());
            -k * k * (k * r).sin()
        }
        EigenfunctionKind::FPlus => {
            let k = branch_sqrt(c * e.value());
            -k * k * (Complex64::i() * k * r).exp()
        }
        EigenfunctionKind::FMinus => {
            let k = branch_sqrt(c * e.value());
            -k * k * (-Complex64::i() * k * r).exp()
        }
        EigenfunctionKind::Sigma2Cos => {
            let k = branch_sqrt(c * e.value());
            -k * k * (k * r).cos()
        }
    })
}

/// Solution pairs with known constant Wronskians.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WronskianPair {
    ChiTildeFTilde,
    ChiFPlus,
    ChiFMinus,
}

/// Closed-form Wronskian of the pair: `-2 branch_sqrt(-cE)` for the
/// negative-side pair, `-branch_sqrt(cE)` for both positive-side pairs.
pub fn wronskian_closed(
    pair: WronskianPair,
    e: &ComplexEnergy,
    scale: &PhysicalScale,
) -> Result<Complex64> {
    let c = scale.c();
    match pair {
        WronskianPair::ChiTildeFTilde => {
            check_kind(EigenfunctionKind::ChiTilde, e)?;
            Ok(-2.0 * branch_sqrt(-c * e.value()))
        }
        WronskianPair::ChiFPlus | WronskianPair::ChiFMinus => {
            check_kind(EigenfunctionKind::Chi, e)?;
            Ok(-branch_sqrt(c * e.value()))
        }
    }
}

/// Numeric Wronskian `u v' - u' v` at radius `r`, with derivatives from a
/// 5-point central stencil of step `eps^(1/3) max(1, |r|)`.
pub fn wronskian_numeric<U, V>(u: U, v: V, r: f64) -> Complex64
where
    U: Fn(f64) -> Complex64,
    V: Fn(f64) -> Complex64,
{
    let du = central_deriv1(&u, r);
    let dv = central_deriv1(&v, r);
    u(r) * dv - du * v(r)
}

/// 5-point central first derivative.
pub(crate) fn central_deriv1<F>(f: &F, r: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let h = f64::EPSILON.powf(1.0 / 3.0) * r.abs().max(1.0);
    (f(r - 2.0 * h) - 8.0 * f(r - h) + 8.0 * f(r + h) - f(r + 2.0 * h)) / (12.0 * h)
}

/// 5-point central second derivative. The wider default step keeps the
/// roundoff amplification of the 1/h^2 factor below truncation error.
pub(crate) fn central_deriv2<F>(f: &F, r: f64, step: Option<f64>) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let h = step.unwrap_or_else(|| f64::EPSILON.powf(1.0 / 6.0) * r.abs().max(1.0));
    (-f(r - 2.0 * h) + 16.0 * f(r - h) - 30.0 * f(r) + 16.0 * f(r + h) - f(r + 2.0 * h))
        / (12.0 * h * h)
}

/// Dense-output solution of the regular initial value problem
/// `u'' = -cE u`, `u(0) = 0`, `u'(0) = sqrt(cE)`, for real `E > 0`.
///
/// Stored as (value, derivative) pairs on a uniform step grid; evaluation
/// between nodes uses cubic Hermite interpolation, which preserves the
/// integrator's accuracy.
#[derive(Debug, Clone)]
pub struct ChiSolution {
    step: f64,
    nodes: Vec<f64>,
    u: Vec<f64>,
    du: Vec<f64>,
}

impl ChiSolution {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn samples(&self) -> &[f64] {
        &self.u
    }

    pub fn value_at(&self, r: f64) -> f64 {
        let n = self.nodes.len();
        if r <= 0.0 {
            return 0.0;
        }
        if r >= self.nodes[n - 1] {
            return self.u[n - 1];
        }
        let i = ((r / self.step) as usize).min(n - 2);
        let t = (r - self.nodes[i]) / self.step;
        let h = self.step;
        let (u0, u1, d0, d1) = (self.u[i], self.u[i + 1], self.du[i], self.du[i + 1]);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * u0
            + (t3 - 2.0 * t2 + t) * h * d0
            + (-2.0 * t3 + 3.0 * t2) * u1
            + (t3 - t2) * h * d1
    }
}

/// Integrates the regular solution out to `r_max` with classic fourth-order
/// Runge-Kutta at a step small enough for ~1e-9 global accuracy.
pub fn solve_chi_numeric(e: f64, r_max: f64, scale: &PhysicalScale) -> Result<ChiSolution> {
    if e <= 0.0 {
        return Err(Error::NonPositiveEnergy { energy: e });
    }
    if !(r_max > 0.0) {
        return Err(Error::InvalidSpec("r_max must be positive".into()));
    }
    let c = scale.c();
    let k2 = c * e;
    let k = k2.sqrt();

    // global RK4 error scales like r_max k^5 h^4; aim well under 1e-9
    let h_target = (1e-11 / (k2 * k2 * k * r_max.max(1.0))).powf(0.25).min(5e-4);
    let steps_f = (r_max / h_target).ceil();
    if !(steps_f.is_finite() && steps_f < 5e7) {
        return Err(Error::StepSizeUnderflow);
    }
    let steps = steps_f as usize;
    let h = r_max / steps as f64;

    let mut nodes = Vec::with_capacity(steps + 1);
    let mut u = Vec::with_capacity(steps + 1);
    let mut du = Vec::with_capacity(steps + 1);
    let mut y = 0.0_f64;
    let mut dy = k;
    nodes.push(0.0);
    u.push(y);
    du.push(dy);

    let accel = |x: f64| -k2 * x;
    for i in 0..steps {
        let k1 = (dy, accel(y));
        let k2v = (dy + 0.5 * h * k1.1, accel(y + 0.5 * h * k1.0));
        let k3 = (dy + 0.5 * h * k2v.1, accel(y + 0.5 * h * k2v.0));
        let k4 = (dy + h * k3.1, accel(y + h * k3.0));
        y += h / 6.0 * (k1.0 + 2.0 * k2v.0 + 2.0 * k3.0 + k4.0);
        dy += h / 6.0 * (k1.1 + 2.0 * k2v.1 + 2.0 * k3.1 + k4.1);
        nodes.push((i + 1) as f64 * h);
        u.push(y);
        du.push(dy);
    }

    Ok(ChiSolution {
        step: h,
        nodes,
        u,
        du,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::ComplexEnergy;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn scale() -> PhysicalScale {
        PhysicalScale::default()
    }

    fn ce(re: f64, im: f64) -> ComplexEnergy {
        ComplexEnergy::new(Complex64::new(re, im))
    }

    #[test]
    fn chi_vanishes_at_origin() {
        let v = eigenfunction(EigenfunctionKind::Chi, 0.0, &ce(5.0, 0.0), &scale()).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn chi_tilde_matches_sinh_form() {
        // E = -1, c = 1: k_minus = 1, value = 2 sinh(1)
        let v = eigenfunction(EigenfunctionKind::ChiTilde, 1.0, &ce(-1.0, 0.0), &scale()).unwrap();
        assert!((v.re - 2.3504023872876029).abs() < 1e-14);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn f_plus_at_complex_energy() {
        // E = 2i, c = 1: k = 1 + i, e^{ik 2} = e^{-2} (cos 2 + i sin 2)
        let v = eigenfunction(EigenfunctionKind::FPlus, 2.0, &ce(0.0, 2.0), &scale()).unwrap();
        let expect = Complex64::new(-0.056319349992127881, 0.12306002480577674);
        assert!((v - expect).norm() < 1e-15);
    }

    #[test]
    fn kind_region_mismatch_is_rejected() {
        let r = eigenfunction(EigenfunctionKind::ChiTilde, 1.0, &ce(2.0, 1.0), &scale());
        assert!(matches!(r, Err(Error::KindRegionMismatch { .. })));
        let r = eigenfunction(EigenfunctionKind::Chi, 1.0, &ce(-2.0, 1.0), &scale());
        assert!(matches!(r, Err(Error::KindRegionMismatch { .. })));
    }

    #[test]
    fn closed_wronskians() {
        let s = scale();
        let w = wronskian_closed(WronskianPair::ChiFPlus, &ce(4.0, 0.0), &s).unwrap();
        assert!((w - Complex64::new(-2.0, 0.0)).norm() < 1e-15);
        let w = wronskian_closed(WronskianPair::ChiTildeFTilde, &ce(-1.0, 0.0), &s).unwrap();
        assert!((w - Complex64::new(-2.0, 0.0)).norm() < 1e-15);
        let w = wronskian_closed(WronskianPair::ChiFMinus, &ce(9.0, 0.0), &s).unwrap();
        assert!((w - Complex64::new(-3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn numeric_wronskian_matches_closed_form() {
        let s = scale();
        let e = ce(4.0, 0.0);
        let u = |r: f64| eigenfunction(EigenfunctionKind::Chi, r, &e, &s).unwrap();
        let v = |r: f64| eigenfunction(EigenfunctionKind::FPlus, r, &e, &s).unwrap();
        let w = wronskian_numeric(u, v, 1.3);
        assert!((w - Complex64::new(-2.0, 0.0)).norm() < 1e-10, "{w}");
    }

    #[test]
    fn wronskian_of_identical_functions_vanishes() {
        let s = scale();
        let e = ce(4.0, 0.0);
        let u = |r: f64| eigenfunction(EigenfunctionKind::Chi, r, &e, &s).unwrap();
        let w = wronskian_numeric(&u, &u, 0.7);
        assert!(w.norm() < 1e-12);
    }

    #[test]
    fn numeric_wronskian_constant_in_r() {
        let s = scale();
        let e = ce(9.0, 0.0);
        let u = |r: f64| eigenfunction(EigenfunctionKind::Chi, r, &e, &s).unwrap();
        let v = |r: f64| eigenfunction(EigenfunctionKind::FMinus, r, &e, &s).unwrap();
        let values: Vec<Complex64> = [0.5, 2.0, 7.0]
            .iter()
            .map(|&r| wronskian_numeric(&u, &v, r))
            .collect();
        for w in &values {
            assert!((w - values[0]).norm() < 1e-10);
            assert!((w - Complex64::new(-3.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn negative_axis_consistency_of_normalizations() {
        // ChiTilde(r; E) = -2i sin(branch_sqrt(cE) r) for real E < 0
        let s = scale();
        for &e in &[-0.5, -1.0, -3.7] {
            let en = ce(e, 0.0);
            for &r in &[0.3, 1.0, 2.4] {
                let lhs =
                    eigenfunction(EigenfunctionKind::ChiTilde, r, &en, &s).unwrap();
                let k = crate::energy::branch_sqrt(Complex64::new(s.c() * e, 0.0));
                let rhs = -2.0 * Complex64::i() * (k * r).sin();
                assert!((lhs - rhs).norm() < 1e-12 * lhs.norm().max(1.0));
            }
        }
    }

    #[test]
    fn chi_solver_matches_sine() {
        let s = scale();
        let sol = solve_chi_numeric(1.0, 20.0, &s).unwrap();
        assert_eq!(sol.value_at(0.0), 0.0);
        assert!((sol.value_at(std::f64::consts::FRAC_PI_2) - 1.0).abs() < 1e-8);
        let sol4 = solve_chi_numeric(4.0, 20.0, &s).unwrap();
        assert!(sol4.value_at(std::f64::consts::PI).abs() < 1e-8);
    }

    #[test]
    fn chi_solver_sup_error_over_grid() {
        let s = scale();
        for &e in &[0.25, 1.0, 4.0, 9.0] {
            let sol = solve_chi_numeric(e, 20.0, &s).unwrap();
            let k = (s.c() * e).sqrt();
            let sup = sol
                .nodes()
                .iter()
                .zip(sol.samples())
                .map(|(&r, &u)| (u - (k * r).sin()).abs())
                .fold(0.0_f64, f64::max);
            assert!(sup < 1e-8, "E={e}: sup error {sup:e}");
        }
    }

    #[test]
    fn chi_solver_rejects_nonpositive_energy() {
        assert!(solve_chi_numeric(-1.0, 10.0, &scale()).is_err());
        assert!(solve_chi_numeric(0.0, 10.0, &scale()).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn closed_forms_satisfy_the_ode(
            re in -8.0..8.0f64,
            im in -8.0..8.0f64,
            r in 0.01..6.0f64,
        ) {
            // residual |-u'' - cE u| with the exact termwise second derivative
            prop_assume!(im.abs() > 1e-3 || re.abs() > 1e-3);
            let s = scale();
            let e = ce(re, im);
            let kinds: &[EigenfunctionKind] = match e.region() {
                Region::NegRe | Region::NegativeAxis => {
                    &[EigenfunctionKind::ChiTilde, EigenfunctionKind::FTilde]
                }
                Region::Origin => &[],
                _ => &[
                    EigenfunctionKind::Chi,
                    EigenfunctionKind::FPlus,
                    EigenfunctionKind::FMinus,
                    EigenfunctionKind::Sigma2Cos,
                ],
            };
            for &kind in kinds {
                let u = eigenfunction(kind, r, &e, &s).unwrap();
                let upp = eigenfunction_deriv2(kind, r, &e, &s).unwrap();
                let resid = (-upp - s.c() * e.value() * u).norm();
                prop_assert!(
                    resid <= 1e-10 * u.norm().max(1.0) * (1.0 + s.c() * e.value().norm()),
                    "kind {kind:?} at r={r}, E={re}+{im}i: residual {resid:e}"
                );
            }
        }
    }
}
