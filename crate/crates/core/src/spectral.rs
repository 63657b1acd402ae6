//! The spectral density, its recovery as a boundary discontinuity of the
//! kernel coefficients, and classification of real energies into spectrum
//! and resolvent set.

use crate::energy::ComplexEnergy;
use crate::error::{Error, Result};
use crate::green::{theta_minus, theta_plus};
use crate::quadrature::{integrate_interval, limit_extrapolate, LimitSpec, QuadratureSpec};
use crate::scale::PhysicalScale;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// The closed-form density of the spectral measure on the positive axis.
#[derive(Debug, Clone, Copy)]
pub struct SpectralDensity {
    scale: PhysicalScale,
}

impl SpectralDensity {
    pub fn new(scale: PhysicalScale) -> Self {
        Self { scale }
    }

    pub fn eval(&self, e: f64) -> Result<f64> {
        rho_density(e, &self.scale)
    }
}

/// Density of the spectral measure: `(1/pi) c / sqrt(cE)` for `E > 0`.
pub fn rho_density(e: f64, scale: &PhysicalScale) -> Result<f64> {
    if !(e > 0.0) {
        return Err(Error::NonPositiveEnergy { energy: e });
    }
    let c = scale.c();
    Ok(c / (c * e).sqrt() / std::f64::consts::PI)
}

/// The regularized discontinuity of the (1,1) kernel coefficient at height
/// `eps` above and below the real axis.
fn jump_at(e: f64, eps: f64, scale: &PhysicalScale) -> Result<Complex64> {
    let above = ComplexEnergy::new(Complex64::new(e, eps));
    let below = ComplexEnergy::new(Complex64::new(e, -eps));
    let (t_below, t_above) = if e > 0.0 {
        (theta_plus(&below, scale)?, theta_plus(&above, scale)?)
    } else {
        (theta_minus(&below, scale)?, theta_minus(&above, scale)?)
    };
    let num = t_below.entries[0][0] - t_above.entries[0][0];
    Ok(num / (Complex64::i() * 2.0 * std::f64::consts::PI))
}

/// Limit of the regularized jump as the axis is approached. Equals the
/// density for `E > 0` and vanishes for `E < 0`, where the coefficients are
/// analytic across the axis.
pub fn spectral_jump(e: f64, spec: &LimitSpec, scale: &PhysicalScale) -> Result<Complex64> {
    if e == 0.0 {
        return Err(Error::NonPositiveEnergy { energy: e });
    }
    let v = limit_extrapolate(|eps| jump_at(e, eps, scale).unwrap_or(Complex64::new(f64::NAN, 0.0)), spec)?;
    Ok(v.value)
}

/// Measure of the open interval `(e1, e2)` recovered by the double boundary
/// limit: integrate the regularized jump over `[e1+delta, e2-delta]`,
/// extrapolate the axis offset to zero first, then the endpoint inset.
///
/// Both ladders run on half-integer powers: when an endpoint or an interior
/// point touches the spectrum boundary at the origin, the limits approach
/// their values with square-root terms.
pub fn stieltjes_measure(
    e1: f64,
    e2: f64,
    spec: &LimitSpec,
    quad: &QuadratureSpec,
    scale: &PhysicalScale,
) -> Result<f64> {
    if !(e1 < e2) {
        return Err(Error::InvalidSpec(format!(
            "interval endpoints must satisfy e1 < e2, got ({e1}, {e2})"
        )));
    }
    let half = spec.with_half_power_ladder();

    let inner = |delta: f64| -> Result<Complex64> {
        let lo = e1 + delta;
        let hi = e2 - delta;
        if lo >= hi {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let at_eps = |eps: f64| -> Result<Complex64> {
            // the integrand is identically zero on the negative part and has
            // a kink at the origin; integrate the pieces separately
            let mut total = Complex64::new(0.0, 0.0);
            let pos_lo = lo.max(0.0);
            if hi > pos_lo {
                let q = integrate_interval(
                    |e| jump_at(e, eps, scale).unwrap_or(Complex64::new(f64::NAN, 0.0)),
                    pos_lo,
                    hi,
                    quad,
                )?;
                total += q.value;
            }
            if lo < 0.0 {
                let neg_hi = hi.min(0.0);
                if neg_hi > lo {
                    let q = integrate_interval(
                        |e| jump_at(e, eps, scale).unwrap_or(Complex64::new(f64::NAN, 0.0)),
                        lo,
                        neg_hi,
                        quad,
                    )?;
                    total += q.value;
                }
            }
            Ok(total)
        };
        let lim = limit_extrapolate(
            |eps| at_eps(eps).unwrap_or(Complex64::new(f64::NAN, 0.0)),
            &half,
        )?;
        Ok(lim.value)
    };

    let delta_spec = LimitSpec {
        max_steps: spec.max_steps.min(10),
        ..half
    };
    let outer = limit_extrapolate(
        |delta| inner(delta).unwrap_or(Complex64::new(f64::NAN, 0.0)),
        &delta_spec,
    )?;
    Ok(outer.value.re)
}

/// Verdict for one real energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumVerdict {
    ResolventSet,
    ContinuousSpectrum,
    SpectrumBoundary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumClassification {
    pub point: f64,
    pub verdict: SpectrumVerdict,
    pub jump_value: Complex64,
}

/// Detection threshold for a nonzero jump, in absolute units of
/// `sqrt(c)/pi`: comfortably above extrapolation noise, far below any
/// density value at desk-scale energies.
const JUMP_THRESHOLD: f64 = 1e-6;

/// Classifies a real energy by the measured jump of the kernel coefficient.
/// `E = 0` is the boundary of the spectrum and is reported as such without
/// evaluating the (divergent) jump there.
pub fn classify_point(
    e: f64,
    spec: &LimitSpec,
    scale: &PhysicalScale,
) -> Result<SpectrumClassification> {
    if e == 0.0 {
        return Ok(SpectrumClassification {
            point: 0.0,
            verdict: SpectrumVerdict::SpectrumBoundary,
            jump_value: Complex64::new(0.0, 0.0),
        });
    }
    let jump = spectral_jump(e, spec, scale)?;
    let threshold = JUMP_THRESHOLD * scale.c().sqrt() / std::f64::consts::PI;
    let verdict = if jump.norm() > threshold {
        SpectrumVerdict::ContinuousSpectrum
    } else {
        SpectrumVerdict::ResolventSet
    };
    Ok(SpectrumClassification {
        point: e,
        verdict,
        jump_value: jump,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FRAC_1_PI: f64 = 0.31830988618379067;
    const FRAC_2_PI: f64 = 0.63661977236758134;

    fn scale() -> PhysicalScale {
        PhysicalScale::default()
    }

    #[test]
    fn density_values() {
        let s = scale();
        assert!((rho_density(1.0, &s).unwrap() - FRAC_1_PI).abs() < 1e-15);
        assert!((rho_density(4.0, &s).unwrap() - FRAC_1_PI / 2.0).abs() < 1e-15);
        let s4 = PhysicalScale::from_c(4.0);
        assert!((rho_density(1.0, &s4).unwrap() - 2.0 * FRAC_1_PI).abs() < 1e-15);
    }

    #[test]
    fn density_rejects_nonpositive_energy() {
        assert!(rho_density(0.0, &scale()).is_err());
        assert!(rho_density(-1.0, &scale()).is_err());
    }

    #[test]
    fn density_inverse_sqrt_law_on_log_grid() {
        let s = scale();
        let expect = s.c().sqrt() / std::f64::consts::PI;
        let mut e = 1e-3;
        while e <= 1e3 {
            let rho = rho_density(e, &s).unwrap();
            assert!(rho > 0.0);
            assert!((rho * e.sqrt() - expect).abs() < 1e-14 * expect);
            e *= 10.0;
        }
    }

    #[test]
    fn density_scaling_in_c() {
        // doubling c multiplies the density by sqrt(2)
        let e = 2.7;
        let r1 = rho_density(e, &PhysicalScale::from_c(1.0)).unwrap();
        let r2 = rho_density(e, &PhysicalScale::from_c(2.0)).unwrap();
        assert!((r2 / r1 - 2.0_f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn jump_recovers_density_on_positive_axis() {
        let s = scale();
        let spec = LimitSpec::default();
        for &e in &[0.5, 1.0, 2.0, 4.0, 8.0] {
            let j = spectral_jump(e, &spec, &s).unwrap();
            let rho = rho_density(e, &s).unwrap();
            assert!(
                (j.re - rho).abs() <= 1e-8 * rho,
                "E={e}: jump {} vs density {rho}",
                j.re
            );
            assert!(j.im.abs() < 1e-12);
            assert!(j.re >= 0.0);
        }
    }

    #[test]
    fn jump_vanishes_on_negative_axis() {
        let s = scale();
        let spec = LimitSpec::default();
        for &e in &[-0.5, -1.0, -2.0, -8.0] {
            let j = spectral_jump(e, &spec, &s).unwrap();
            assert!(j.norm() <= 1e-10, "E={e}: {j}");
        }
    }

    #[test]
    fn stieltjes_measure_of_inner_interval() {
        let s = scale();
        let m = stieltjes_measure(
            1.0,
            4.0,
            &LimitSpec::default(),
            &QuadratureSpec::default(),
            &s,
        )
        .unwrap();
        // (2/pi)(sqrt(4) - sqrt(1))
        assert!((m - FRAC_2_PI).abs() < 1e-6, "{m}");
    }

    #[test]
    fn stieltjes_measure_vanishes_on_resolvent_set() {
        let s = scale();
        let m = stieltjes_measure(
            -2.0,
            -1.0,
            &LimitSpec::default(),
            &QuadratureSpec::default(),
            &s,
        )
        .unwrap();
        assert!(m.abs() < 1e-12, "{m}");
    }

    #[test]
    fn stieltjes_measure_across_the_origin() {
        let s = scale();
        let m = stieltjes_measure(
            -1.0,
            1.0,
            &LimitSpec::default(),
            &QuadratureSpec::default(),
            &s,
        )
        .unwrap();
        // only the positive part carries mass: (2/pi) sqrt(1)
        assert!((m - FRAC_2_PI).abs() < 1e-5, "{m}");
    }

    #[test]
    fn stieltjes_measure_is_additive() {
        let s = scale();
        let spec = LimitSpec::default();
        let quad = QuadratureSpec::default();
        let a = stieltjes_measure(0.5, 2.0, &spec, &quad, &s).unwrap();
        let b = stieltjes_measure(2.0, 5.0, &spec, &quad, &s).unwrap();
        let c = stieltjes_measure(0.5, 5.0, &spec, &quad, &s).unwrap();
        assert!((a + b - c).abs() < 2e-6, "{} vs {}", a + b, c);
    }

    #[test]
    fn classification_sweep() {
        let s = scale();
        let spec = LimitSpec::default();
        let cls = classify_point(2.0, &spec, &s).unwrap();
        assert_eq!(cls.verdict, SpectrumVerdict::ContinuousSpectrum);
        let cls = classify_point(-3.0, &spec, &s).unwrap();
        assert_eq!(cls.verdict, SpectrumVerdict::ResolventSet);
        let cls = classify_point(0.0, &spec, &s).unwrap();
        assert_eq!(cls.verdict, SpectrumVerdict::SpectrumBoundary);
    }

    #[test]
    fn off_diagonal_coefficients_carry_no_measure() {
        // the extrapolated jumps of the (1,2), (2,1) and (2,2) entries vanish
        // across (0, inf); only the (1,1) entry generates measure
        let s = scale();
        let spec = LimitSpec::default();
        for &e in &[1.0, 4.0] {
            for (i, j) in [(0, 1), (1, 0), (1, 1)] {
                let lim = limit_extrapolate(
                    |eps| {
                        let above = ComplexEnergy::new(Complex64::new(e, eps));
                        let below = ComplexEnergy::new(Complex64::new(e, -eps));
                        let ta = theta_plus(&above, &s).unwrap();
                        let tb = theta_plus(&below, &s).unwrap();
                        (tb.entries[i][j] - ta.entries[i][j])
                            / (Complex64::i() * 2.0 * std::f64::consts::PI)
                    },
                    &spec,
                )
                .unwrap();
                assert!(
                    lim.value.norm() < 1e-10,
                    "entry ({i},{j}) at E={e}: {}",
                    lim.value
                );
            }
        }
    }
}
