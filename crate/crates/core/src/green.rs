//! The resolvent kernel in all three off-axis energy regions, its expansion
//! coefficients in the two solution bases, and the action of the resolvent on
//! test functions.

use crate::eigen::{eigenfunction, EigenfunctionKind};
use crate::energy::{branch_sqrt, ComplexEnergy, Region};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_interval, integrate_semi_infinite, QuadratureSpec};
use crate::scale::PhysicalScale;
use crate::testfn::TestFunction;
use crate::wave::SampledWave;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Which side of the kernel diagonal an evaluation fell on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ordering {
    RLessS,
    RGreaterS,
    Diagonal,
}

/// A kernel value together with the region it was computed in. Evaluations on
/// the imaginary energy axis are marked: there the region formulas are a
/// continuous extension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenEvaluation {
    pub value: Complex64,
    pub region: Region,
    pub ordering: Ordering,
    pub axis_extension: bool,
}

/// Kernel of the resolvent at energy `E` off the real axis.
///
/// The kernel is the product of the solution regular at the origin (at the
/// smaller radius) and the solution square-integrable at infinity (at the
/// larger radius), divided by their Wronskian:
/// negative side `-(c / sqrt(-cE)) chi~(min) f~(max) / 2`,
/// upper half `-(c / sqrt(cE)) chi(min) f+(max)`,
/// lower half `-(c / sqrt(cE)) chi(min) f-(max)`.
/// On the diagonal the two one-sided forms coincide; the evaluation reports
/// `Diagonal` and uses either.
pub fn green_eval(
    r: f64,
    s: f64,
    e: &ComplexEnergy,
    scale: &PhysicalScale,
) -> Result<GreenEvaluation> {
    if !e.is_off_real_axis() {
        return Err(Error::OnRealAxis);
    }
    let c = scale.c();
    let (lo, hi) = if r <= s { (r, s) } else { (s, r) };
    let ordering = if r < s {
        Ordering::RLessS
    } else if r > s {
        Ordering::RGreaterS
    } else {
        Ordering::Diagonal
    };

    let value = match e.region() {
        Region::NegRe => {
            let km = branch_sqrt(-c * e.value());
            let chi_t = eigenfunction(EigenfunctionKind::ChiTilde, lo, e, scale)?;
            let f_t = eigenfunction(EigenfunctionKind::FTilde, hi, e, scale)?;
            -(c / km) * chi_t * f_t / 2.0
        }
        Region::UpperHalf => {
            let k = branch_sqrt(c * e.value());
            let chi = eigenfunction(EigenfunctionKind::Chi, lo, e, scale)?;
            let fp = eigenfunction(EigenfunctionKind::FPlus, hi, e, scale)?;
            -(c / k) * chi * fp
        }
        Region::LowerHalf => {
            let k = branch_sqrt(c * e.value());
            let chi = eigenfunction(EigenfunctionKind::Chi, lo, e, scale)?;
            let fm = eigenfunction(EigenfunctionKind::FMinus, hi, e, scale)?;
            -(c / k) * chi * fm
        }
        // unreachable given is_off_real_axis, kept for exhaustiveness
        _ => return Err(Error::OnRealAxis),
    };

    Ok(GreenEvaluation {
        value,
        region: e.region(),
        ordering,
        axis_extension: e.on_imaginary_axis(),
    })
}

/// Which half-plane a coefficient matrix was evaluated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HalfPlane {
    Upper,
    Lower,
    NegReUpper,
    NegReLower,
}

/// Solution basis the coefficients refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SigmaBasis {
    /// sigma_1 = chi, sigma_2 = cos(kr); positive-side basis.
    Positive,
    /// sigma~_1 = e^{k_minus r}, sigma~_2 = f~; negative-side basis.
    Negative,
}

/// Expansion coefficients of the kernel in a solution basis:
/// `G(r,s;E) = sum_ij theta_ij sigma_i(r;E) conj(sigma_j(s;conj E))` for
/// `r < s`. Their discontinuity across the real axis generates the spectral
/// measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaMatrix {
    pub entries: [[Complex64; 2]; 2],
    pub half_plane: HalfPlane,
    pub basis: SigmaBasis,
}

impl ThetaMatrix {
    /// Evaluates the basis function `i` (1-based) of this matrix's basis.
    pub fn basis_function(
        &self,
        i: usize,
        r: f64,
        e: &ComplexEnergy,
        scale: &PhysicalScale,
    ) -> Result<Complex64> {
        let kind = match (self.basis, i) {
            (SigmaBasis::Positive, 1) => EigenfunctionKind::Chi,
            (SigmaBasis::Positive, 2) => EigenfunctionKind::Sigma2Cos,
            (SigmaBasis::Negative, 2) => EigenfunctionKind::FTilde,
            (SigmaBasis::Negative, 1) => {
                // e^{k_minus r} is not one of the named closed forms; build it
                let km = branch_sqrt(-scale.c() * e.value());
                return Ok((km * r).exp());
            }
            _ => {
                return Err(Error::InvalidSpec(format!(
                    "basis index {i} out of range"
                )))
            }
        };
        eigenfunction(kind, r, e, scale)
    }

    /// Reconstructs the kernel from the expansion for `r < s`.
    pub fn reconstruct(
        &self,
        r: f64,
        s: f64,
        e: &ComplexEnergy,
        scale: &PhysicalScale,
    ) -> Result<Complex64> {
        let e_conj = e.conj();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 1..=2 {
            for j in 1..=2 {
                let t = self.entries[i - 1][j - 1];
                if t == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let si = self.basis_function(i, r, e, scale)?;
                let sj = self.basis_function(j, s, &e_conj, scale)?;
                acc += t * si * sj.conj();
            }
        }
        Ok(acc)
    }
}

/// Coefficient matrix over the negative-real half of the plane, in the
/// negative-side basis. Its first column vanishes and all entries are
/// analytic across the negative real axis, which is what puts that axis in
/// the resolvent set.
pub fn theta_minus(e: &ComplexEnergy, scale: &PhysicalScale) -> Result<ThetaMatrix> {
    if e.region() != Region::NegRe {
        return Err(Error::WrongRegion {
            expected: "Re E < 0, Im E != 0",
            region: e.region(),
        });
    }
    let c = scale.c();
    let q = c / branch_sqrt(-c * e.value());
    let zero = Complex64::new(0.0, 0.0);
    Ok(ThetaMatrix {
        entries: [[zero, -q / 2.0], [zero, q / 2.0]],
        half_plane: if e.value().im > 0.0 {
            HalfPlane::NegReUpper
        } else {
            HalfPlane::NegReLower
        },
        basis: SigmaBasis::Negative,
    })
}

/// Coefficient matrix over the positive-real half of the plane, in the
/// positive-side basis. The second row vanishes; the (1,1) entry flips sign
/// between the half-planes, and that discontinuity is the spectral density.
pub fn theta_plus(e: &ComplexEnergy, scale: &PhysicalScale) -> Result<ThetaMatrix> {
    let (half_plane, sign) = match e.region() {
        Region::UpperHalf => (HalfPlane::Upper, -1.0),
        Region::LowerHalf => (HalfPlane::Lower, 1.0),
        _ => {
            return Err(Error::WrongRegion {
                expected: "Re E > 0, Im E != 0",
                region: e.region(),
            })
        }
    };
    let c = scale.c();
    let q = c / branch_sqrt(c * e.value());
    let zero = Complex64::new(0.0, 0.0);
    Ok(ThetaMatrix {
        entries: [
            [Complex64::i() * q * sign, -q],
            [zero, zero],
        ],
        half_plane,
        basis: SigmaBasis::Positive,
    })
}

/// Applies the resolvent to a test function: `g(r) = int_0^inf G(r,s;E) f(s) ds`,
/// sampled on `r_grid`. The integral is split at `s = r` where the kernel has
/// a derivative kink, and the resulting `g` satisfies `(E - h0) g = f`.
pub fn resolvent_apply(
    f: &TestFunction,
    e: &ComplexEnergy,
    r_grid: &[f64],
    quad: &QuadratureSpec,
    scale: &PhysicalScale,
) -> Result<SampledWave> {
    if !e.is_off_real_axis() {
        return Err(Error::OnRealAxis);
    }
    let mut values = Vec::with_capacity(r_grid.len());
    for &r in r_grid {
        values.push(resolvent_apply_at(f, e, r, quad, scale)?);
    }
    SampledWave::new(r_grid.to_vec(), values)
}

/// Pointwise resolvent application at a single radius.
pub fn resolvent_apply_at(
    f: &TestFunction,
    e: &ComplexEnergy,
    r: f64,
    quad: &QuadratureSpec,
    scale: &PhysicalScale,
) -> Result<Complex64> {
    if !e.is_off_real_axis() {
        return Err(Error::OnRealAxis);
    }
    if f.is_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let kernel = |s: f64| {
        green_eval(r, s, e, scale)
            .map(|g| g.value * f.eval(s))
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    };
    let near = if r > 0.0 {
        integrate_interval(kernel, 0.0, r, quad)?.value
    } else {
        Complex64::new(0.0, 0.0)
    };
    let far = integrate_semi_infinite(|s| kernel(s + r), quad)?.value;
    Ok(near + far)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::central_deriv2;
    use num_complex::Complex64;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scale() -> PhysicalScale {
        PhysicalScale::default()
    }

    fn ce(re: f64, im: f64) -> ComplexEnergy {
        ComplexEnergy::new(Complex64::new(re, im))
    }

    #[test]
    fn negative_region_value() {
        // -(1/1) sinh(1) e^{-2}, frozen from the closed form
        let g = green_eval(1.0, 2.0, &ce(-1.0, 0.0), &scale());
        assert!(matches!(g, Err(Error::OnRealAxis)));
        // the formula itself is checked slightly off the axis and at the
        // continuity limit through the reconstruct tests; here pin the value
        // at E = -1 + 1e-300i which classifies as NegRe
        let g = green_eval(1.0, 2.0, &ce(-1.0, 1e-300), &scale()).unwrap();
        let expect = -1.1752011936438014_f64 * (-2.0_f64).exp();
        assert!((g.value.re - expect).abs() < 1e-15, "{}", g.value.re);
        assert!(g.value.im.abs() < 1e-12);
        assert_eq!(g.region, Region::NegRe);
    }

    #[test]
    fn upper_half_value_at_imaginary_energy() {
        let g = green_eval(1.0, 2.0, &ce(0.0, 2.0), &scale()).unwrap();
        let expect = Complex64::new(0.013619747426357612, -0.13764721465552343);
        assert!((g.value - expect).norm() < 1e-15, "{}", g.value);
        assert!(g.axis_extension);
        assert_eq!(g.region, Region::UpperHalf);
    }

    #[test]
    fn kernel_symmetry() {
        let e = ce(0.0, 2.0);
        let a = green_eval(1.0, 2.0, &e, &scale()).unwrap();
        let b = green_eval(2.0, 1.0, &e, &scale()).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.ordering, Ordering::RLessS);
        assert_eq!(b.ordering, Ordering::RGreaterS);
        let d = green_eval(1.5, 1.5, &e, &scale()).unwrap();
        assert_eq!(d.ordering, Ordering::Diagonal);
    }

    #[test]
    fn conjugate_symmetry() {
        let s = scale();
        for &(re, im) in &[(2.0, 1.5), (-3.0, 0.7), (0.5, -2.0)] {
            let e = ce(re, im);
            let a = green_eval(0.8, 2.3, &e, &s).unwrap().value;
            let b = green_eval(0.8, 2.3, &e.conj(), &s).unwrap().value;
            assert!((a.conj() - b).norm() <= 1e-12 * a.norm());
        }
    }

    #[test]
    fn theta_minus_entries() {
        let s = scale();
        let t = theta_minus(&ce(-1.0, 0.5), &s).unwrap();
        assert_eq!(t.entries[0][0], Complex64::new(0.0, 0.0));
        assert_eq!(t.entries[1][0], Complex64::new(0.0, 0.0));
        // at E exactly -1 the entries are -1/2 and 1/2
        let t = theta_minus(&ce(-1.0, 1e-300), &s).unwrap();
        assert!((t.entries[0][1] - Complex64::new(-0.5, 0.0)).norm() < 1e-12);
        assert!((t.entries[1][1] - Complex64::new(0.5, 0.0)).norm() < 1e-12);
        let t = theta_minus(&ce(-4.0, 1e-300), &s).unwrap();
        assert!((t.entries[0][1] - Complex64::new(-0.25, 0.0)).norm() < 1e-12);
        assert!(t.basis == SigmaBasis::Negative);
    }

    #[test]
    fn theta_plus_entries_above_and_below() {
        let s = scale();
        let above = theta_plus(&ce(1.0, 1e-9), &s).unwrap();
        assert!((above.entries[0][0] - Complex64::new(0.0, -1.0)).norm() < 1e-8);
        assert!((above.entries[0][1] - Complex64::new(-1.0, 0.0)).norm() < 1e-8);
        assert_eq!(above.entries[1][0], Complex64::new(0.0, 0.0));
        assert_eq!(above.entries[1][1], Complex64::new(0.0, 0.0));

        let below = theta_plus(&ce(1.0, -1e-9), &s).unwrap();
        assert!((below.entries[0][0] - Complex64::new(0.0, 1.0)).norm() < 1e-8);
        // the (1,2) entry has no jump across the axis
        assert!((below.entries[0][1] - above.entries[0][1]).norm() < 1e-8);
    }

    #[test]
    fn wrong_region_is_rejected() {
        let s = scale();
        assert!(matches!(
            theta_plus(&ce(-1.0, 1.0), &s),
            Err(Error::WrongRegion { .. })
        ));
        assert!(matches!(
            theta_minus(&ce(1.0, 1.0), &s),
            Err(Error::WrongRegion { .. })
        ));
    }

    #[test]
    fn reconstruction_matches_kernel_in_all_regions() {
        // The sweep stays inside the domain where the oscillatory basis keeps
        // its cancellation below the 1e-12 relative target: Im(k) * s stays
        // of order one.
        let s = scale();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let r = rng.gen_range(0.05..1.5);
            let sv = r + rng.gen_range(0.05..1.5);

            // negative region
            let e = ce(rng.gen_range(-6.0..-0.2), rng.gen_range(0.1..2.0));
            let g = green_eval(r, sv, &e, &s).unwrap().value;
            let t = theta_minus(&e, &s).unwrap();
            let rec = t.reconstruct(r, sv, &e, &s).unwrap();
            assert!((g - rec).norm() <= 1e-12 * g.norm().max(1e-300), "neg {e:?}");

            // upper and lower
            for sign in [1.0, -1.0] {
                let e = ce(rng.gen_range(0.5..6.0), sign * rng.gen_range(0.1..1.5));
                let g = green_eval(r, sv, &e, &s).unwrap().value;
                let t = theta_plus(&e, &s).unwrap();
                let rec = t.reconstruct(r, sv, &e, &s).unwrap();
                assert!(
                    (g - rec).norm() <= 1e-12 * g.norm().max(1e-300),
                    "pos {e:?}"
                );
            }
        }
    }

    #[test]
    fn resolvent_defining_property() {
        // (E - h0) g = f pointwise, h0 g by central differences
        let s = scale();
        let quad = QuadratureSpec::default();
        let f = TestFunction::gaussian_times_r();
        let e = ce(0.0, 2.0);
        for &r in &[0.5, 1.0, 2.0, 3.5] {
            let g_at = |x: f64| resolvent_apply_at(&f, &e, x, &quad, &s).unwrap();
            let h0g = -central_deriv2(&g_at, r, Some(0.005)) / s.c();
            let resid = (e.value() * g_at(r) - h0g - f.eval(r)).norm();
            assert!(resid < 1e-6, "residual {resid:e} at r={r}");
        }
    }

    #[test]
    fn resolvent_of_zero_is_zero() {
        let s = scale();
        let quad = QuadratureSpec::default();
        let w = resolvent_apply(
            &TestFunction::zero(),
            &ce(0.0, 2.0),
            &[0.5, 1.0, 2.0],
            &quad,
            &s,
        )
        .unwrap();
        assert!(w.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn resolvent_rejects_real_energy() {
        let s = scale();
        let quad = QuadratureSpec::default();
        let r = resolvent_apply(
            &TestFunction::gaussian_times_r(),
            &ce(1.0, 0.0),
            &[1.0],
            &quad,
            &s,
        );
        assert!(matches!(r, Err(Error::OnRealAxis)));
    }
}
