//! Deterministic verification suites covering every module's invariants.
//!
//! Each suite produces a [`SpectralReport`] whose cases pin an observable
//! against an expectation and tolerance. Random sweeps draw from a seeded
//! generator so repeated runs are byte-identical. Computation errors inside a
//! case mark that case failed instead of aborting the suite.

use crate::eigen::{
    central_deriv2, eigenfunction, solve_chi_numeric, wronskian_closed, wronskian_numeric,
    EigenfunctionKind, WronskianPair,
};
use crate::energy::ComplexEnergy;
use crate::error::Result;
use crate::green::{green_eval, resolvent_apply, theta_minus, theta_plus};
use crate::quadrature::{
    integrate_interval, integrate_semi_infinite, limit_extrapolate, LimitSpec, QuadratureSpec,
};
use crate::report::{CaseResult, SpectralReport};
use crate::rhs::{
    eigen_residual, energy_delta_check, ket_action, norm_nm, nuclear_spectral_check,
    phi0_membership, sigma_sup_scan, N_MAX,
};
use crate::scale::PhysicalScale;
use crate::spectral::{classify_point, rho_density, spectral_jump, stieltjes_measure, SpectrumVerdict};
use crate::testfn::{h0_apply, GaussPoly, GaussTerm, TestFunction};
use crate::transform::{
    borel_image, energy_norm_sq, forward_transform, forward_transform_rho, inverse_transform_at,
    materialize_image, propagate, sigma_eval, transform_at, transform_rho_at, EnergyFunction,
    EnergyGrid,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Everything a verification run depends on. A run is reproducible from this
/// configuration alone.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub scale: PhysicalScale,
    pub quad: QuadratureSpec,
    pub limit: LimitSpec,
    pub grid_k_min: f64,
    pub grid_k_max: f64,
    pub grid_n: usize,
    pub seed: u64,
    /// When set, replaces every case tolerance in the produced reports.
    pub tol_override: Option<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            scale: PhysicalScale::default(),
            quad: QuadratureSpec::default(),
            limit: LimitSpec::default(),
            grid_k_min: 1e-3,
            grid_k_max: 12.0,
            grid_n: 256,
            seed: 42,
            tol_override: None,
        }
    }
}

impl VerifyConfig {
    pub fn grid(&self) -> Result<EnergyGrid> {
        EnergyGrid::linear_in_k(self.grid_k_min, self.grid_k_max, self.grid_n, &self.scale)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SuiteName {
    Norms,
    Spectrum,
    Green,
    Transform,
    Rhs,
}

impl SuiteName {
    pub const ALL: [SuiteName; 5] = [
        SuiteName::Green,
        SuiteName::Spectrum,
        SuiteName::Transform,
        SuiteName::Norms,
        SuiteName::Rhs,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SuiteName::Norms => "norms",
            SuiteName::Spectrum => "spectrum",
            SuiteName::Green => "green",
            SuiteName::Transform => "transform",
            SuiteName::Rhs => "rhs",
        }
    }
}

/// Deterministic family members for sweeps: one to three odd-power terms
/// with moderate coefficients and widths.
pub fn seeded_members(seed: u64, count: usize) -> Vec<TestFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n_terms = rng.gen_range(1..=3);
            let terms: Vec<(f64, u32, f64)> = (0..n_terms)
                .map(|_| {
                    let mut a: f64 = rng.gen_range(-2.0..2.0);
                    if a.abs() < 0.2 {
                        a = 0.2 * a.signum().max(0.5) + a;
                    }
                    let p = [1u32, 3, 5][rng.gen_range(0..3)];
                    let w = rng.gen_range(0.4..2.0);
                    (a, p, w)
                })
                .collect();
            TestFunction::new(&terms).expect("generated terms are valid")
        })
        .collect()
}

fn residual_case<F>(id: &str, inputs: &str, tol: f64, f: F) -> CaseResult
where
    F: FnOnce() -> Result<f64>,
{
    match f() {
        Ok(residual) => CaseResult::residual(id, inputs, residual, tol),
        Err(e) => CaseResult::residual(id, &format!("{inputs} [error: {e}]"), f64::INFINITY, tol),
    }
}

fn value_case<F>(id: &str, inputs: &str, expected: f64, tol: f64, f: F) -> CaseResult
where
    F: FnOnce() -> Result<f64>,
{
    match f() {
        Ok(actual) => CaseResult::compare(id, inputs, expected, actual, tol),
        Err(e) => CaseResult::compare(
            id,
            &format!("{inputs} [error: {e}]"),
            expected,
            f64::NAN,
            tol,
        ),
    }
}

fn override_tolerances(mut report: SpectralReport, tol: Option<f64>) -> SpectralReport {
    let Some(t) = tol else {
        return report;
    };
    let mut passed = 0;
    let mut failed = 0;
    for case in &mut report.cases {
        case.tolerance = t;
        case.status = if case.abs_error <= t {
            passed += 1;
            crate::report::CaseStatus::Pass
        } else {
            failed += 1;
            crate::report::CaseStatus::Fail
        };
    }
    report.passed = passed;
    report.failed = failed;
    report
}

pub fn verify_suite(name: SuiteName, cfg: &VerifyConfig) -> SpectralReport {
    let report = match name {
        SuiteName::Green => green_suite(cfg),
        SuiteName::Spectrum => spectrum_suite(cfg),
        SuiteName::Transform => transform_suite(cfg),
        SuiteName::Norms => norms_suite(cfg),
        SuiteName::Rhs => rhs_suite(cfg),
    };
    override_tolerances(report, cfg.tol_override)
}

pub fn verify_all(cfg: &VerifyConfig) -> Vec<SpectralReport> {
    SuiteName::ALL
        .iter()
        .map(|&s| verify_suite(s, cfg))
        .collect()
}

// frozen oracle values, computed from the stated closed forms
const FRAC_2_PI: f64 = 0.63661977236758134;
const EXP_HALF: f64 = 0.60653065971263342;
const FHAT_1: f64 = 0.42888194248035340;
const FHAT_4: f64 = 0.13533528323661269;
const FTILDE_1: f64 = 0.76017345053314040;
const GREEN_NEG: f64 = -0.15904618640178919;
const GREEN_UPPER_RE: f64 = 0.013619747426357612;
const GREEN_UPPER_IM: f64 = -0.13764721465552343;
const NORM_00: f64 = 0.66566768190019486;
const NORM_10: f64 = 1.4518208074056342;
const L2_SQ: f64 = 0.44311346272637901;
const NUCLEAR_N1: f64 = 0.66467019408956851;
const NUCLEAR_N2: f64 = 1.6616754852239213;
const BAND_NORM_SQ: f64 = 0.23325271067198431;

fn unit_member() -> TestFunction {
    TestFunction::gaussian_times_r()
}

fn green_suite(cfg: &VerifyConfig) -> SpectralReport {
    let mut rep = SpectralReport::new("green");
    let s = &cfg.scale;
    let quad = &cfg.quad;

    // pinned kernel values
    rep.push(value_case(
        "kernel-negative-region",
        "r=1, s=2, E=-1",
        GREEN_NEG,
        1e-12,
        || {
            Ok(green_eval(1.0, 2.0, &ComplexEnergy::new(Complex64::new(-1.0, 1e-300)), s)?
                .value
                .re)
        },
    ));
    rep.push(residual_case("kernel-upper-half", "r=1, s=2, E=2i", 1e-12, || {
        let g = green_eval(1.0, 2.0, &ComplexEnergy::new(Complex64::new(0.0, 2.0)), s)?;
        Ok((g.value - Complex64::new(GREEN_UPPER_RE, GREEN_UPPER_IM)).norm())
    }));

    // kernel symmetry and conjugation over a seeded sweep
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rep.push(residual_case(
        "kernel-argument-symmetry",
        "50 random (r,s,E)",
        1e-13,
        || {
            let mut worst = 0.0_f64;
            for _ in 0..50 {
                let r = rng.gen_range(0.1..3.0);
                let sv = rng.gen_range(0.1..3.0);
                let e = ComplexEnergy::new(Complex64::new(
                    rng.gen_range(-4.0..4.0),
                    rng.gen_range(0.2..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
                ));
                let a = green_eval(r, sv, &e, s)?.value;
                let b = green_eval(sv, r, &e, s)?.value;
                worst = worst.max((a - b).norm() / a.norm().max(1e-300));
            }
            Ok(worst)
        },
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    rep.push(residual_case(
        "kernel-conjugate-symmetry",
        "50 random (r,s,E)",
        1e-12,
        || {
            let mut worst = 0.0_f64;
            for _ in 0..50 {
                let r = rng.gen_range(0.1..3.0);
                let sv = rng.gen_range(0.1..3.0);
                let e = ComplexEnergy::new(Complex64::new(
                    rng.gen_range(-4.0..4.0),
                    rng.gen_range(0.2..2.0),
                ));
                let a = green_eval(r, sv, &e, s)?.value;
                let b = green_eval(r, sv, &e.conj(), s)?.value;
                worst = worst.max((a.conj() - b).norm() / a.norm().max(1e-300));
            }
            Ok(worst)
        },
    ));

    // coefficient-basis reconstruction, 200 points per region
    let regions: [(&str, bool); 3] = [
        ("reconstruction-negative", false),
        ("reconstruction-upper", true),
        ("reconstruction-lower", true),
    ];
    for (idx, (id, positive)) in regions.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(10 + idx as u64));
        rep.push(residual_case(id, "200 random (r<s, E)", 1e-12, || {
            let mut worst = 0.0_f64;
            for _ in 0..200 {
                let r = rng.gen_range(0.05..1.5);
                let sv = r + rng.gen_range(0.05..1.5);
                let (e, theta) = if *positive {
                    let sign = if *id == "reconstruction-upper" { 1.0 } else { -1.0 };
                    let e = ComplexEnergy::new(Complex64::new(
                        rng.gen_range(0.5..6.0),
                        sign * rng.gen_range(0.1..1.5),
                    ));
                    let t = theta_plus(&e, s)?;
                    (e, t)
                } else {
                    let e = ComplexEnergy::new(Complex64::new(
                        rng.gen_range(-6.0..-0.2),
                        rng.gen_range(0.1..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
                    ));
                    let t = theta_minus(&e, s)?;
                    (e, t)
                };
                let g = green_eval(r, sv, &e, s)?.value;
                let rec = theta.reconstruct(r, sv, &e, s)?;
                worst = worst.max((g - rec).norm() / g.norm().max(1e-300));
            }
            Ok(worst)
        }));
    }

    // Wronskians: closed forms against the numeric stencil, constancy in r
    rep.push(residual_case(
        "wronskian-closed-vs-numeric",
        "pairs at E=4, E=9, E=-1",
        1e-10,
        || {
            let mut worst = 0.0_f64;
            for (pair, e, u_kind, v_kind) in [
                (
                    WronskianPair::ChiFPlus,
                    Complex64::new(4.0, 0.0),
                    EigenfunctionKind::Chi,
                    EigenfunctionKind::FPlus,
                ),
                (
                    WronskianPair::ChiFMinus,
                    Complex64::new(9.0, 0.0),
                    EigenfunctionKind::Chi,
                    EigenfunctionKind::FMinus,
                ),
                (
                    WronskianPair::ChiTildeFTilde,
                    Complex64::new(-1.0, 0.0),
                    EigenfunctionKind::ChiTilde,
                    EigenfunctionKind::FTilde,
                ),
            ] {
                let ce = ComplexEnergy::new(e);
                let closed = wronskian_closed(pair, &ce, s)?;
                for &r in &[0.5, 1.3, 2.0, 7.0] {
                    let w = wronskian_numeric(
                        |x| eigenfunction(u_kind, x, &ce, s).unwrap(),
                        |x| eigenfunction(v_kind, x, &ce, s).unwrap(),
                        r,
                    );
                    worst = worst.max((w - closed).norm());
                }
            }
            Ok(worst)
        },
    ));

    // ODE cross-validation of the regular solution
    for &e in &[0.25, 1.0, 4.0, 9.0] {
        rep.push(residual_case(
            &format!("ode-regular-solution-E{e}"),
            &format!("E={e}, grid [0,20]"),
            1e-8,
            || {
                let sol = solve_chi_numeric(e, 20.0, s)?;
                let k = (s.c() * e).sqrt();
                Ok(sol
                    .nodes()
                    .iter()
                    .zip(sol.samples())
                    .map(|(&r, &u)| (u - (k * r).sin()).abs())
                    .fold(0.0_f64, f64::max))
            },
        ));
    }

    // resolvent defining property at three energies
    let f = unit_member();
    let energies = [
        Complex64::new(0.0, 2.0),
        Complex64::new(-1.0, 1.0),
        Complex64::new(3.0, 2.0),
    ];
    for e in energies {
        let ce = ComplexEnergy::new(e);
        rep.push(residual_case(
            &format!("resolvent-residual-E{}+{}i", e.re, e.im),
            "f = r e^{-r^2/2}, 20-point grid",
            1e-6,
            || {
                let mut worst = 0.0_f64;
                for i in 0..20 {
                    let r = 0.5 + 9.5 * i as f64 / 19.0;
                    let g_at = |x: f64| {
                        crate::green::resolvent_apply_at(&f, &ce, x, quad, s)
                            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
                    };
                    let h0g = -central_deriv2(&g_at, r, Some(0.005)) / s.c();
                    let resid = (ce.value() * g_at(r) - h0g - f.eval(r)).norm();
                    worst = worst.max(resid);
                }
                Ok(worst)
            },
        ));
    }

    // diagonal action of the resolvent in the energy representation
    let ce = ComplexEnergy::new(Complex64::new(0.0, 2.0));
    rep.push(residual_case(
        "resolvent-diagonal-action",
        "E=2i, 20 energy nodes",
        1e-6,
        || {
            let n = 2000;
            let r_nodes: Vec<f64> = (0..n).map(|i| 50.0 * i as f64 / (n - 1) as f64).collect();
            let g = resolvent_apply(&f, &ce, &r_nodes, quad, s)?;
            let mut worst = 0.0_f64;
            for i in 0..20 {
                let k = 0.4 + 2.1 * i as f64 / 19.0;
                let ep = k * k / s.c();
                let u0g = integrate_interval(
                    |r| g.eval(r) * sigma_eval(r, ep, s).unwrap_or(f64::NAN),
                    0.0,
                    50.0,
                    quad,
                )?
                .value;
                let expect = transform_at(&f, ep, quad, s)? / (ce.value() - ep);
                worst = worst.max((u0g - expect).norm() / expect.norm());
            }
            Ok(worst)
        },
    ));

    rep.push(residual_case("resolvent-linearity-zero", "f = 0", 1e-15, || {
        let w = resolvent_apply(&TestFunction::zero(), &ce, &[0.5, 1.0, 2.0], quad, s)?;
        Ok(w.values().iter().map(|v| v.norm()).fold(0.0, f64::max))
    }));

    rep
}

fn spectrum_suite(cfg: &VerifyConfig) -> SpectralReport {
    let mut rep = SpectralReport::new("spectrum");
    let s = &cfg.scale;
    let limit = &cfg.limit;
    let quad = &cfg.quad;

    for &e in &[0.5, 1.0, 2.0, 4.0, 8.0] {
        rep.push(residual_case(
            &format!("density-from-jump-E{e}"),
            &format!("E={e}"),
            1e-8,
            || {
                let j = spectral_jump(e, limit, s)?;
                let rho = rho_density(e, s)?;
                Ok((j.re - rho).abs() / rho + j.im.abs())
            },
        ));
    }
    for &e in &[-0.5, -2.0, -8.0] {
        rep.push(residual_case(
            &format!("jump-vanishes-E{e}"),
            &format!("E={e}"),
            1e-10,
            || Ok(spectral_jump(e, limit, s)?.norm()),
        ));
    }

    rep.push(value_case(
        "measure-inner-interval",
        "(1, 4)",
        FRAC_2_PI,
        1e-6,
        || stieltjes_measure(1.0, 4.0, limit, quad, s),
    ));
    rep.push(value_case(
        "measure-resolvent-interval",
        "(-2, -1)",
        0.0,
        1e-10,
        || stieltjes_measure(-2.0, -1.0, limit, quad, s),
    ));
    rep.push(value_case(
        "measure-across-origin",
        "(-1, 1)",
        FRAC_2_PI,
        1e-5,
        || stieltjes_measure(-1.0, 1.0, limit, quad, s),
    ));
    rep.push(residual_case("measure-additivity", "(0.5,2)+(2,5) vs (0.5,5)", 2e-6, || {
        let a = stieltjes_measure(0.5, 2.0, limit, quad, s)?;
        let b = stieltjes_measure(2.0, 5.0, limit, quad, s)?;
        let c = stieltjes_measure(0.5, 5.0, limit, quad, s)?;
        Ok((a + b - c).abs())
    }));

    rep.push(residual_case(
        "density-inverse-sqrt-law",
        "log grid 1e-3..1e3",
        1e-13,
        || {
            let expect = s.c().sqrt() / std::f64::consts::PI;
            let mut worst = 0.0_f64;
            let mut e = 1e-3;
            while e <= 1e3 {
                let rho = rho_density(e, s)?;
                if rho <= 0.0 {
                    return Ok(f64::INFINITY);
                }
                worst = worst.max((rho * e.sqrt() - expect).abs() / expect);
                e *= 10.0;
            }
            Ok(worst)
        },
    ));
    rep.push(residual_case("density-scaling-in-c", "c vs 2c at E=2.7", 1e-14, || {
        let r1 = rho_density(2.7, &PhysicalScale::from_c(s.c()))?;
        let r2 = rho_density(2.7, &PhysicalScale::from_c(2.0 * s.c()))?;
        Ok((r2 / r1 - 2.0_f64.sqrt()).abs())
    }));

    let verdict_cases = [
        ("classify-spectrum-point", 2.0, SpectrumVerdict::ContinuousSpectrum),
        ("classify-resolvent-point", -3.0, SpectrumVerdict::ResolventSet),
        ("classify-boundary-point", 0.0, SpectrumVerdict::SpectrumBoundary),
    ];
    for (id, e, expected) in verdict_cases {
        rep.push(value_case(id, &format!("E={e}"), 1.0, 0.0, || {
            let cls = classify_point(e, limit, s)?;
            Ok(if cls.verdict == expected { 1.0 } else { 0.0 })
        }));
    }

    rep.push(residual_case(
        "jump-positive-and-real",
        "E in {0.3, 1, 3, 9}",
        1e-10,
        || {
            let mut worst = 0.0_f64;
            for &e in &[0.3, 1.0, 3.0, 9.0] {
                let j = spectral_jump(e, limit, s)?;
                worst = worst.max(j.im.abs());
                worst = worst.max((-j.re).max(0.0));
            }
            Ok(worst)
        },
    ));

    rep.push(residual_case(
        "off-diagonal-measures-vanish",
        "entries (1,2),(2,1),(2,2) at E in {1,4}",
        1e-10,
        || {
            let mut worst = 0.0_f64;
            for &e in &[1.0, 4.0] {
                for (i, j) in [(0usize, 1usize), (1, 0), (1, 1)] {
                    let lim = limit_extrapolate(
                        |eps| {
                            let above = ComplexEnergy::new(Complex64::new(e, eps));
                            let below = ComplexEnergy::new(Complex64::new(e, -eps));
                            match (theta_plus(&above, s), theta_plus(&below, s)) {
                                (Ok(ta), Ok(tb)) => {
                                    (tb.entries[i][j] - ta.entries[i][j])
                                        / (Complex64::i() * 2.0 * std::f64::consts::PI)
                                }
                                _ => Complex64::new(f64::NAN, 0.0),
                            }
                        },
                        limit,
                    )?;
                    worst = worst.max(lim.value.norm());
                }
            }
            Ok(worst)
        },
    ));

    rep
}

fn transform_suite(cfg: &VerifyConfig) -> SpectralReport {
    let mut rep = SpectralReport::new("transform");
    let s = &cfg.scale;
    let quad = &cfg.quad;
    let phi = unit_member();

    rep.push(value_case(
        "sigma-at-quarter-period",
        "r=pi/2, E=1",
        0.56418958354775629,
        1e-13,
        || sigma_eval(std::f64::consts::FRAC_PI_2, 1.0, s),
    ));
    rep.push(value_case(
        "forward-image-E1",
        "phi = r e^{-r^2/2}, E=1",
        FHAT_1,
        1e-8,
        || Ok(transform_at(&phi, 1.0, quad, s)?.re),
    ));
    rep.push(value_case(
        "forward-image-E4",
        "phi = r e^{-r^2/2}, E=4",
        FHAT_4,
        1e-8,
        || Ok(transform_at(&phi, 4.0, quad, s)?.re),
    ));
    rep.push(value_case(
        "forward-image-rho-E1",
        "phi = r e^{-r^2/2}, E=1",
        FTILDE_1,
        1e-8,
        || Ok(transform_rho_at(&phi, 1.0, quad, s)?.re),
    ));
    rep.push(residual_case(
        "normalization-relation",
        "fhat = sqrt(rho) ftilde on grid",
        1e-10,
        || {
            let grid = EnergyGrid::linear_in_k(0.2, 4.0, 24, s)?;
            let fhat = forward_transform(&phi, &grid, quad, s)?;
            let ftilde = forward_transform_rho(&phi, &grid, quad, s)?;
            let (nodes, hat_vals) = fhat.samples().unwrap();
            let (_, tilde_vals) = ftilde.samples().unwrap();
            let mut worst = 0.0_f64;
            for ((&e, &h), &t) in nodes.iter().zip(hat_vals).zip(tilde_vals) {
                let expect = t * rho_density(e, s)?.sqrt();
                worst = worst.max((h - expect).norm());
            }
            Ok(worst)
        },
    ));
    rep.push(value_case(
        "inverse-of-closed-image",
        "fhat = sqrt(k/2) e^{-k^2/2}, r=1",
        EXP_HALF,
        1e-8,
        || {
            let fhat = EnergyFunction::closed(|e: f64| {
                let k = e.sqrt();
                Complex64::new((k / 2.0).sqrt() * (-0.5 * k * k).exp(), 0.0)
            });
            Ok(inverse_transform_at(&fhat, 1.0, quad, s)?.re)
        },
    ));

    // unitarity: round trips and the Parseval identity on seeded members
    let members = seeded_members(cfg.seed, 10);
    rep.push(residual_case(
        "round-trip-l2",
        "10 seeded members, k-grid with at least 512 nodes",
        1e-6,
        || {
            // both the members and their reconstructions are negligible
            // beyond this window; the discarded tail is far below tolerance
            let r_end = 40.0;
            // sweep members go down to width 0.4, with sharper energy-side
            // structure than the default grid was sized for
            let grid = EnergyGrid::linear_in_k(
                cfg.grid_k_min,
                cfg.grid_k_max,
                cfg.grid_n.max(512),
                s,
            )?;
            let mut worst = 0.0_f64;
            for m in &members {
                let image = forward_transform(m, &grid, quad, s)?;
                let diff_sq = integrate_interval(
                    |r| {
                        let back = inverse_transform_at(&image, r, quad, s)
                            .unwrap_or(Complex64::new(f64::NAN, f64::NAN));
                        Complex64::new((back - m.eval(r)).norm_sqr(), 0.0)
                    },
                    0.0,
                    r_end,
                    quad,
                )?
                .value
                .re;
                let norm = norm_nm(m, 0, 0, quad, s)?;
                worst = worst.max(diff_sq.max(0.0).sqrt() / norm);
            }
            Ok(worst)
        },
    ));
    rep.push(residual_case(
        "parseval-identity",
        "10 seeded members",
        1e-6,
        || {
            let mut worst = 0.0_f64;
            for m in &members {
                let (image, _) = materialize_image(m, 1024, quad, s)?;
                let energy = energy_norm_sq(&image, quad, s)?;
                let position = norm_nm(m, 0, 0, quad, s)?.powi(2);
                worst = worst.max((energy - position).abs() / position);
            }
            Ok(worst)
        },
    ));

    rep.push(residual_case(
        "diagonalization-intertwining",
        "image of h0 phi vs E * image of phi",
        1e-6,
        || {
            let m = TestFunction::new(&[(1.0, 1, 1.0), (0.5, 3, 0.8)]).unwrap();
            let hm = h0_apply(&m, 1, s);
            let mut worst = 0.0_f64;
            for i in 0..24 {
                let k = 0.2 + 3.8 * i as f64 / 23.0;
                let e = k * k / s.c();
                let lhs = transform_at(&hm, e, quad, s)?;
                let rhs = transform_at(&m, e, quad, s)? * e;
                worst = worst.max((lhs - rhs).norm() / (1.0 + rhs.norm()));
            }
            Ok(worst)
        },
    ));

    // delta normalization probed with narrowing energy bumps: the position
    // norm of the inverse image must match the flat-measure energy norm.
    // The bump support and the position spread are handed to the integrator
    // explicitly; a needle this sharp hides from a blind adaptive scan.
    for &eps in &[0.2, 0.1, 0.05] {
        rep.push(residual_case(
            &format!("delta-normalization-bump-{eps}"),
            &format!("Gaussian bump at E0=1, width {eps}"),
            1e-5,
            || {
                let c = s.c();
                let bump = move |e: f64| (-(e - 1.0) * (e - 1.0) / (2.0 * eps * eps)).exp();
                let energy_sq = integrate_interval(
                    |e| Complex64::new(bump(e) * bump(e), 0.0),
                    (1.0 - 12.0 * eps).max(1e-9),
                    1.0 + 12.0 * eps,
                    quad,
                )?
                .value
                .re;

                let k0 = c.sqrt();
                let (k_lo, k_hi) = ((k0 - 6.0 * eps).max(1e-9), k0 + 6.0 * eps);
                let coeff = 2.0 / (c * std::f64::consts::PI).sqrt();
                let wave_at = |r: f64| -> Result<Complex64> {
                    Ok(integrate_interval(
                        |k| {
                            Complex64::new(
                                bump(k * k / c) * k.sqrt() * (k * r).sin() * coeff,
                                0.0,
                            )
                        },
                        k_lo,
                        k_hi,
                        quad,
                    )?
                    .value)
                };
                let r_end = 24.0 / eps + 60.0;
                let wide = QuadratureSpec {
                    max_subdivisions: 6000,
                    ..*quad
                };
                let position_sq = integrate_interval(
                    |r| {
                        let v = wave_at(r).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
                        Complex64::new(v.norm_sqr(), 0.0)
                    },
                    0.0,
                    r_end,
                    &wide,
                )?
                .value
                .re;
                Ok((position_sq - energy_sq).abs() / energy_sq)
            },
        ));
    }

    // functional calculus
    let indicator = |e: f64| Complex64::new(if (1.0..=4.0).contains(&e) { 1.0 } else { 0.0 }, 0.0);
    rep.push(value_case(
        "band-projection-norm",
        "indicator [1,4] on r e^{-r^2/2}",
        BAND_NORM_SQ,
        1e-5,
        || {
            let image = borel_image(indicator, &phi, quad, s)?;
            let wide = QuadratureSpec {
                max_subdivisions: 2000,
                ..*quad
            };
            energy_norm_sq(&image, &wide, s)
        },
    ));
    rep.push(residual_case(
        "band-projection-idempotent",
        "indicator applied once vs twice",
        2e-6,
        || {
            let image1 = Arc::new(borel_image(indicator, &phi, quad, s)?);
            let image2 = image1.multiplied(indicator);
            let mut worst = 0.0_f64;
            for i in 0..12 {
                let r = 0.5 + i as f64;
                let once = inverse_transform_at(&image1, r, quad, s)?;
                let twice = inverse_transform_at(&image2, r, quad, s)?;
                worst = worst.max((once - twice).norm());
            }
            Ok(worst)
        },
    ));
    rep.push(residual_case(
        "calculus-identity-symbol",
        "G = 1 returns the function",
        1e-6,
        || {
            let image = borel_image(|_| Complex64::new(1.0, 0.0), &phi, quad, s)?;
            let mut worst = 0.0_f64;
            for &r in &[0.5, 1.0, 2.0, 3.0] {
                let v = inverse_transform_at(&image, r, quad, s)?;
                worst = worst.max((v - phi.eval(r)).norm());
            }
            Ok(worst)
        },
    ));
    rep.push(value_case(
        "calculus-energy-symbol",
        "G(E) = E at r=1",
        2.0 * EXP_HALF,
        1e-6,
        || {
            let image = borel_image(|e| Complex64::new(e, 0.0), &phi, quad, s)?;
            Ok(inverse_transform_at(&image, 1.0, quad, s)?.re)
        },
    ));

    // propagation: identity at t=0, then norm and energy conservation
    let n_r = 480;
    let r_grid: Vec<f64> = (0..n_r).map(|i| 24.0 * i as f64 / (n_r - 1) as f64).collect();
    rep.push(residual_case("propagation-t0-identity", "t=0 on grid", 1e-6, || {
        let p = propagate(&phi, 0.0, &r_grid, quad, s)?;
        let mut worst = 0.0_f64;
        for (&r, v) in r_grid.iter().zip(p.wave.values()) {
            worst = worst.max((v - phi.eval(r)).norm());
        }
        Ok(worst)
    }));

    let norm0 = L2_SQ.sqrt();
    let energy0 = NUCLEAR_N1;
    for &t in &[0.5, 1.0, 2.0] {
        rep.push(residual_case(
            &format!("propagation-norm-t{t}"),
            &format!("t={t}"),
            1e-5,
            || {
                let p = propagate(&phi, t, &r_grid, quad, s)?;
                let nt = p.wave.l2_norm(quad)?;
                Ok((nt - norm0).abs() / norm0)
            },
        ));
        rep.push(residual_case(
            &format!("propagation-energy-t{t}"),
            &format!("t={t}"),
            1e-5,
            || {
                let p = propagate(&phi, t, &r_grid, quad, s)?;
                let kinetic = p.wave_deriv.l2_norm(quad)?.powi(2) / s.c();
                Ok((kinetic - energy0).abs() / energy0)
            },
        ));
    }

    rep
}

fn norms_suite(cfg: &VerifyConfig) -> SpectralReport {
    let mut rep = SpectralReport::new("norms");
    let s = &cfg.scale;
    let quad = &cfg.quad;
    let phi = unit_member();

    rep.push(value_case(
        "l2-norm-closed-form",
        "phi = r e^{-r^2/2}, (n,m)=(0,0)",
        NORM_00,
        1e-8,
        || norm_nm(&phi, 0, 0, quad, s),
    ));
    rep.push(value_case(
        "weighted-norm-closed-form",
        "phi = r e^{-r^2/2}, (n,m)=(1,0)",
        NORM_10,
        1e-8,
        || norm_nm(&phi, 1, 0, quad, s),
    ));

    // axioms on 50 seeded pairs at every (n,m) up to the order cap
    let members = seeded_members(cfg.seed.wrapping_add(100), 20);
    let pairs: Vec<(usize, usize)> = {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(101));
        (0..50)
            .map(|_| {
                let i = rng.gen_range(0..members.len());
                let mut j = rng.gen_range(0..members.len());
                if j == i {
                    j = (j + 1) % members.len();
                }
                (i, j)
            })
            .collect()
    };
    for n in 0..=N_MAX {
        for m in 0..=N_MAX {
            rep.push(residual_case(
                &format!("axioms-n{n}m{m}"),
                &format!("50 seeded pairs, (n,m)=({n},{m})"),
                1e-9,
                || {
                    let norms: Vec<f64> = members
                        .iter()
                        .map(|f| norm_nm(f, n, m, quad, s))
                        .collect::<Result<Vec<_>>>()?;
                    let mut worst = 0.0_f64;
                    for &(i, j) in &pairs {
                        let sum = norm_nm(&members[i].add(&members[j]), n, m, quad, s)?;
                        let slack = sum - (norms[i] + norms[j]);
                        worst = worst.max(slack.max(0.0) / (1.0 + norms[i] + norms[j]));
                    }
                    for (idx, f) in members.iter().enumerate() {
                        let doubled = norm_nm(&f.scaled(Complex64::new(2.0, 0.0)), n, m, quad, s)?;
                        worst = worst
                            .max((doubled - 2.0 * norms[idx]).abs() / (1.0 + norms[idx]));
                        if norms[idx] <= 0.0 && !f.is_zero() {
                            return Ok(f64::INFINITY);
                        }
                    }
                    Ok(worst)
                },
            ));
        }
    }

    rep.push(residual_case(
        "norm-monotone-in-weight",
        "seeded members, n vs n+1",
        1e-12,
        || {
            let mut worst = 0.0_f64;
            for f in members.iter().take(6) {
                for n in 0..N_MAX {
                    for m in 0..=N_MAX {
                        let lo = norm_nm(f, n, m, quad, s)?;
                        let hi = norm_nm(f, n + 1, m, quad, s)?;
                        worst = worst.max((lo - hi).max(0.0) / (1.0 + hi));
                    }
                }
            }
            Ok(worst)
        },
    ));

    rep.push(residual_case(
        "l2-norm-matches-energy-side",
        "phi = r e^{-r^2/2}",
        1e-6,
        || {
            let (image, _) = materialize_image(&phi, 1024, quad, s)?;
            let energy = energy_norm_sq(&image, quad, s)?;
            let position = norm_nm(&phi, 0, 0, quad, s)?.powi(2);
            Ok((energy - position).abs() / position)
        },
    ));

    rep.push(value_case(
        "membership-family-verdicts",
        "6 seeded members",
        1.0,
        0.0,
        || {
            let ok = members
                .iter()
                .take(6)
                .all(|f| phi0_membership(f.poly(), N_MAX, quad, s).verdict);
            Ok(if ok { 1.0 } else { 0.0 })
        },
    ));
    rep.push(value_case(
        "membership-even-power-rejected",
        "candidate r^2 e^{-r^2/2}",
        1.0,
        0.0,
        || {
            let candidate = GaussPoly::new(vec![GaussTerm {
                coeff: Complex64::new(1.0, 0.0),
                power: 2,
                width: 1.0,
            }])?;
            let rep = phi0_membership(&candidate, N_MAX, quad, s);
            Ok(if rep.verdict { 0.0 } else { 1.0 })
        },
    ));

    rep
}

fn rhs_suite(cfg: &VerifyConfig) -> SpectralReport {
    let mut rep = SpectralReport::new("rhs");
    let s = &cfg.scale;
    let quad = &cfg.quad;
    let phi = unit_member();
    let members = seeded_members(cfg.seed.wrapping_add(200), 20);

    rep.push(value_case(
        "ket-action-value",
        "phi = r e^{-r^2/2}, E=1",
        FHAT_1,
        1e-8,
        || Ok(ket_action(&phi, 1.0, quad, s)?.value.re),
    ));
    rep.push(residual_case("ket-antilinearity", "i phi vs -i ket", 1e-12, || {
        let base = ket_action(&phi, 1.0, quad, s)?.value;
        let scaled = ket_action(&phi.scaled(Complex64::i()), 1.0, quad, s)?.value;
        Ok((scaled + Complex64::i() * base).norm())
    }));

    // generalized eigenvalue defect across the sweep, against the stated
    // energy-dependent bound
    rep.push(residual_case(
        "eigen-residual-sweep",
        "20 members, E in {0.5,1,2,5}, n in {1,2}",
        1.0,
        || {
            let mut worst = 0.0_f64;
            for f in &members {
                let norm10 = norm_nm(f, 1, 0, quad, s)?;
                for &e in &[0.5, 1.0, 2.0, 5.0] {
                    for n in [1u32, 2] {
                        let resid = eigen_residual(f, e, n, quad, s)?;
                        let bound = 1e-7 * (1.0 + e.powi(n as i32)) * norm10;
                        worst = worst.max(resid / bound);
                    }
                }
            }
            Ok(worst)
        },
    ));

    rep.push(residual_case(
        "ket-continuity-bound",
        "20 members, E in {0.5,1,2,5}",
        0.0,
        || {
            let mut worst = 0.0_f64;
            for f in &members {
                let norm10 = norm_nm(f, 1, 0, quad, s)?;
                for &e in &[0.5, 1.0, 2.0, 5.0] {
                    let lhs = ket_action(f, e, quad, s)?.value.norm();
                    let rhs = rho_density(e, s)?.sqrt() * norm10;
                    worst = worst.max((lhs - rhs).max(0.0) / (1.0 + rhs));
                }
            }
            Ok(worst)
        },
    ));

    rep.push(residual_case(
        "sup-bound-cross-check",
        "scan of |sigma| vs sqrt(rho), E in {0.5,1,2}",
        1e-12,
        || {
            let mut worst = 0.0_f64;
            for &e in &[0.5, 1.0, 2.0] {
                let scan = sigma_sup_scan(e, s)?;
                let closed = rho_density(e, s)?.sqrt();
                worst = worst.max((scan - closed).max(0.0) / closed);
            }
            Ok(worst)
        },
    ));

    rep.push(residual_case(
        "h0-continuity-sweep",
        "20 members, (n,m) in {0,1}^2",
        0.0,
        || {
            let mut worst = 0.0_f64;
            for f in &members {
                for n in [0u32, 1] {
                    for m in [0u32, 1] {
                        let lhs = norm_nm(&h0_apply(f, 1, s), n, m, quad, s)?;
                        let rhs = norm_nm(f, n, m + 1, quad, s)? + norm_nm(f, n, m, quad, s)?;
                        worst = worst.max((lhs - rhs).max(0.0) / (1.0 + rhs));
                    }
                }
            }
            Ok(worst)
        },
    ));

    // nuclear identities: pinned self-cases and an orthogonal pair
    for (n, expected) in [(0u32, L2_SQ), (1, NUCLEAR_N1), (2, NUCLEAR_N2)] {
        rep.push(value_case(
            &format!("nuclear-matrix-element-n{n}"),
            &format!("self case, n={n}"),
            expected,
            1e-6 * expected.max(1.0),
            || {
                let powered = h0_apply(&phi, n, s);
                Ok(integrate_semi_infinite(
                    |r| phi.eval(r).conj() * powered.eval(r),
                    quad,
                )?
                .value
                .re)
            },
        ));
        rep.push(value_case(
            &format!("nuclear-energy-side-n{n}"),
            &format!("self case via the energy representation, n={n}"),
            expected,
            1e-6 * expected.max(1.0),
            || {
                let (image, _) = materialize_image(&phi, 1024, quad, s)?;
                let c = s.c();
                Ok(integrate_semi_infinite(
                    |k| {
                        let e = k * k / c;
                        let v = image.eval(e);
                        v.conj() * v * e.powi(n as i32) * (2.0 * k / c)
                    },
                    quad,
                )?
                .value
                .re)
            },
        ));
    }
    rep.push(residual_case(
        "nuclear-orthogonal-pair",
        "phi = r e^{-r^2/2}, psi = (r^3 - 1.5 r) e^{-r^2/2}",
        1e-6,
        || {
            let psi = TestFunction::new(&[(1.0, 3, 1.0), (-1.5, 1, 1.0)]).unwrap();
            let r = nuclear_spectral_check(&phi, &psi, 0, quad, s)?;
            Ok(if r.all_passed() { 0.0 } else { 1.0 })
        },
    ));
    rep.push(residual_case(
        "dirac-reconstruction",
        "psi from its energy image at 10 radii",
        1e-6,
        || {
            let psi = TestFunction::new(&[(0.8, 1, 0.9), (0.3, 3, 1.3)]).unwrap();
            let (image, _) = materialize_image(&psi, 1024, quad, s)?;
            let max_psi = (0..=100)
                .map(|i| psi.eval(i as f64 * 0.1).norm())
                .fold(0.0_f64, f64::max);
            let mut worst = 0.0_f64;
            for i in 0..10 {
                let r = 0.5 + i as f64;
                let back = inverse_transform_at(&image, r, quad, s)?;
                worst = worst.max((back - psi.eval(r)).norm() / max_psi);
            }
            Ok(worst)
        },
    ));

    for &e in &[1.0, 4.0] {
        rep.push(residual_case(
            &format!("energy-delta-E{e}"),
            &format!("E={e}"),
            1e-8,
            || {
                let r = energy_delta_check(&phi, e, quad, s)?;
                Ok(r.cases.iter().map(|c| c.abs_error).fold(0.0, f64::max))
            },
        ));
    }

    rep
}
