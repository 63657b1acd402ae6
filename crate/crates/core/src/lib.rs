//! Numerical spectral analysis of the free Hamiltonian on the half line with
//! a Dirichlet condition at the origin: resolvent kernels, the spectral
//! measure and its recovery by boundary limits, the diagonalizing
//! eigenfunction transform and its inverse, a bounded functional calculus,
//! and the test-space layer (weighted norms, kets, nuclear identities) that
//! makes the generalized eigenvectors rigorous.

pub mod eigen;
pub mod energy;
pub mod error;
pub mod green;
pub mod interp;
pub mod quadrature;
pub mod report;
pub mod rhs;
pub mod scale;
pub mod spectral;
pub mod testfn;
pub mod transform;
pub mod verify;
pub mod wave;

pub use eigen::{
    eigenfunction, solve_chi_numeric, wronskian_closed, wronskian_numeric, ChiSolution,
    EigenfunctionKind, WronskianPair,
};
pub use energy::{branch_sqrt, ComplexEnergy, Region};
pub use error::{Error, Result};
pub use green::{
    green_eval, resolvent_apply, resolvent_apply_at, theta_minus, theta_plus, GreenEvaluation,
    ThetaMatrix,
};
pub use quadrature::{
    integrate_interval, integrate_semi_infinite, integrate_semi_infinite_real, limit_extrapolate,
    LimitSpec, LimitValue, Quadrature, QuadratureSpec,
};
pub use report::{CaseResult, CaseStatus, SpectralReport};
pub use rhs::{
    check_norm_axioms, continuity_bound_check, eigen_residual, energy_delta_check,
    h0_continuity_check, ket_action, norm_nm, nuclear_spectral_check, phi0_membership, KetAction,
    MembershipReport, NormTable,
};
pub use scale::PhysicalScale;
pub use spectral::{
    classify_point, rho_density, spectral_jump, stieltjes_measure, SpectralDensity,
    SpectrumClassification, SpectrumVerdict,
};
pub use testfn::{h0_apply, testfn_eval, GaussPoly, GaussTerm, TestFunction};
pub use transform::{
    apply_borel_function, energy_norm_sq, energy_weighted_inner, forward_transform,
    forward_transform_rho, inverse_transform, inverse_transform_at, propagate, sigma_eval,
    transform_at, transform_rho_at, EnergyFunction, EnergyGrid, GridMapping, PropagationResult,
};
pub use verify::{seeded_members, verify_all, verify_suite, SuiteName, VerifyConfig};
pub use wave::SampledWave;
