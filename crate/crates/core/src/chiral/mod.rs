//! The `su(N)` chiral-field sequence obtained by folding the example solution
//! at `ħ = 2π/N`, and its `N → ∞` limit.

mod coefficients;
mod expansion;
mod field;
mod study;

pub use coefficients::{
    frequency, integral_bound, BesselCoefficient, ChiralCoefficients, CoefficientKind, DEFAULT_Z_RANGE, TRUNCATION_TOL,
};
pub use expansion::{expansion_tail_bound, fourier_expansion_theta};
pub use field::{
    chiral_field, chiral_system_check, pauli, pauli_closed_form, residual_chiral, ChiralEvaluator, ChiralField,
};
pub use study::{
    bessel_identity_check, convergence_study, fitted_decay_exponent, BesselIdentityReport, ConvergenceRow,
    ConvergenceTable, IdentityVariant, CLASSICAL_HBAR,
};
