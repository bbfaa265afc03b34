//! Numerical reductions of the star-product self-dual Yang-Mills master
//! equation.
//!
//! The crate is organised along the chain of reductions it verifies:
//!
//! * [`fourier`]: exact Moyal star product and brackets on finite Fourier
//!   series over the 2-torus.
//! * [`sine_basis`]: the clock/shift construction of the trigonometric basis
//!   `L_m` of `sl(N, C)` and the anti-hermitian `su(N)` combinations.
//! * [`projection`]: the Lie-algebra homomorphism `χ_N` folding torus modes
//!   onto `sl(N, C)` at `ħ = 2π/N`.
//! * [`me_solver`]: master-equation residuals, the closed-form deformed
//!   Husain-Park solution and the Cauchy-Kowalewska series recursion.
//! * [`heavenly`]: the heavenly metric of the classical limit, its null
//!   tetrad, Cartan structure equations and Weyl curvature.
//! * [`chiral`]: the `su(N)` chiral-field sequence and its `N → ∞` limit.
//!
//! [`grid`] and [`fd`] hold the spacetime grids and finite-difference
//! machinery shared by the residual verifiers; [`special`] holds Bessel
//! functions and quadrature.

pub mod chiral;
pub mod error;
pub mod fd;
pub mod fourier;
pub mod grid;
pub mod heavenly;
pub mod matrix;
pub mod me_solver;
pub mod projection;
pub mod sine_basis;
pub mod special;

pub use error::{Error, Result};
pub use fourier::{
    eval_on_torus, fft_project, moyal_bracket, poisson_bracket, star_product, Bracket, FourierField, Hbar, ModeVector,
};
pub use grid::{GriddedFourierField, SpacetimeGrid, UniformAxis};
pub use matrix::CMatrix;
pub use num_complex::Complex64;
pub use projection::{chi_project, chi_project_gridded, AlgebraField, FoldedMatrixField};
pub use sine_basis::{basis_matrix, clock_matrix, shift_matrix, SineBasis};
