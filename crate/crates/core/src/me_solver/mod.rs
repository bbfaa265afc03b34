//! The master equation, its Moyal Husain-Park reduction, the closed-form
//! deformed solution and the Cauchy-Kowalewska series.

mod example;
mod kahler;
mod kowalewska;
mod residual;

pub use example::{deformation_frequency, example_solution, sample_on_grid, ClosedFormSolution, TorusSampling};
pub use kahler::{GFactorFn, KahlerBackground, KahlerPoint, MetricFn, PotentialFn};
pub use kowalewska::{example_cauchy_data, kowalewska_series, SeriesSolution, WPolynomial};
pub use residual::{residual_hp_classical, residual_me_flat, residual_me_kahler, residual_moyal_hp};
