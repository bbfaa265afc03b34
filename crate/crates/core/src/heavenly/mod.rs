//! The heavenly metric of a classical Husain-Park solution and the
//! curvature of the example: null tetrad, Cartan structure equations,
//! connection forms, the Weyl component `C⁽¹⁾` and the pp-wave form.
//!
//! Everything lives in the single chart `(w, z, p, q)`.

mod connection;
mod curvature;
mod forms;
mod metric;
mod pp_wave;
mod tetrad;

pub use connection::{
    cartan_first, dotted_connection_check, example_connection, frame_derivatives, structure_residual,
    structure_residual_of, CartanFirst, ConnectionForms,
};
pub use curvature::{
    curvature_fd, curvature_from_connection, dotted_coefficients, example_curvature, undotted_coefficients, weyl_c1,
    Curvature, CurvatureReport,
};
pub use forms::{exterior_derivative, symmetric_product, OneForm, Point4, TwoForm, COORDINATES};
pub use metric::{example_metric, hp_metric, ExampleTheta, HpDerivatives, HpPotential, MetricField, DEGENERACY_TOL};
pub use pp_wave::{pp_wave_check, pp_wave_metric, pp_wave_pullback, BRANCH_MARGIN};
pub use tetrad::{
    example_tetrad, frame_metric, ConstantFrame, ExampleTetrad, FrameField, TetradFrame, SINGULAR_MARGIN,
};
