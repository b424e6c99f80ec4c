//! Forms, polyvectors and BV integrals.
mod crosscheck;
mod expr;
mod fixture;
mod forms;
mod integral;
mod poly;
mod quadrature;
pub mod shapes;
mod surface;

pub use crosscheck::{cross_check_coordinate_vs_geometric, CrossCheckConfig};
pub use expr::{format_rational, CompiledExpr, ScalarExpr};
pub use fixture::Fixture;
pub use forms::{
    contract, delta_geometric, exterior_derivative, scalar_to_superfunction, uncontract_volume,
    volume_form, DifferentialForm, PolyvectorField,
};
pub use integral::{
    bv_integral, converges, homology_invariance_check, level_set_sweep, stokes_convergence,
    stokes_residual, Estimate, HomologyReport, StokesReport, SweepReport,
};
pub use poly::{CompiledPoly, Poly, PolyMonomial, Var};
pub use quadrature::{gauss_legendre, integrate_box, QuadratureSpec};
pub use surface::{Boundary, Chart, Surface};
