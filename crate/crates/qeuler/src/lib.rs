//! Exact and arbitrary-precision evaluation of higher-order twisted
//! q-Euler polynomials, alternating twisted power sums, the associated
//! multiple l-series, and machine checks of the symmetry identities
//! relating them.

// Identity checks take the full mathematical parameter tuple
// (n, x, weights, character, family, context); bundling them into
// structs would only rename the problem.
#![allow(clippy::too_many_arguments)]

pub mod bigfloat;
pub mod character;
pub mod complex;
pub mod error;
pub mod euler;
pub mod identity;
pub mod lseries;
pub mod scalar;

pub use bigfloat::BigFloat;
pub use character::{CharValue, DirichletCharacter};
pub use complex::BigComplex;
pub use error::{Error, Result};
pub use euler::{
    addition_expand, classical_euler_poly, euler_poly, euler_poly_series_oracle,
    power_sum_factored, power_sum_naive, EulerEvaluator, EulerParams, SeriesTruncation,
    TruncatedValue,
};
pub use identity::{
    check_addition, check_distribution_symmetry, check_power_sum_symmetry, check_reflection,
    check_umbral, run_grid, GridSpec, IdentityId, IdentityReport, Mutation,
};
pub use lseries::{
    check_series_symmetry, choose_truncation, complex_from_rationals, l_multiple, render_s, LQuery,
};
pub use scalar::{default_tolerance, Mode, QContext, Scalar, DEFAULT_PRECISION};
