//! Numeric evaluation on concrete finite-dimensional Lie algebras: adjoint
//! matrices, the Jacobian `j` of the exponential map, the density `D`, and
//! finite-difference checks of the dilation equations satisfied by a
//! Kashiwara-Vergne couple.

mod algebra;
mod checks;
mod eval;
mod matfun;

pub use algebra::{LieAlgebraData, BUNDLED};
pub use checks::{
    check_density, check_eq10, check_eq11, check_eq19, check_eq8_bridge, check_exp_functoriality,
    check_jq, divergence_value, sample_pairs, trace_rhs_component, unit_sample_pairs,
    NumericConfig, NumericReport, SampleResult,
};
pub use eval::{
    bch_guard, density_value, density_with, dilated_sum, evaluate_components, evaluate_cyclic,
    evaluate_lie_polynomial, evaluate_lie_series, AlgebraPoint, Evaluation,
};
pub use matfun::{
    ad_matrix, j_from_q, j_value, log_j_series, q_value, spectral_norm, trace_of_word, AnalyticFn,
    TAIL_TOLERANCE,
};
