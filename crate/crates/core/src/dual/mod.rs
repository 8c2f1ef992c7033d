//! The pre-generator of the Z-measure diffusion on φ-polynomials and, at
//! ϑ = 1, its dual jump process on the Young graph.

mod generator;
mod phi;
mod process;

pub use generator::{
    carre_du_champ, generator_apply, generator_matrix, spectrum_check, GeneratorParams, SpectrumReport,
    MAX_PHI_DEGREE, MAX_SPECTRUM_DEGREE,
};
pub use phi::{monomial_basis, PhiMonomial, PhiPoly};
pub use process::{
    duality_residual, duality_residual_f64, duality_sweep, expected_j_given_start, Collapse, DualProcess,
    DualState, DualityRow, JumpStats, MAX_DUALITY_N, MAX_EXPECTATION_N,
};
