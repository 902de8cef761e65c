//! Truncated symmetric, boolean and monotone Fock spaces; creation,
//! annihilation, conservation and Weyl operators; process realization,
//! Wigner/Malliavin calculus and cyclicity probes.

pub mod nonsym;
pub mod process;
pub mod weyl;
pub mod space;

pub use process::{
    cyclicity_probe, exp_vector_matrix_element_algebraic, marginal_functional, realize_process,
    vacuum_vs_convexp, CyclicityProbe, Realized,
};
pub use nonsym::{azema_q0_creation, BooleanFock, MonotoneFock};
pub use space::{FockError, FockSpace, StepFn, DIM_LIMIT};
pub use weyl::{
    malliavin_d, momentum_op, position_op, skorohod, skorohod_fit_residual,
    skorohod_matrix_element, weyl_op, weyl_quantize, weyl_quantize_residual, wigner_density,
    GridSpec, IntegrandTerm, PhiInput,
};
