//! Functional-analytic quantities of finite reversible chains: variance,
//! entropy, Dirichlet forms, spectral gap, log-Sobolev estimates, mixing
//! times, and the variance/entropy decomposition laws.

#![forbid(unsafe_code)]

pub mod decomposition;
pub mod error;
pub mod functionals;
pub mod kernel;
pub mod logsobolev;
pub mod mixing;
pub mod recursion;
pub mod spectral;

pub use decomposition::{
    check_convexity_lemma, check_product_inequality, check_var_ent_comparison, total_entropy_decomposition,
    total_variance_decomposition, Beta, Decomposition, ProductCheck,
};
pub use error::AnalysisError;
pub use functionals::{dirichlet, entropy, expectation, variance, FunctionOnStates};
pub use kernel::Kernel;
pub use logsobolev::{log_sobolev_constant, LsBudget, LsResult};
pub use mixing::{mixing_time, mixing_time_from, spectral_mixing_bound, MixingResult};
pub use recursion::{recursion_audit, AuditRow};
pub use spectral::{spectral_gap, spectral_report, SpectralReport};
