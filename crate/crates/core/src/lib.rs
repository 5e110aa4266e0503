//! Quiver varieties `N_Q(λ,α) = μ_α⁻¹(λ)//GL(α)`: roots, the set `Σ_λ`,
//! representation-type strata, symplectic bimodules, moment maps and
//! conjugacy-class quivers.

pub mod bimodule;
pub mod error;
pub mod io;
pub mod kp;
pub mod linalg;
pub mod momentmap;
pub mod quiver;
pub mod rational;
pub mod roots;
pub mod sigma;
pub mod strata;

pub use bimodule::{
    abstract_moment_map, check_simple_isotropic, darboux, darboux_with_complement,
    maximal_isotropic, perp, quadruple_to_quiver, BalancedForm, Bimodule, Darboux, Quadruple,
    SemisimpleAlgebra, TraceFunction,
};
pub use error::{Error, Result};
pub use kp::{
    attach_legs, chain_data, class_dim, class_to_quiver, classes_to_star, ChainData, ConjugacyClass,
};
pub use linalg::{QMatrix, Subspace};
pub use momentmap::{
    fiber_tangent_dim, gauss_newton_solve, mu, omega, solve_multistart, trace_pairing_check,
    EndomElement, Representation, SolverConfig,
};
pub use quiver::{DimVector, Quiver, Weight};
pub use rational::Rational;
pub use roots::{classify_root, positive_roots_up_to, r_lambda_plus, RootClass, RootList, RootTag};
pub use sigma::{dim_N, in_sigma, is_nonempty, Decomposition, Dimension, SigmaAnalysis};
pub use strata::{
    enumerate_rep_types, geometry_report, is_nearly_kleinian, local_quiver, normality_dichotomy,
    stratum_fiber_bound, top_type_bound, GeometryReport, LocalData, RepType, TopType,
};
