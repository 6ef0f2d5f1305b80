//! Numerical library for modified Bergman, Bargmann-Fock and Hardy spaces of
//! Dirichlet type: monomial norms, reproducing kernels in closed
//! hypergeometric form and in brute-force series form, Gauss-type quadrature
//! oracles for every inner product, and the Segal-Bargmann transform family
//! between parity subspaces.
//!
//! The crate is organized around three families of spaces on the punctured
//! disk and plane, parameterized by a weight pair `(alpha, beta)` with
//! `beta = beta0 + p`:
//!
//! - weighted Bergman-Dirichlet spaces with weight
//!   `|z|^(2 beta) (R^2 - |z|^2)^alpha` on the disk of radius `R`,
//! - Bargmann-Fock-Dirichlet spaces with weight `|z|^(2 beta) e^(-theta |z|^2)`
//!   on the plane (the `alpha = theta R^2, R -> inf` limit of the former),
//! - Hardy-Dirichlet spaces on the unit circle (the `alpha -> -1` limit).
//!
//! Every closed-form quantity ships with an independent evaluation route
//! (quadrature, coefficient series, or circle averages) and the [`verify`]
//! module turns the pairings into a machine-readable report suite.

pub mod error;
pub mod kernels;
pub mod measures;
pub mod spaces;
pub mod specfun;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use kernels::{
    bargmann_kernel, bargmann_kernel_series, bergman_kernel, bergman_kernel_m0_forms,
    bergman_kernel_series, hardy_kernel, hardy_kernel_series, kernel_series, KernelM0Forms,
    KernelQuery,
};
pub use measures::{
    build_disk_quadrature, build_fock_quadrature, disk_density, fock_density, inner_product,
    DiskMeasureParams, FockMeasureParams, QuadratureRule,
};
pub use spaces::{
    dirichlet_inner_product, dirichlet_norm, eta, monomial_norm_bargmann, monomial_norm_bergman,
    monomial_norm_hardy, radial_mean, split_f1_f2, BargmannDirichletParams,
    BergmanDirichletParams, DirichletSpace, HardyDirichletParams, LaurentSeries, SpaceParams,
};
pub use transforms::{
    apply_transform_coeff, apply_transform_quadrature, c_pq, d_pq, gamma_coeff, series_identity,
    sigma_coeff, transform_kernel, FamilyParams, IdentityKind, Parity, SubspaceVector,
    TransformKind, TransformSpec, TransformVector,
};
pub use verify::{
    check_limit, check_orthonormality, check_reproducing, run_suite, CheckSection, LimitTarget,
    SplitMix64, SuiteConfig, VerificationReport,
};
