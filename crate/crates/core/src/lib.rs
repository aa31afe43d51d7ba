//! Exact computations for finite-dimensional real spaces with an
//! Archimedean order unit: cones, states and order norms, unital positive
//! maps and quotients, tensor cones and nuclearity.

pub mod cone;
pub mod error;
pub mod factorize;
pub mod io;
pub mod kernel;
pub mod maps;
pub mod perturb;
pub mod psd;
pub mod space;
pub mod tensor;

pub use cone::{Certificate, Cone, ConeRep, Halfspace, Term, Verdict};
pub use error::{Error, Result};
pub use factorize::{factorize, factorize_run, Factorization, FactorizationRun};
pub use io::{Document, ToJson};
pub use kernel::ldlt::{ldlt_psd, PsdCertificate, PsdDecision};
pub use kernel::lp::{LinearProgram, LpOutcome, LpStatus, RowSense, VarBound};
pub use kernel::matrix::Matrix;
pub use kernel::rational::{Rational, Vector};
pub use maps::{
    archimedean_quotient, check_map, extend_unital_positive, is_order_ideal, is_order_quotient, AouMap,
    MapReport, OrderIdealReport, OrderQuotientReport,
};
pub use perturb::{auerbach_basis, interval_min, norm_bound_equiv, pert, perturb, AuerbachBasis, NormBound};
pub use psd::{psd_example_suite, Membership, WitnessReport};
pub use space::{lin_space, linf, sym_space, AouSpace, ValidationReport};
pub use tensor::{
    injective_banach_norm, is_nuclear_fd, is_nuclear_pairwise, member_tensor, tensor_map, tensor_space,
    NuclearPairReport, NuclearReport, TensorElement, TensorKind, TensorSpace,
};
