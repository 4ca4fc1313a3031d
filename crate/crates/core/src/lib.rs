//! Explicit families of mutually orthogonal maximally entangled states in
//! `C^d ⊗ C^d` together with machine-checkable dual certificates showing that
//! no PPT measurement (and hence no LOCC protocol) discriminates them perfectly.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: dense complex matrices, partial transpose, Hermitian
//!   eigendecomposition.
//! * [`states`]: maximally entangled states `(I ⊗ U)|ψ₁⟩` and their projectors.
//! * [`eigenspaces`]: the antisymmetric/symmetric eigenspaces of the partial
//!   transpose and the common negative eigenspace of a family.
//! * [`constructions`]: the unitary families for every supported dimension.
//! * [`certificates`]: dual-feasible operators `γ ⪰ T_A(ρ_j)` and their bounds.
//! * [`sdp`]: a first-order solver for the primal PPT discrimination program.
//! * [`io`] and [`cli`]: JSON file formats and the command-line front end.
//!
//! Kets are 0-based throughout: the ket usually written `|1⟩` is index 0. A
//! product ket `|a b⟩` in `C^d ⊗ C^d` lives at index `a·d + b`, with `a` on
//! the first (A) factor.

pub mod certificates;
pub mod cli;
pub mod constructions;
pub mod eigenspaces;
pub mod error;
pub mod io;
pub mod linalg;
pub mod sdp;
pub mod states;

pub use certificates::{
    certify_family, d7_certificate, d7_negative_weight, d7_param_check, d7_param_check_with_weight, rank_one_gamma,
    verify_certificate, Certificate, CertificateForm, FamilyCertification, Verdict, VerificationReport,
};
pub use constructions::{
    case_4n1, case_4n3, case_4n_tensor, case_d11, case_d11_all, case_d7, case_even, construct_for_dimension,
    generalized_pauli,
};
pub use eigenspaces::{
    antisymmetric_basis, common_negative_eigenspace, negative_eigenspace, symmetric_basis, SubspaceBasis,
};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexVector, EigDecomposition};
pub use sdp::{solve_primal, SdpSolution, SolverConfig};
pub use states::{
    canonical_mes, check_mutual_orthogonality, density, state_from_unitary, Convention, DensityMatrix, FamilyTag,
    UnitarySet,
};
