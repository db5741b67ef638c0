//! U_λ and its deformation U_λ(t), band-matrix realizations and
//! contravariant forms of generalized Verma modules.

pub mod band;
pub mod eq29;
pub mod gvm;
pub mod uelem;

pub use gvm::{gen_name, mono_label, strip_factor, AlgebraKind, Gen, GvmContext, GvmGram, GvmParams, PbwMono};
pub use uelem::{check_general_lambda, UElement, UParams};
pub use band::{degenerate_singular_check, gamma_s, phi_s, psi_s, vacuum_cocycle, BandAlgebra, BandElement, SingularCheck, Weights};
pub use eq29::{delta_basis, delta_factor, verify_eq29, zero_order_at};
