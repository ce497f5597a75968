//! Exact-arithmetic engine for discrete Rieffel-type deformations of finite
//! quantum groups.
//!
//! The crate builds finite quantum groups as Hopf *-algebras over the
//! cyclotomic field Q(zeta_N), deforms their product by a skew-symmetric
//! automorphism of a doubled torus, builds the dual picture as a unitary
//! twist of the group algebra, and machine-checks the structural claims
//! (Hopf axioms, involutivity, duality, C*-norm identities) with exact
//! arithmetic wherever the quantity is algebraic.
//!
//! Module layout:
//!
//! | module    | contents |
//! |-----------|----------|
//! | [`scalar`]  | exact cyclotomic rationals, numeric embedding |
//! | [`linalg`]  | sparse vectors and exact Gaussian elimination |
//! | [`abelian`] | finite abelian groups, endomorphisms, Pontryagin pairing |
//! | [`groups`]  | finite groups, finite fields, GL(2,F_q), torus embeddings |
//! | [`hopf`]    | *-algebras, Hopf *-algebras, duals, crossed products |
//! | [`deform`]  | actions, deformed products, deformed norms, twists |
//! | [`analyze`] | axiom verification, Wedderburn decomposition, reports |

pub mod abelian;
pub mod analyze;
pub mod deform;
pub mod error;
pub mod groups;
pub mod hopf;
pub mod linalg;
pub mod scalar;

pub use error::{Error, Result};
