//! Exact computational algebra for linearized polynomial maps over finite
//! fields.
//!
//! A linearized polynomial is an F_q-linear combination of monomials
//! X_i^(q^m). Maps built from such polynomials correspond one-to-one to
//! matrices over the univariate polynomial ring F_q[t], with composition
//! turning into matrix multiplication. This crate implements that
//! encoding together with the matrix algorithms it calls for — Smith
//! normal form with tracked transforms, unimodular inversion and
//! completion, kernel bases — and the automorphism-level operations built
//! on top: invertibility testing and inversion, tame factorizations,
//! coordinate recognition and completion, ideal normal forms, and the
//! conjugation of finite-order maps to linear ones.
//!
//! The [`separated`] module covers the characteristic-zero counterpart:
//! polynomial maps without mixed terms over exact rationals, permutation
//! unitriangularization, inversion by back-substitution, and triangular
//! linearization.

pub mod autogroup;
pub mod error;
pub mod field;
mod lex;
pub mod linearize;
pub mod linmap;
pub mod matq;
pub mod polyring;
pub mod separated;
#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use field::{Field, FieldEmbedding, FieldSpec, FqElem};
pub use linmap::{DensePoly, LinMap, LinPoly};
pub use matq::{ElementaryOp, FqMatrix, PolyMatrix, SnfResult};
pub use polyring::UniPoly;

#[cfg(test)]
mod thread_safety {
    // all values are immutable after construction and freely shareable
    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn core_types_are_send_and_sync() {
        assert_send_sync::<crate::Field>();
        assert_send_sync::<crate::FqElem>();
        assert_send_sync::<crate::UniPoly>();
        assert_send_sync::<crate::PolyMatrix>();
        assert_send_sync::<crate::LinMap>();
        assert_send_sync::<crate::separated::SepMap>();
        assert_send_sync::<crate::separated::QPolyMap>();
    }
}
