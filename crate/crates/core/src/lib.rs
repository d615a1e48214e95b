//! Continuous Jordan triple endomorphisms of the cone of 2×2 positive
//! definite matrices, and sequential endomorphisms of the 2×2 effect algebra.
//!
//! A map φ on P₂ with φ(ABA) = φ(A)φ(B)φ(A) is, up to a unitary, one of
//!
//! * A ↦ (Det A)^c · U A U*
//! * A ↦ (Det A)^d · V A⁻¹ V*
//! * A ↦ W · diag((Det A)^c1, (Det A)^c2) · W*
//!
//! [`classify_jte`] recovers the form from a black box by writing
//! φ = exp ∘ f ∘ log and reading off the linear map f. [`classify_seq`] does
//! the same for maps on effects preserving A∘B = √A B √A.
//!
//! ```
//! use jordan2::{classify_jte, JteForm, JteKind, Pd2, Tolerances};
//!
//! let transpose = |a: &Pd2| a.mat().transpose();
//! let result = classify_jte(&transpose, &Tolerances::DEFAULT).unwrap();
//! assert_eq!(result.form.kind(), JteKind::B2);
//! ```

pub mod canonical;
pub mod classify;
pub mod effects;
pub mod error;
pub mod linearize;
pub mod mat2;
pub mod proofcheck;
pub mod sample;
pub mod spin;

pub use canonical::{compose, JteForm, JteKind};
pub use classify::{classify_jte, classify_jte_with, Branch, ClassifyOptions, ClassifyResult};
pub use effects::{classify_seq, classify_seq_with, seq_product, EffectMap, SeqForm, SeqKind};
pub use error::{Error, Result};
pub use linearize::{ConeMap, LinMapH2};
pub use mat2::{Effect2, Herm2, Mat2, PauliCoords, Pd2, Tolerances, Traceless2, Unitary2, C64};
pub use spin::{Rot3, SpinU};
