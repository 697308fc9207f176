//! Conversion between orthogonal polynomial bases defined by a three-term
//! recurrence and the monomial basis, over a word-sized prime field, in
//! quasi-linear time.
//!
//! ```
//! use orthoconv::{expand, decomp, Preset, PrimeField, RecurrenceFamily};
//!
//! let field = PrimeField::default();
//! let cheb = RecurrenceFamily::preset(Preset::ChebyshevT);
//! // T_3 = 4x^3 - 3x
//! let alpha: Vec<_> = [0u64, 0, 0, 1].iter().map(|&v| field.elem(v)).collect();
//! let t3 = expand(&field, &cheb, &alpha).unwrap();
//! assert_eq!(t3.coeff(1), field.from_i64(-3));
//! assert_eq!(decomp(&field, &cheb, &t3).unwrap(), alpha);
//! ```

pub mod cli;
pub mod decomp;
pub mod error;
pub mod expand;
pub mod field;
pub mod poly;
pub mod recurrence;
pub mod tree;

pub use decomp::{
    decomp, g_polynomial, hankel_matrix, moment_series, normalization, Decomposer, MomentSeries,
    NormalizationConstants,
};
pub use error::{Error, Result};
pub use expand::{expand, expand_transposed, Expander};
pub use field::{Fp, PrimeField};
pub use poly::DensePoly;
pub use recurrence::{
    basis_matrix, naive_decomp, naive_expand, BasisMatrix, Preset, Recurrence, RecurrenceFamily,
};
pub use tree::{build_tree, transition, SubproductTree, TransitionMatrix};
