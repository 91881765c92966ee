//! Exact and numerical toolkit for the four-dimensional SIC-POVM.
//!
//! The exact half works in the degree-16 field `Q(u, r)` generated by the
//! overlap phase `u` of the d=4 SIC: minimal polynomials, the Galois group
//! `Z₂ × D₈`, and an exact reconstruction and verification of the fiducial
//! projector. The numeric half provides Weyl–Heisenberg operators for any
//! dimension and a gradient-based fiducial search.

pub mod exact;
pub mod field;
pub mod galois;
pub mod minpoly;
pub mod scalar;
pub mod search;
pub mod sic;
pub mod weyl;

pub use exact::{int, rat, LinearError, Matrix, Poly, PolyError, Rational};
pub use field::{constant, Constant, FieldElem, FieldError};
pub use galois::{certify_structure, generate_group, Automorphism, GroupTable, StructureReport};
pub use minpoly::{is_algebraic_integer, is_unit, minimal_polynomial, palindrome_reduce, verify_split, MinPolyResult};
pub use scalar::{Conjugate, Field, Real, Ring};
pub use search::{
    extract_phases, fourth_moment, residual_gradient, search, search_from, sic_residual, NumericFiducial,
    SearchConfig, SearchError, SearchResult,
};

/// Polynomial with rational coefficients.
pub type PolyQ = Poly<Rational>;
/// Dense rational matrix.
pub type QMatrix = Matrix<Rational>;
/// Double-double float (about 32 significant digits).
pub type Extended = twofloat::TwoFloat;
/// Complex number in double precision.
pub type Complex64 = num_complex::Complex<f64>;
