//! Exact dimension theory for partial difference algebraic groups presented by
//! linear (additive) or monomial-binomial (multiplicative) difference
//! equations over the rationals with trivial shift action.
//!
//! The pipeline reads a [`GroupDescriptor`], computes a Gröbner basis of the
//! associated module, and derives Zariski-closure dimensions, the dimension
//! polynomial and its invariants, stabilization indices and the
//! generalized-group constructions. [`oracle`] is an independent brute-force
//! path used for cross-checking.

pub mod diffterm;
pub mod error;
pub mod exactla;
pub mod groebner;
pub mod groups;
pub mod monoid;
pub mod numpoly;
pub mod oracle;

pub use diffterm::{family_check, parse_generator, DiffTerm, Family, GroupDescriptor, SliceVector};
pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use exactla::SliceBasis;
pub use groebner::{buchberger, GroebnerBasis, Staircase};
pub use monoid::{Mode, ShiftMonomial};
pub use numpoly::{Invariants, NumericalPolynomial};
