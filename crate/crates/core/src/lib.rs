//! Exact verification of identities for graded algebras
//! `e_i ⋆ e_j = f(i,j) e_{i+j} + f_θ(i,j) θ`.
//!
//! Everything is generic over [`Scalar`]; the two concrete instantiations
//! are [`Rational`] and [`DualRational`] (`a + b·nil`, `nil² = 0`).

pub mod algebra;
pub mod burgers;
pub mod cohomology;
pub mod diffop;
pub mod element;
pub mod endo;
pub mod extensions;
pub mod expr;
pub mod identities;
pub mod report;
pub mod scalar;
pub mod spec;

pub use algebra::{Algebra, Part, Product, ProductExt};
pub use element::{Element, PairedElement, PoleError};
pub use endo::EndoSpec;
pub use expr::{parse_expr, print_canonical, ExprAst};
pub use report::{CheckReport, Residual, Verdict, Window};
pub use scalar::{Dual, Field, Scalar};
pub use spec::{parse_config, AlgebraSpec, ScalarMode};

/// Arbitrary-precision rational scalar.
pub type Rational = num_rational::BigRational;
/// Dual numbers over the rationals.
pub type DualRational = Dual<Rational>;
pub type RationalElement = Element<Rational>;
pub type RationalReport = CheckReport<Rational>;
