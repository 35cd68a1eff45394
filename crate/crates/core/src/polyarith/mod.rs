//! Exact polynomial arithmetic over the rationals.

mod homogeneous;
mod interval;
mod parse;
mod poly2;
pub mod rational;
mod resultant;
mod uni;

use thiserror::Error;

pub use homogeneous::{
    decompose_form, form_gcd, homogenize, multiple_factor_product, square_root_form,
    FormDecomposition,
};
pub use interval::RationalInterval;
pub use parse::{
    parse_expr, parse_expr_with, parse_poly, parse_poly_with, ParseError, ParseOptions,
    DEFAULT_EXPONENT_CAP,
};
pub use poly2::{format_poly, jacobian_det, Monomial, Poly2, Var};
pub use rational::{format_rational, parse_rational, Rational};
pub use resultant::{bareiss_det, resultant};
pub use uni::{RootRange, SquarefreeDecomposition, UniPoly};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("singular matrix")]
    SingularMatrix,
    #[error("shear power must be at least 1")]
    InvalidShearPower,
    #[error("interval endpoints out of order")]
    EmptyInterval,
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error(transparent)]
    Parse(#[from] ParseError),
}
