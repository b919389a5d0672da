//! Exact arithmetic: rationals, multivariate polynomials in the torus
//! characters `t_i` and residue variables `z_i`, and rational functions whose
//! denominators are kept as explicit factor lists.

mod poly;
mod rat;
mod ratfunc;

pub use poly::{Monomial, MultiPoly, VarClass, VarId};
pub use rat::{ParseRatError, Rat};
pub use ratfunc::{split_factor, FactoredRatFunc};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("rational function has a residual denominator: {0}")]
    NotPolynomial(String),
    #[error("denominator factor vanishes identically")]
    ZeroDenominator,
    #[error("variable {class:?}{index} outside 1..={n}")]
    VariableOutOfRange { class: VarClass, index: u32, n: usize },
}
