//! Exact multivariate polynomials over the rationals.
//!
//! Every polynomial carries its ambient [`VarSet`]; terms are kept strictly
//! decreasing under the ambient's default [`MonomialOrder`] (weighted graded
//! reverse lex when weights are declared, graded reverse lex otherwise).

mod grading;
mod monomial;
mod order;
mod polynomial;
mod substitution;
mod varset;

pub use grading::{weighted_degree_check, Grading};
pub use monomial::Monomial;
pub use order::{MonomialOrder, OrderKey};
pub use polynomial::Polynomial;
pub use substitution::Substitution;
pub use varset::VarSet;

pub use num_bigint::BigInt;
pub use num_rational::BigRational as Rational;

/// Shorthand for the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
