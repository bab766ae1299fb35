//! Exact linear algebra over rate variables and symbolic constants.
//!
//! Everything here is immutable once built: expressions, inequalities and
//! systems are plain values. Coefficients are arbitrary-precision rationals;
//! nothing in the engine ever touches floating point.

mod dsl;
mod expr;
mod inequality;
mod symbols;
mod system;

pub use dsl::{parse_document, parse_system, serialize_document, serialize_system, Document};
pub use expr::LinearExpression;
pub use inequality::{Inequality, Triviality};
pub use symbols::{SymbolClass, SymbolKind, SymbolTable};
pub use system::{Insertion, InequalitySystem};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Exact rational number; always stored reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integral rational.
pub fn rat(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `numerator / denominator` as a reduced rational. Panics on a zero denominator.
pub fn ratio(numerator: i64, denominator: i64) -> Rational {
    Rational::new(BigInt::from(numerator), BigInt::from(denominator))
}

/// Positive factor that turns `values` into coprime integers.
///
/// Returns one when every value is zero.
pub(crate) fn integral_scale<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    let mut lcm = BigInt::one();
    let mut gcd = BigInt::zero();
    let values: Vec<&Rational> = values.into_iter().collect();
    for v in &values {
        lcm = lcm.lcm(v.denom());
    }
    for v in &values {
        let scaled = (*v * Rational::from_integer(lcm.clone())).to_integer();
        gcd = gcd.gcd(&scaled);
    }
    if gcd.is_zero() {
        return Rational::one();
    }
    Rational::new(lcm, gcd.abs())
}

pub(crate) fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}
