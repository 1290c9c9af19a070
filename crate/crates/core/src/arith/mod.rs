// SPDX-License-Identifier: Apache-2.0

//! Exact arithmetic substrate: rationals, prime fields, extension fields and
//! kernels of rational matrices.

mod field;
mod matrix;
mod prime;

pub use field::{
    make_ext_field, make_ext_field_bounded, Embedding, ExtField, FieldElem,
    DEFAULT_ENUMERATION_BOUND,
};
pub use matrix::{kernel, Elimination, Pivot, RationalMatrix};
pub use prime::PrimeField;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Shorthand for an integral rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"a"` or `"a/b"` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let s = s.trim();
    let bad = || ArithError::Parse(s.to_string());
    match s.split_once('/') {
        None => s.parse::<BigInt>().map(Rational::from_integer).map_err(|_| bad()),
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            if den == BigInt::from(0) {
                return Err(bad());
            }
            Ok(Rational::new(num, den))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {order} exceeds the enumeration bound {bound}")]
    TooLarge { order: u128, bound: u64 },
    #[error("row has {found} entries, matrix has {expected} columns")]
    Arity { expected: usize, found: usize },
    #[error("cannot embed a degree-{from} field into a degree-{into} field over the same prime")]
    NoEmbedding { from: u32, into: u32 },
    #[error("fields have different characteristic ({0} vs {1})")]
    CharacteristicMismatch(u32, u32),
    #[error("elimination trace does not replay: {0}")]
    BadTrace(String),
    #[error("could not parse rational {0:?}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}
