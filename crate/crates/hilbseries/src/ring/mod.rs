//! Exact coefficient arithmetic: big rationals, multivariate polynomials,
//! normalized rational-function fields, truncated power series, and truncated
//! Laurent series in one distinguished variable.
//!
//! Everything here is immutable after construction and safe to share between
//! threads; all operations are pure.

mod coeff;
mod json;
mod laurent;
pub mod linalg;
mod poly;
mod ratfun;
mod series;

pub use coeff::{Coeff, QQ};
pub use json::{series_from_json, series_to_json};
pub use laurent::{LaurentSeries, EXACT};
pub use poly::{c_vars, qt_vars, MultiPoly};
pub use ratfun::{RatC, RatQT, RationalFunction};
pub use series::{SeriesShape, TruncatedSeries};

use thiserror::Error;

/// Errors raised by series arithmetic.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("constant term is not a unit")]
    NonUnitConstantTerm,
    #[error("constant term must be {expected} for this operation")]
    BadConstantTerm { expected: &'static str },
    #[error("composition requires a zero constant term")]
    NonzeroConstantTerm,
    #[error("compositional inverse requires a unit linear term")]
    NonUnitLinearTerm,
    #[error("series shapes differ: {0}")]
    ShapeMismatch(String),
}

/// Convenience constructor for a big rational from an integer pair.
pub fn qq(num: i64, den: i64) -> QQ {
    use num::BigInt;
    QQ::new(BigInt::from(num), BigInt::from(den))
}

/// Convenience constructor for an integer big rational.
pub fn qi(n: i64) -> QQ {
    use num::BigInt;
    QQ::from(BigInt::from(n))
}

/// Binomial coefficient with a (possibly rational or negative) upper argument:
/// binom(x, j) = x(x−1)…(x−j+1)/j!, and 0 for j < 0.
pub fn binomial(x: &QQ, j: i64) -> QQ {
    if j < 0 {
        return qi(0);
    }
    let mut acc = qi(1);
    for i in 0..j {
        acc = acc * (x - qi(i)) / qi(i + 1);
    }
    acc
}

/// Integer binomial coefficient as a big rational.
pub fn binomial_i(n: i64, j: i64) -> QQ {
    binomial(&qi(n), j)
}

/// Falling factorial (x)_(j) = x(x−1)…(x−j+1).
pub fn falling(x: &QQ, j: i64) -> QQ {
    let mut acc = qi(1);
    for i in 0..j {
        acc = acc * (x - qi(i));
    }
    acc
}

/// Bernoulli numbers B_0, B_1, … with the convention B_1 = −1/2, matching the
/// expansion 1/(e^t − 1) = Σ_{d ≥ −1} B_{d+1}/(d+1)! t^d.
pub fn bernoulli(n: usize) -> QQ {
    // B_m via the recurrence Σ_{j=0}^{m} binom(m+1, j) B_j = 0 for m ≥ 1.
    let mut b: Vec<QQ> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(qi(1));
            continue;
        }
        let mut sum = qi(0);
        for (j, bj) in b.iter().enumerate() {
            sum = sum + binomial_i(m as i64 + 1, j as i64) * bj;
        }
        b.push(-sum / qi(m as i64 + 1));
    }
    b[n].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_basics() {
        assert_eq!(binomial_i(4, 2), qi(6));
        assert_eq!(binomial_i(-1, 2), qi(1));
        assert_eq!(binomial_i(3, -1), qi(0));
        assert_eq!(binomial(&qq(1, 2), 2), qq(-1, 8));
    }

    #[test]
    fn bernoulli_table() {
        assert_eq!(bernoulli(0), qi(1));
        assert_eq!(bernoulli(1), qq(-1, 2));
        assert_eq!(bernoulli(2), qq(1, 6));
        assert_eq!(bernoulli(3), qi(0));
        assert_eq!(bernoulli(4), qq(-1, 30));
    }
}
