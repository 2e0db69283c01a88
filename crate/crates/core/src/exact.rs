//! Exact integer arithmetic for factorial ratios.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

pub(crate) fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, m| acc * m)
}

/// Product of factorials `n_1! ... n_r!`.
pub(crate) fn factorial_product(ns: &[u32]) -> BigUint {
    ns.iter()
        .fold(BigUint::one(), |acc, &n| acc * factorial(u64::from(n)))
}

/// `a (a+1) ... b`, empty product when `a > b`.
pub(crate) fn rising(a: u64, b: u64) -> BigUint {
    (a..=b).fold(BigUint::one(), |acc, m| acc * m)
}

/// `num / den` rounded once to `f64`.
pub(crate) fn ratio_to_f64(num: BigUint, den: BigUint) -> f64 {
    let q = BigRational::new(BigInt::from(num), BigInt::from(den));
    q.to_f64().unwrap_or(f64::INFINITY)
}
