//! Exact factorials and binomial coefficients.

use num_bigint::BigInt;
use num_traits::One;

use crate::rational::Rational;

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    // Each partial product C(n-k+i, i) is an integer, so the division is exact.
    (1..=k).fold(BigInt::one(), |acc, i| acc * (n - k + i) / i)
}

/// `a! / b!` for `a >= b`, as a rational.
pub fn falling_ratio(a: u64, b: u64) -> Rational {
    debug_assert!(a >= b);
    Rational::integer((b + 1..=a).fold(BigInt::one(), |acc, k| acc * k))
}

pub fn sign(k: u64) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}
