//! Verification of the alternating sum
//! `S(p) = Σ_k (-1)^k C(2p,k) C(4p-k,2p) C(2p+k,k) = (-1)^p (3p)!/(p!)³`
//! through the recurrence `6(3p+2)(3p+1) S(p) + 2(p+1)² S(p+1) = 0` and its
//! WZ certificate.
//!
//! Everything is evaluated exactly; the checks report residuals rather than
//! booleans where a caller may want to print what went wrong.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::combinat::{binomial, factorial, sign};
use crate::error::{Error, Result};
use crate::rational::Rational;

fn summand_int(p: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > 2 * p {
        return BigInt::zero();
    }
    let k = k as u64;
    binomial(2 * p, k) * binomial(4 * p - k, 2 * p) * binomial(2 * p + k, k) * sign(k)
}

/// `F(p, k)`, zero outside `0 ≤ k ≤ 2p`.
pub fn summand_f(p: u64, k: i64) -> Rational {
    Rational::integer(summand_int(p, k))
}

/// `S(p)` by direct summation.
pub fn partial_sum_s(p: u64) -> Rational {
    Rational::integer((0..=2 * p as i64).map(|k| summand_int(p, k)).sum::<BigInt>())
}

/// `(-1)^p (3p)! / (p!)³`.
pub fn closed_form(p: u64) -> Rational {
    let f = factorial(p);
    let value = factorial(3 * p) / (&f * &f * &f);
    Rational::integer(value * sign(p))
}

fn quartic(p: &BigInt, k: &BigInt) -> BigInt {
    let (p2, k2) = (p * p, k * k);
    let (p3, k3) = (&p2 * p, &k2 * k);
    BigInt::from(180) - 184 * k + 1036 * p + 59 * &k2 + 2192 * &p2 - 790 * p * k - 1116 * &p2 * k
        + 168 * p * &k2
        + 2024 * &p3
        - 8 * &k3
        + 688 * &p2 * &p2
        + &k2 * &k2
        - 520 * &p3 * k
        + 120 * &p2 * &k2
        - 10 * p * &k3
}

fn denominator_r(p: &BigInt, k: &BigInt) -> BigInt {
    let a = BigInt::from(-2) * p - 2 + k;
    let b = BigInt::from(-2) * p - 1 + k;
    (BigInt::from(2) * p + 1) * &a * &a * &b * &b
}

/// `G(p, k) = ½ k² Q(p,k) (k - 4p - 1) F(p,k) / R(p,k)` for `0 ≤ k ≤ 2p`.
pub fn certificate_g(p: u64, k: i64) -> Result<Rational> {
    if k < 0 || k as u64 > 2 * p {
        return Err(Error::out_of_range("k", k, format!("0..={}", 2 * p)));
    }
    let (pb, kb) = (BigInt::from(p), BigInt::from(k));
    let num = &kb * &kb * quartic(&pb, &kb) * (&kb - 4 * &pb - 1) * summand_int(p, k);
    let den = BigInt::from(2) * denominator_r(&pb, &kb);
    Rational::from_bigints(num, den)
}

fn recurrence_coefficients(p: u64) -> (Rational, Rational) {
    let a = Rational::integer(6 * (3 * p + 2) * (3 * p + 1));
    let b = Rational::integer(2 * (p + 1) * (p + 1));
    (a, b)
}

/// `G(p,k+1) - G(p,k) - 6(3p+2)(3p+1) F(p,k) - 2(p+1)² F(p+1,k)`.
pub fn wz_residual(p: u64, k: i64) -> Result<Rational> {
    let (a, b) = recurrence_coefficients(p);
    Ok(certificate_g(p, k + 1)? - certificate_g(p, k)? - a * summand_f(p, k) - b * summand_f(p + 1, k))
}

/// True iff the telescoping relation holds for every `0 ≤ k ≤ 2p - 1`.
pub fn check_wz_pair(p: u64) -> bool {
    (0..2 * p as i64).all(|k| wz_residual(p, k).is_ok_and(|r| r.is_zero()))
}

/// `6(3p+2)(3p+1) S(p) + 2(p+1)² S(p+1)`.
pub fn recurrence_residual(p: u64) -> Rational {
    let (a, b) = recurrence_coefficients(p);
    a * partial_sum_s(p) + b * partial_sum_s(p + 1)
}

pub fn check_recurrence(p: u64) -> bool {
    recurrence_residual(p).is_zero()
}

/// The telescoped form of the recurrence next to its direct evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryAccount {
    /// `G(p,2p) - G(p,0)`.
    pub telescoped: Rational,
    /// `6(3p+2)(3p+1) F(p,2p) + 2(p+1)² Σ_{k=2p}^{2p+2} F(p+1,k)`, the terms the
    /// summation over `0 ≤ k ≤ 2p-1` misses.
    pub remaining: Rational,
    /// `6(3p+2)(3p+1) S(p) + 2(p+1)² S(p+1)` by direct summation.
    pub recurrence_lhs: Rational,
}

impl BoundaryAccount {
    /// `telescoped + remaining - recurrence_lhs`; zero when the bookkeeping is right.
    pub fn residual(&self) -> Rational {
        &self.telescoped + &self.remaining - &self.recurrence_lhs
    }
}

pub fn boundary_account(p: u64) -> BoundaryAccount {
    let (a, b) = recurrence_coefficients(p);
    let top = 2 * p as i64;
    let telescoped =
        certificate_g(p, top).expect("k = 2p is in range") - certificate_g(p, 0).expect("k = 0 is in range");
    let tail: Rational = (top..=top + 2).map(|k| summand_f(p + 1, k)).sum();
    BoundaryAccount {
        telescoped,
        remaining: a * summand_f(p, top) + b * tail,
        recurrence_lhs: recurrence_residual(p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summand_values() {
        assert_eq!(summand_f(1, 0), 6.into());
        assert_eq!(summand_f(1, 1), (-18).into());
        assert_eq!(summand_f(1, 2), 6.into());
        assert!(summand_f(3, 7).is_zero());
        assert!(summand_f(3, -1).is_zero());
    }

    #[test]
    fn sums_and_closed_form() {
        let expected = [-6i64, 90, -1680, 34650, -756756];
        for (p, want) in (1..=5).zip(expected) {
            assert_eq!(partial_sum_s(p), want.into());
            assert_eq!(closed_form(p), want.into());
        }
        assert_eq!(closed_form(0), 1.into());
        assert_eq!(partial_sum_s(0), 1.into());
    }

    #[test]
    fn certificate_values() {
        assert_eq!(certificate_g(1, 1).unwrap(), 1280.into());
        assert_eq!(certificate_g(1, 2).unwrap(), (-6480).into());
        for p in 1..6 {
            assert!(certificate_g(p, 0).unwrap().is_zero());
        }
        assert!(certificate_g(1, 3).is_err());
        assert!(certificate_g(1, -1).is_err());
        let step = certificate_g(1, 2).unwrap() - certificate_g(1, 1).unwrap();
        assert_eq!(step, Rational::integer(120) * summand_f(1, 1) + Rational::integer(8) * summand_f(2, 1));
    }

    #[test]
    fn pair_and_recurrence() {
        for p in [1, 2, 10] {
            assert!(check_wz_pair(p));
        }
        for p in [1, 2, 20] {
            assert!(check_recurrence(p));
        }
    }

    #[test]
    fn boundary_bookkeeping() {
        for p in 1..=8 {
            let account = boundary_account(p);
            assert!(account.residual().is_zero(), "p = {p}");
            assert!(account.recurrence_lhs.is_zero());
        }
    }
}
