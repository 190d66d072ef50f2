//! The Weitzenböck derivation `D_n`, its companion `Δ_n`, the additive-group
//! flow, isobaric weights and the projections `π_{m,n}`.
//!
//! Direction convention: `exp_derivation(n, a, f)` evaluated at `v` equals
//! `f` evaluated at `flow_point(n, a, v)`. The flow is the coordinate action
//! `(a * v)_i = Σ_{j ≤ i} a^j / j! · v_{i-j}`.

use std::collections::hash_map::Entry;
use std::fmt;

use num_bigint::BigInt;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, RationalPoint, RingDescriptor};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DerivationKind {
    /// `x_k ↦ x_{k-1}`, `x_0 ↦ 0`.
    Weitzenboeck,
    /// `x_k ↦ (n-k)(k+1) x_{k+1}`, `x_n ↦ 0`.
    Delta,
}

/// Nilpotency index of a polynomial under a locally nilpotent derivation.
/// The zero polynomial gets the sentinel `NegInfinity`, which is not a number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Nilpotency {
    NegInfinity,
    Index(u32),
}

impl Nilpotency {
    pub fn index(self) -> Option<u32> {
        match self {
            Nilpotency::NegInfinity => None,
            Nilpotency::Index(k) => Some(k),
        }
    }
}

impl fmt::Display for Nilpotency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nilpotency::NegInfinity => f.write_str("-inf"),
            Nilpotency::Index(k) => write!(f, "{k}"),
        }
    }
}

pub(crate) fn expect_plain(n: usize, f: &Polynomial) -> Result<()> {
    let ring = f.ring();
    if ring.extended {
        return Err(Error::ExtendedRing);
    }
    if ring.n != n {
        return Err(Error::WrongRing { expected: n, found: ring });
    }
    Ok(())
}

/// Image of `f` under `D_n` or `Δ_n`.
pub fn derive(kind: DerivationKind, n: usize, f: &Polynomial) -> Result<Polynomial> {
    expect_plain(n, f)?;
    Ok(derive_unchecked(kind, n, f))
}

pub(crate) fn derive_unchecked(kind: DerivationKind, n: usize, f: &Polynomial) -> Polynomial {
    let (nums, den) = f.cleared();
    let (sources, step): (std::ops::Range<usize>, i64) = match kind {
        DerivationKind::Weitzenboeck => (1..n + 1, -1),
        DerivationKind::Delta => (0..n, 1),
    };
    let mut acc: FxHashMap<Monomial, BigInt> = FxHashMap::default();
    for ((m, _), c) in f.terms().iter().zip(&nums) {
        let exps = m.exponents();
        for k in sources.clone() {
            let e = exps[k];
            if e == 0 {
                continue;
            }
            let target = (k as i64 + step) as usize;
            let factor = match kind {
                DerivationKind::Weitzenboeck => e as i64,
                DerivationKind::Delta => e as i64 * ((n - k) * (k + 1)) as i64,
            };
            let image = m.with_shift(k, -1).with_shift(target, 1);
            let coeff = c * factor;
            match acc.entry(image) {
                Entry::Occupied(mut slot) => *slot.get_mut() += coeff,
                Entry::Vacant(slot) => {
                    slot.insert(coeff);
                }
            }
        }
    }
    Polynomial::from_integer_map(f.ring(), acc, &den)
}

/// `D^times f`.
pub fn derive_times(kind: DerivationKind, n: usize, f: &Polynomial, times: u32) -> Result<Polynomial> {
    expect_plain(n, f)?;
    let mut g = f.clone();
    for _ in 0..times {
        if g.is_zero() {
            break;
        }
        g = derive_unchecked(kind, n, &g);
    }
    Ok(g)
}

/// The orbit `f, Df, D²f, …` up to and including the last nonzero element.
pub(crate) fn derivative_chain(kind: DerivationKind, n: usize, f: &Polynomial) -> Vec<Polynomial> {
    let mut chain = Vec::new();
    let mut g = f.clone();
    while !g.is_zero() {
        let next = derive_unchecked(kind, n, &g);
        chain.push(g);
        g = next;
    }
    chain
}

pub fn nilpotency_index(kind: DerivationKind, n: usize, f: &Polynomial) -> Result<Nilpotency> {
    expect_plain(n, f)?;
    let chain = derivative_chain(kind, n, f);
    Ok(match chain.len() {
        0 => Nilpotency::NegInfinity,
        len => Nilpotency::Index(len as u32 - 1),
    })
}

/// Weight `Σ_k (n - 2k) a_k` of a single monomial.
pub fn monomial_weight(n: usize, m: &Monomial) -> i64 {
    m.exponents().iter().take(n + 1).enumerate().map(|(k, &e)| (n as i64 - 2 * k as i64) * e as i64).sum()
}

/// The common weight of all terms, or `None` if the terms disagree.
pub fn isobaric_weight(n: usize, f: &Polynomial) -> Result<Option<i64>> {
    expect_plain(n, f)?;
    let mut weights = f.terms().iter().map(|(m, _)| monomial_weight(n, m));
    let first = weights.next().ok_or(Error::ZeroPolynomial)?;
    Ok(weights.all(|w| w == first).then_some(first))
}

/// Translates `v` along the additive-group flow by `a`.
pub fn flow_point(n: usize, a: &Rational, v: &RationalPoint) -> Result<RationalPoint> {
    v.expect_len(n + 1)?;
    // a^j / j!
    let mut weights = Vec::with_capacity(n + 1);
    weights.push(Rational::one());
    for j in 1..=n {
        let next = weights[j - 1].clone() * a / Rational::integer(j as i64);
        weights.push(next);
    }
    let coords = (0..=n).map(|i| (0..=i).map(|j| &weights[j] * &v[i - j]).sum()).collect();
    Ok(RationalPoint::new(coords))
}

/// `exp(a D_n) f = Σ_k a^k D^k f / k!`.
pub fn exp_derivation(n: usize, a: &Rational, f: &Polynomial) -> Result<Polynomial> {
    expect_plain(n, f)?;
    let mut result = Polynomial::zero(f.ring());
    let mut weight = Rational::one();
    for (k, term) in derivative_chain(DerivationKind::Weitzenboeck, n, f).into_iter().enumerate() {
        if k > 0 {
            weight = weight * a / Rational::integer(k as i64);
        }
        result = &result + &term.scale(&weight);
    }
    Ok(result)
}

/// `π_{m,n}`: substitutes `x_0 = … = x_{n-m-1} = 0` and renames
/// `x_{n-m+i} ↦ x_i`, landing in `R_m`.
pub fn project(m: usize, n: usize, f: &Polynomial) -> Result<Polynomial> {
    if m >= n {
        return Err(Error::out_of_range("m", m as i64, format!("0 <= m < n = {n}")));
    }
    expect_plain(n, f)?;
    let shift = n - m;
    let terms = f
        .terms()
        .iter()
        .filter(|(mono, _)| mono.exponents()[..shift].iter().all(|&e| e == 0))
        .map(|(mono, c)| (Monomial::from_exponents(mono.exponents()[shift..].iter().copied()), c.clone()))
        .collect();
    // Dropping a block of leading zero exponents preserves the order.
    Ok(Polynomial::from_sorted_unchecked(RingDescriptor::plain(m), terms))
}
