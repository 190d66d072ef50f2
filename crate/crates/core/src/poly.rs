//! Sparse multivariate polynomials over ℚ.
//!
//! Variables are `x0..xn`, optionally followed by `y0, y1` in the extended
//! ring used for covariants. Terms are kept in canonical form: sorted by
//! descending graded-lexicographic order (`x0 > x1 > … > y1`), no zero
//! coefficients, no repeated monomials.

use std::cmp::Ordering;
use std::collections::hash_map::Entry;
use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Describes the ambient ring `R_n = ℚ[x0..xn]`, or `R_n[y0, y1]` when `extended`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingDescriptor {
    pub n: usize,
    pub extended: bool,
}

impl RingDescriptor {
    pub const fn plain(n: usize) -> Self {
        RingDescriptor { n, extended: false }
    }

    pub const fn extended(n: usize) -> Self {
        RingDescriptor { n, extended: true }
    }

    pub const fn num_vars(&self) -> usize {
        self.n + 1 + if self.extended { 2 } else { 0 }
    }

    /// Index of `y_i` in the exponent vector. Panics on a plain ring.
    pub fn y_index(&self, i: usize) -> usize {
        assert!(self.extended && i < 2, "y{i} not present in {self}");
        self.n + 1 + i
    }

    pub fn var_name(&self, index: usize) -> String {
        if index <= self.n {
            format!("x{index}")
        } else {
            format!("y{}", index - self.n - 1)
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.extended {
            write!(f, "R_{}[y0,y1]", self.n)
        } else {
            write!(f, "R_{}", self.n)
        }
    }
}

pub type Exponents = SmallVec<[u16; 24]>;

/// An exponent vector. The derived order compares total degree first and
/// then the exponents lexicographically, which is graded lex with `x0` largest.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    degree: u32,
    exps: Exponents,
}

impl Monomial {
    pub fn one(num_vars: usize) -> Self {
        Monomial { degree: 0, exps: SmallVec::from_elem(0, num_vars) }
    }

    pub fn var(num_vars: usize, index: usize) -> Self {
        let mut m = Monomial::one(num_vars);
        m.exps[index] = 1;
        m.degree = 1;
        m
    }

    pub fn from_exponents(exps: impl IntoIterator<Item = u16>) -> Self {
        let exps: Exponents = exps.into_iter().collect();
        let degree = exps.iter().map(|&e| e as u32).sum();
        Monomial { degree, exps }
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn exponent(&self, index: usize) -> u16 {
        self.exps[index]
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn num_vars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    /// Product of two monomials over the same variables.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
            .collect();
        Monomial { degree: self.degree + other.degree, exps }
    }

    /// Returns a copy with exponent `index` shifted by `delta`.
    pub(crate) fn with_shift(&self, index: usize, delta: i32) -> Monomial {
        let mut m = self.clone();
        let e = m.exps[index] as i32 + delta;
        debug_assert!(e >= 0);
        m.exps[index] = u16::try_from(e).expect("exponent overflow");
        m.degree = (m.degree as i64 + delta as i64) as u32;
        m
    }

    fn fmt_with(&self, ring: &RingDescriptor, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(&ring.var_name(i))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

fn descending(a: &(Monomial, Rational), b: &(Monomial, Rational)) -> Ordering {
    b.0.cmp(&a.0)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ring: RingDescriptor,
    terms: Vec<(Monomial, Rational)>,
}

impl Polynomial {
    pub fn zero(ring: RingDescriptor) -> Self {
        Polynomial { ring, terms: Vec::new() }
    }

    pub fn constant(ring: RingDescriptor, c: Rational) -> Self {
        let mut p = Polynomial::zero(ring);
        if !c.is_zero() {
            p.terms.push((Monomial::one(ring.num_vars()), c));
        }
        p
    }

    pub fn one(ring: RingDescriptor) -> Self {
        Polynomial::constant(ring, Rational::one())
    }

    /// The variable with position `index` in the exponent vector.
    pub fn var(ring: RingDescriptor, index: usize) -> Result<Self> {
        let vars = ring.num_vars();
        if index >= vars {
            return Err(Error::VariableIndex { index, vars });
        }
        Ok(Polynomial { ring, terms: vec![(Monomial::var(vars, index), Rational::one())] })
    }

    /// `x_k` in the plain ring `R_n`. Panics if `k > n`.
    pub fn x(n: usize, k: usize) -> Self {
        assert!(k <= n, "x{k} not in R_{n}");
        Polynomial::var(RingDescriptor::plain(n), k).unwrap()
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates and
    /// dropping zeros.
    pub fn from_terms(
        ring: RingDescriptor,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Result<Self> {
        let vars = ring.num_vars();
        let mut acc: FxHashMap<Monomial, Rational> = FxHashMap::default();
        for (m, c) in terms {
            if m.num_vars() != vars {
                return Err(Error::PointLength { expected: vars, found: m.num_vars() });
            }
            accumulate(&mut acc, m, c);
        }
        Ok(Polynomial::from_map(ring, acc))
    }

    pub(crate) fn from_map(ring: RingDescriptor, acc: FxHashMap<Monomial, Rational>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(descending);
        Polynomial { ring, terms }
    }

    /// Parses the human-readable form produced by `Display`, e.g.
    /// `x0*x2 - 1/2*x1^2`.
    pub fn parse(ring: RingDescriptor, text: &str) -> Result<Self> {
        let vars = ring.num_vars();
        let mut terms = Vec::new();
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut start = 0;
        let bytes = compact.as_bytes();
        let mut pieces = Vec::new();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                pieces.push(&compact[start..i]);
                start = i;
            }
        }
        pieces.push(&compact[start..]);
        for piece in pieces {
            let (sign, body) = match piece.as_bytes()[0] {
                b'-' => (-1, &piece[1..]),
                b'+' => (1, &piece[1..]),
                _ => (1, piece),
            };
            if body.is_empty() {
                return Err(Error::Parse(format!("dangling sign in `{text}`")));
            }
            let mut coeff = Rational::integer(sign);
            let mut exps: Exponents = SmallVec::from_elem(0, vars);
            for factor in body.split('*') {
                if factor.starts_with('x') || factor.starts_with('y') {
                    let (name, power) = match factor.split_once('^') {
                        Some((nm, pw)) => (
                            nm,
                            pw.parse::<u16>()
                                .map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?,
                        ),
                        None => (factor, 1),
                    };
                    let idx: usize =
                        name[1..].parse().map_err(|_| Error::Parse(format!("bad variable `{name}`")))?;
                    let index = if name.starts_with('x') {
                        if idx > ring.n {
                            return Err(Error::VariableIndex { index: idx, vars });
                        }
                        idx
                    } else {
                        if !ring.extended || idx > 1 {
                            return Err(Error::Parse(format!("`{name}` not in {ring}")));
                        }
                        ring.y_index(idx)
                    };
                    exps[index] += power;
                } else {
                    coeff *= &factor.parse::<Rational>()?;
                }
            }
            terms.push((Monomial::from_exponents(exps), coeff));
        }
        Polynomial::from_terms(ring, terms)
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }

    /// Terms in canonical (descending) order.
    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms
    }

    /// Number of terms. Emptiness is `is_zero`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms
            .binary_search_by(|(t, _)| m.cmp(t))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn leading_term(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => self.terms.iter().all(|(t, _)| t.degree() == m.degree()),
        }
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch { left: self.ring, right: other.ring });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let rhs = |c: &Rational| if negate { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    terms.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    terms.push((b[j].0.clone(), rhs(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        terms.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend(a[i..].iter().cloned());
        terms.extend(b[j..].iter().map(|(m, c)| (m.clone(), rhs(c))));
        Polynomial { ring: self.ring, terms }
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.mul_impl(other))
    }

    fn mul_impl(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(self.ring);
        }
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            return large.mul_term(m, c);
        }
        let (small_nums, small_den) = small.cleared();
        let (large_nums, large_den) = large.cleared();
        let mut acc: FxHashMap<Monomial, BigInt> =
            FxHashMap::with_capacity_and_hasher(large.len() * 2, Default::default());
        for ((ms, _), cs) in small.terms.iter().zip(&small_nums) {
            for ((ml, _), cl) in large.terms.iter().zip(&large_nums) {
                let c = cs * cl;
                match acc.entry(ms.mul(ml)) {
                    Entry::Occupied(mut e) => *e.get_mut() += c,
                    Entry::Vacant(e) => {
                        e.insert(c);
                    }
                }
            }
        }
        Polynomial::from_integer_map(self.ring, acc, &(small_den * large_den))
    }

    /// Multiplies by the single term `c * m`; the order of terms is preserved.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.ring);
        }
        Polynomial {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(t, d)| (t.mul(m), if c.is_one() { d.clone() } else { d * c }))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        self.mul_term(&Monomial::one(self.ring.num_vars()), c)
    }

    pub fn pow(&self, exp: u32) -> Polynomial {
        let mut result = Polynomial::one(self.ring);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_impl(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_impl(&base);
            }
        }
        result
    }

    /// Exact value at a point whose length matches the ring's variable count.
    pub fn eval(&self, point: &RationalPoint) -> Result<Rational> {
        let vars = self.ring.num_vars();
        if point.len() != vars {
            return Err(Error::PointLength { expected: vars, found: point.len() });
        }
        let Some(max_degree) = self.total_degree() else {
            return Ok(Rational::zero());
        };
        // Work over ℤ: coordinates become p_i / q, coefficients a_t / l, and a
        // term of degree d is brought to the common denominator l·q^max_degree.
        let q = point.coords().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let numerators: Vec<BigInt> = point.coords().iter().map(|c| c.numer() * (&q / c.denom())).collect();
        let (coeffs, l) = self.cleared();
        let mut q_powers = vec![BigInt::one()];
        for k in 0..max_degree as usize {
            q_powers.push(&q_powers[k] * &q);
        }
        let mut powers: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]; vars];
        let mut total = BigInt::zero();
        for ((m, _), c) in self.terms.iter().zip(coeffs) {
            let mut value = c;
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[i];
                while table.len() <= e as usize {
                    let next = table.last().unwrap() * &numerators[i];
                    table.push(next);
                }
                value *= &table[e as usize];
            }
            let gap = (max_degree - m.degree()) as usize;
            if gap > 0 {
                value *= &q_powers[gap];
            }
            total += value;
        }
        Rational::from_bigints(total, l * &q_powers[max_degree as usize])
    }

    pub fn partial_derivative(&self, var: usize) -> Result<Polynomial> {
        let vars = self.ring.num_vars();
        if var >= vars {
            return Err(Error::VariableIndex { index: var, vars });
        }
        // Differentiation keeps distinct monomials distinct, so no merge is needed,
        // but the order can change when degrees drop unevenly.
        let mut terms: Vec<_> = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(var) > 0)
            .map(|(m, c)| {
                let e = m.exponent(var);
                (m.with_shift(var, -1), c * &Rational::integer(e as i64))
            })
            .collect();
        terms.sort_unstable_by(descending);
        Ok(Polynomial { ring: self.ring, terms })
    }

    /// Returns `λ ≠ 0` with `self = λ · other`, if one exists. Zero polynomials
    /// are never proportional.
    pub fn scalar_multiple_of(&self, other: &Polynomial) -> Option<Rational> {
        if self.ring != other.ring || self.is_zero() || self.len() != other.len() {
            return None;
        }
        let lambda = &self.terms[0].1 / &other.terms[0].1;
        let matches =
            self.terms.iter().zip(&other.terms).all(|((ma, ca), (mb, cb))| ma == mb && *ca == &lambda * cb);
        matches.then_some(lambda)
    }

    /// Re-sorts and merges the terms. On any value produced by this module this
    /// is the identity.
    pub fn renormalized(&self) -> Polynomial {
        Polynomial::from_terms(self.ring, self.terms.iter().cloned()).unwrap()
    }

    /// True iff the stored terms satisfy every canonical-form invariant.
    pub fn is_canonical(&self) -> bool {
        let vars = self.ring.num_vars();
        self.terms.iter().all(|(m, c)| !c.is_zero() && m.num_vars() == vars)
            && self.terms.windows(2).all(|w| w[0].0 > w[1].0)
    }

    /// Integer numerators, aligned with `terms()`, over the least common
    /// denominator of the coefficients.
    pub(crate) fn cleared(&self) -> (Vec<BigInt>, BigInt) {
        let den = self.terms.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let nums = self
            .terms
            .iter()
            .map(|(_, c)| if c.denom().is_one() { c.numer() * &den } else { c.numer() * (&den / c.denom()) })
            .collect();
        (nums, den)
    }

    /// `Σ acc[m]·m / den`.
    pub(crate) fn from_integer_map(
        ring: RingDescriptor,
        acc: FxHashMap<Monomial, BigInt>,
        den: &BigInt,
    ) -> Self {
        let mut terms: Vec<_> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| {
                let c = if den.is_one() {
                    Rational::integer(c)
                } else {
                    Rational::from_bigints(c, den.clone()).expect("denominator is nonzero")
                };
                (m, c)
            })
            .collect();
        terms.sort_unstable_by(descending);
        Polynomial { ring, terms }
    }

    pub(crate) fn from_sorted_unchecked(
        ring: RingDescriptor,
        terms: Vec<(Monomial, Rational)>,
    ) -> Polynomial {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        Polynomial { ring, terms }
    }
}

fn accumulate(acc: &mut FxHashMap<Monomial, Rational>, m: Monomial, c: Rational) {
    match acc.entry(m) {
        Entry::Occupied(mut e) => *e.get_mut() += c,
        Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let magnitude = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{magnitude}")?;
            } else {
                if !magnitude.is_one() {
                    write!(f, "{magnitude}*")?;
                }
                m.fmt_with(&self.ring, f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.ring, self)
    }
}

// Operator sugar. These panic on ring mismatch; use the `checked_*` methods
// where the rings are not known to agree.
impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial ring mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial ring mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial ring mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { ring: self.ring, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

/// A point of the affine space `V_n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalPoint {
    coords: Vec<Rational>,
}

impl RationalPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalPoint { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RationalPoint { coords: coords.iter().map(|&c| Rational::integer(c)).collect() }
    }

    pub fn zero(len: usize) -> Self {
        RationalPoint { coords: vec![Rational::zero(); len] }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    pub fn expect_len(&self, expected: usize) -> Result<()> {
        if self.len() != expected {
            return Err(Error::PointLength { expected, found: self.len() });
        }
        Ok(())
    }
}

impl Index<usize> for RationalPoint {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.coords[i]
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}
