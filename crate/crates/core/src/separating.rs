//! The invariants `f_m`, the local slices `s_m`, the slice invariants
//! `ε_s(a)` and the separating set `E_n` assembled from them.
//!
//! `E_n` consists of, in this order:
//!
//! * `f_0, f_1, …, f_[n/2]`
//! * `ε_{s_0}(x_2), …, ε_{s_0}(x_n)`
//! * `ε_{s_m}(x_m), …, ε_{s_m}(x_n)` for `1 <= m <= [(n-1)/2]`
//! * the cubic `w` when `n ≡ 0 mod 4`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::combinat::factorial;
use crate::derivation::{self, derivative_chain, derive_unchecked, expect_plain, project, DerivationKind};
use crate::error::{Error, Result};
use crate::poly::{Polynomial, RationalPoint, RingDescriptor};
use crate::rational::Rational;
use crate::transvectant;

const W: DerivationKind = DerivationKind::Weitzenboeck;

/// `|E_n|` for `n = 4..=20`, as tabulated with the construction.
pub const REFERENCE_SIZES: [(usize, usize); 17] = [
    (4, 11),
    (5, 16),
    (6, 20),
    (7, 28),
    (8, 34),
    (9, 43),
    (10, 49),
    (11, 61),
    (12, 69),
    (13, 82),
    (14, 90),
    (15, 106),
    (16, 116),
    (17, 133),
    (18, 143),
    (19, 163),
    (20, 175),
];

/// The invariant `f_m = Σ_{k<m} (-1)^k x_k x_{2m-k} + ½(-1)^m x_m²`, with `f_0 = x_0`.
pub fn build_f(n: usize, m: usize) -> Result<Polynomial> {
    if m > n / 2 {
        return Err(Error::out_of_range("m", m as i64, format!("0..={}", n / 2)));
    }
    if m == 0 {
        return Ok(Polynomial::x(n, 0));
    }
    let half_sign = Rational::new(if m % 2 == 0 { 1 } else { -1 }, 2);
    let mut f = (&Polynomial::x(n, m) * &Polynomial::x(n, m)).scale(&half_sign);
    for k in 0..m {
        let term = &Polynomial::x(n, k) * &Polynomial::x(n, 2 * m - k);
        f = if k % 2 == 0 { &f + &term } else { &f - &term };
    }
    Ok(f)
}

/// The local slice `s_m = Σ_{k<=m} (-1)^k (2m+1-2k)/2 · x_k x_{2m+1-k}`, with `s_0 = x_1`.
pub fn build_s(n: usize, m: usize) -> Result<Polynomial> {
    if n == 0 || m > (n - 1) / 2 {
        let allowed = if n == 0 { "none (n = 0)".to_string() } else { format!("0..={}", (n - 1) / 2) };
        return Err(Error::out_of_range("m", m as i64, allowed));
    }
    if m == 0 {
        return Ok(Polynomial::x(n, 1));
    }
    let mut s = Polynomial::zero(RingDescriptor::plain(n));
    for k in 0..=m {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let coeff = Rational::new(sign * (2 * m as i64 + 1 - 2 * k as i64), 2);
        let term = &Polynomial::x(n, k) * &Polynomial::x(n, 2 * m + 1 - k);
        s = &s + &term.scale(&coeff);
    }
    Ok(s)
}

/// `ε_s(a) = Σ_{k=0}^{ν(a)} (-1)^k / k! · D^k(a) · s^k · (Ds)^{ν(a)-k}`.
///
/// `s` must be a local slice, i.e. `D s` is a nonzero invariant.
pub fn epsilon(n: usize, s: &Polynomial, a: &Polynomial) -> Result<Polynomial> {
    expect_plain(n, s)?;
    expect_plain(n, a)?;
    let ds = derive_unchecked(W, n, s);
    if ds.is_zero() || !derive_unchecked(W, n, &ds).is_zero() {
        return Err(Error::NotLocalSlice);
    }
    let chain = derivative_chain(W, n, a);
    if chain.is_empty() {
        return Ok(Polynomial::zero(a.ring()));
    }
    let powers = powers_of(&ds, chain.len() - 1);
    Ok(epsilon_from_chain(s, &powers, &chain))
}

fn powers_of(p: &Polynomial, max: usize) -> Vec<Polynomial> {
    let mut powers = Vec::with_capacity(max + 1);
    powers.push(Polynomial::one(p.ring()));
    for i in 0..max {
        let next = &powers[i] * p;
        powers.push(next);
    }
    powers
}

/// Homogeneous Horner evaluation of `Σ_k c_k D^k(a) s^k (Ds)^{ν-k}`:
/// `acc ← acc·s + c_k D^k(a) (Ds)^{ν-k}` for `k = ν, …, 0`.
fn epsilon_from_chain(s: &Polynomial, ds_powers: &[Polynomial], chain: &[Polynomial]) -> Polynomial {
    let nu = chain.len() - 1;
    let coeff = |k: usize| {
        Rational::from_bigints(if k % 2 == 0 { 1.into() } else { (-1).into() }, factorial(k as u64)).unwrap()
    };
    let mut acc = chain[nu].scale(&coeff(nu));
    for k in (0..nu).rev() {
        let tail = (&chain[k] * &ds_powers[nu - k]).scale(&coeff(k));
        acc = &(&acc * s) + &tail;
    }
    acc
}

/// Provenance of an element of `E_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// `f_m`
    F(usize),
    /// `ε_{s_m}(x_j)`
    Eps { m: usize, j: usize },
    /// the cubic invariant `w`
    W,
    /// Anything else, e.g. a deliberately wrong element in a control set.
    Custom(String),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::F(m) => write!(f, "F({m})"),
            Label::Eps { m, j } => write!(f, "EPS({m},{j})"),
            Label::W => f.write_str("W"),
            Label::Custom(s) => f.write_str(s),
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let args = |prefix: &str| -> Option<Vec<usize>> {
            let inner = s.strip_prefix(prefix)?.strip_suffix(')')?;
            inner.split(',').map(|t| t.trim().parse().ok()).collect()
        };
        if s == "W" {
            return Ok(Label::W);
        }
        if let Some(v) = args("F(") {
            if let [m] = v[..] {
                return Ok(Label::F(m));
            }
        }
        if let Some(v) = args("EPS(") {
            if let [m, j] = v[..] {
                return Ok(Label::Eps { m, j });
            }
        }
        Ok(Label::Custom(s.to_string()))
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub label: Label,
    pub poly: Polynomial,
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Element", 2)?;
        st.serialize_field("label", &self.label)?;
        st.serialize_field("poly", &self.poly)?;
        st.end()
    }
}

/// An ordered, labelled collection of invariants in `R_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatingSet {
    n: usize,
    elements: Vec<Element>,
}

impl SeparatingSet {
    /// Wraps arbitrary elements; every polynomial must live in `R_n`.
    pub fn from_elements(n: usize, elements: Vec<Element>) -> Result<Self> {
        for e in &elements {
            expect_plain(n, &e.poly)?;
        }
        Ok(SeparatingSet { n, elements })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, label: &Label) -> Option<&Polynomial> {
        self.elements.iter().find(|e| &e.label == label).map(|e| &e.poly)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.elements.iter().filter_map(|e| e.poly.total_degree()).max()
    }

    /// Values of all elements at `v`, in listing order.
    pub fn evaluate(&self, v: &RationalPoint) -> Result<Vec<Rational>> {
        v.expect_len(self.n + 1)?;
        self.elements.iter().map(|e| e.poly.eval(v)).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.elements).expect("serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let parse_err = |e: serde_json::Error| Error::Parse(e.to_string());
        let items: Vec<Value> = serde_json::from_str(text).map_err(parse_err)?;
        let mut elements = Vec::with_capacity(items.len());
        for item in items {
            let label = item
                .get("label")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("element without a label".into()))?
                .parse()?;
            let poly: Polynomial = serde_json::from_value(item.get("poly").cloned().unwrap_or(Value::Null))
                .map_err(parse_err)?;
            elements.push(Element { label, poly });
        }
        let n = elements.first().map(|e| e.poly.ring().n).unwrap_or(0);
        SeparatingSet::from_elements(n, elements)
    }
}

/// Labels of `E_n` in listing order. Cheap: nothing is expanded.
pub fn listing(n: usize) -> Vec<Label> {
    let mut labels: Vec<Label> = (0..=n / 2).map(Label::F).collect();
    labels.extend((2..=n).map(|j| Label::Eps { m: 0, j }));
    if n >= 1 {
        for m in 1..=(n - 1) / 2 {
            labels.extend((m..=n).map(|j| Label::Eps { m, j }));
        }
    }
    if n >= 4 && n % 4 == 0 {
        labels.push(Label::W);
    }
    labels
}

/// Builds `E_n` with every element fully expanded.
pub fn build_e(n: usize) -> Result<SeparatingSet> {
    if n == 0 {
        return Err(Error::out_of_range("n", 0, "n >= 1"));
    }
    let labels = listing(n);
    let rows: Vec<SliceRow> =
        (0..=(n - 1) / 2).into_par_iter().map(|m| SliceRow::new(n, m)).collect::<Result<_>>()?;
    let elements = labels
        .into_par_iter()
        .map(|label| {
            let poly = match &label {
                Label::F(m) => build_f(n, *m)?,
                Label::Eps { m, j } => rows[*m].epsilon_of_var(*j),
                Label::W => transvectant::build_w(n)?,
                Label::Custom(_) => unreachable!("listing only yields structured labels"),
            };
            Ok(Element { label, poly })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SeparatingSet { n, elements })
}

/// Shared data for one row `ε_{s_m}(x_j)`, `j = m..=n`.
struct SliceRow {
    n: usize,
    s: Polynomial,
    /// `f_m^k` for `k = 0..=n`
    f_powers: Vec<Polynomial>,
}

impl SliceRow {
    fn new(n: usize, m: usize) -> Result<Self> {
        let s = build_s(n, m)?;
        let f = build_f(n, m)?;
        Ok(SliceRow { n, s, f_powers: powers_of(&f, n) })
    }

    fn epsilon_of_var(&self, j: usize) -> Polynomial {
        let chain: Vec<Polynomial> = (0..=j).rev().map(|i| Polynomial::x(self.n, i)).collect();
        epsilon_from_chain(&self.s, &self.f_powers, &chain)
    }
}

/// Evaluates the element `label` of `E_n` at `v` straight from its defining
/// formula, without expanding it.
pub fn evaluate_element(n: usize, label: &Label, v: &RationalPoint) -> Result<Rational> {
    v.expect_len(n + 1)?;
    match label {
        Label::F(m) => build_f(n, *m)?.eval(v),
        Label::Eps { m, j } => {
            if *j > n {
                return Err(Error::out_of_range("j", *j as i64, format!("0..={n}")));
            }
            let s = build_s(n, *m)?.eval(v)?;
            let f = build_f(n, *m)?.eval(v)?;
            let mut total = Rational::zero();
            for k in 0..=*j {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                let c = Rational::from_bigints(sign.into(), factorial(k as u64))?;
                total += c * &v[j - k] * s.pow(k as u32) * f.pow((j - k) as u32);
            }
            Ok(total)
        }
        Label::W => transvectant::build_w(n)?.eval(v),
        Label::Custom(name) => Err(Error::Parse(format!("no formula for label `{name}`"))),
    }
}

/// Degree of an element of `E_n` derived from its structure rather than its
/// expansion. Every element is homogeneous; `ε_{s_m}(x_j)` has degree `2j+1`
/// (`j+1` for the linear slice `s_0`) as soon as it is nonzero, and nonzero-ness is certified by evaluation at
/// sample points. Returns `None` if no sample point certified the element
/// nonzero.
pub fn structural_degree(n: usize, label: &Label) -> Result<Option<u32>> {
    let homogeneous_degree = match label {
        Label::F(0) => 1,
        Label::F(_) => 2,
        Label::W => 3,
        Label::Eps { m: 0, j } => *j as u32 + 1,
        Label::Eps { j, .. } => 2 * *j as u32 + 1,
        Label::Custom(name) => return Err(Error::Parse(format!("no formula for label `{name}`"))),
    };
    for shift in 1..=4i64 {
        let coords: Vec<i64> = (0..=n as i64).map(|i| (i * i + shift * i + 2 * shift - 1) % 17 - 7).collect();
        if !evaluate_element(n, label, &RationalPoint::from_ints(&coords))?.is_zero() {
            return Ok(Some(homogeneous_degree));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelViolation {
    pub label: Label,
    pub image: Polynomial,
}

#[derive(Clone, Debug, Default)]
pub struct KernelReport {
    pub checked: usize,
    pub violations: Vec<KernelViolation>,
}

impl KernelReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Applies `D_n` to every element and collects those with a nonzero image.
pub fn verify_kernel_membership(set: &SeparatingSet) -> KernelReport {
    let violations = set
        .elements
        .par_iter()
        .filter_map(|e| {
            let image = derive_unchecked(W, set.n, &e.poly);
            (!image.is_zero()).then(|| KernelViolation { label: e.label.clone(), image })
        })
        .collect();
    KernelReport { checked: set.len(), violations }
}

#[derive(Clone, Debug, Default)]
pub struct StratumReport {
    /// Positive-degree elements with a term free of `x_0..x_[n/2]`.
    pub ideal_violations: Vec<Label>,
    /// Elements whose projection `π_{n-[n/2]-1,n}` is not constant.
    pub projection_violations: Vec<Label>,
}

impl StratumReport {
    pub fn passed(&self) -> bool {
        self.ideal_violations.is_empty() && self.projection_violations.is_empty()
    }
}

/// Checks the two consequences of the Hilbert-ideal radical computation on
/// every element of `set`.
pub fn check_stratum_properties(set: &SeparatingSet) -> Result<StratumReport> {
    let n = set.n;
    let half = n / 2;
    let target = n - half - 1;
    let mut report = StratumReport::default();
    for e in &set.elements {
        if !e.poly.is_constant() {
            let in_ideal = e.poly.terms().iter().all(|(m, _)| m.exponents()[..=half].iter().any(|&x| x > 0));
            if !in_ideal {
                report.ideal_violations.push(e.label.clone());
            }
        }
        if n >= 1 && !project(target, n, &e.poly)?.is_constant() {
            report.projection_violations.push(e.label.clone());
        }
    }
    Ok(report)
}

/// Values of `m` in `0..=[(n-1)/2]` for which `D_n s_m ≠ f_m`.
pub fn check_slice_identities(n: usize) -> Result<Vec<usize>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut failures = Vec::new();
    for m in 0..=(n - 1) / 2 {
        if derivation::derive(W, n, &build_s(n, m)?)? != build_f(n, m)? {
            failures.push(m);
        }
    }
    Ok(failures)
}
