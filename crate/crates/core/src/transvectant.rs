//! Roberts' isomorphism between covariants in `R_n[y0, y1]` and invariants
//! in `R_n`, classical transvectants, semitransvectants and the cubic
//! invariant `w` used when `n ≡ 0 mod 4`.
//!
//! The order of an isobaric invariant is taken to be its weight
//! `Σ (n - 2k) a_k`; for invariants this coincides with the nilpotency index
//! under `Δ_n`.

use crate::combinat::{binomial, factorial, falling_ratio, sign};
use crate::derivation::{
    derivative_chain, derive_unchecked, expect_plain, isobaric_weight, project, DerivationKind,
};
use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, RingDescriptor};
use crate::rational::Rational;
use crate::separating::{build_f, build_s, epsilon};

/// A polynomial in `R_n[y0, y1]` that is homogeneous in `y0, y1`. Its
/// `y`-degree is the order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Covariant {
    poly: Polynomial,
    order: u32,
}

impl Covariant {
    /// The zero polynomial is accepted with order 0.
    pub fn new(poly: Polynomial) -> Result<Self> {
        let ring = poly.ring();
        if !ring.extended {
            return Err(Error::NotExtended);
        }
        let (y0, y1) = (ring.y_index(0), ring.y_index(1));
        let y_degree = |m: &Monomial| m.exponent(y0) as u32 + m.exponent(y1) as u32;
        let order = poly.terms().first().map(|(m, _)| y_degree(m)).unwrap_or(0);
        if poly.terms().iter().any(|(m, _)| y_degree(m) != order) {
            return Err(Error::NotCovariant);
        }
        Ok(Covariant { poly, order })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn into_poly(self) -> Polynomial {
        self.poly
    }
}

/// Embeds `f ∈ R_n` into `R_n[y0, y1]`.
fn lift(f: &Polynomial) -> Polynomial {
    let ring = RingDescriptor::extended(f.ring().n);
    let terms = f
        .terms()
        .iter()
        .map(|(m, c)| (Monomial::from_exponents(m.exponents().iter().copied().chain([0, 0])), c.clone()))
        .collect();
    // Appending zero exponents preserves the order.
    Polynomial::from_sorted_unchecked(ring, terms)
}

fn y_monomial(ring: RingDescriptor, e0: u32, e1: u32) -> Monomial {
    let mut exps = vec![0u16; ring.num_vars()];
    exps[ring.y_index(0)] = e0 as u16;
    exps[ring.y_index(1)] = e1 as u16;
    Monomial::from_exponents(exps)
}

/// `Φ`: substitutes `y0 = 0`, `y1 = 1`.
pub fn roberts_forward(n: usize, cov: &Covariant) -> Result<Polynomial> {
    let ring = cov.poly.ring();
    if ring.n != n {
        return Err(Error::WrongRing { expected: n, found: ring });
    }
    let y0 = ring.y_index(0);
    let terms = cov
        .poly
        .terms()
        .iter()
        .filter(|(m, _)| m.exponent(y0) == 0)
        .map(|(m, c)| (Monomial::from_exponents(m.exponents()[..=n].iter().copied()), c.clone()));
    Polynomial::from_terms(RingDescriptor::plain(n), terms)
}

/// Order of a nonzero isobaric invariant, i.e. its weight.
pub fn order_of(n: usize, f: &Polynomial) -> Result<u32> {
    expect_plain(n, f)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !derive_unchecked(DerivationKind::Weitzenboeck, n, f).is_zero() {
        return Err(Error::NotInvariant);
    }
    match isobaric_weight(n, f)? {
        Some(w) if w >= 0 => Ok(w as u32),
        _ => Err(Error::NotIsobaric),
    }
}

/// `Φ⁻¹(f) = Σ_{i=0}^{ord f} (-1)^i Δ^i(f) / i! · y0^i y1^{ord f - i}`.
pub fn roberts_inverse(n: usize, f: &Polynomial) -> Result<Covariant> {
    let ord = order_of(n, f)?;
    let ring = RingDescriptor::extended(n);
    let mut result = Polynomial::zero(ring);
    for (i, delta_i) in
        derivative_chain(DerivationKind::Delta, n, f).iter().enumerate().take(ord as usize + 1)
    {
        let c = Rational::from_bigints(sign(i as u64).into(), factorial(i as u64))?;
        let term = lift(delta_i).mul_term(&y_monomial(ring, i as u32, ord - i as u32), &c);
        result = &result + &term;
    }
    Covariant::new(result)
}

/// `⟨F, G⟩^(r) = Σ_k (-1)^k C(r,k) ∂^r F/∂y0^{r-k}∂y1^k · ∂^r G/∂y0^k∂y1^{r-k}`.
pub fn classical_transvectant(f: &Covariant, g: &Covariant, r: u32) -> Result<Covariant> {
    let ring = f.poly.ring();
    if g.poly.ring() != ring {
        return Err(Error::RingMismatch { left: ring, right: g.poly.ring() });
    }
    let max = f.order.min(g.order);
    if r > max {
        return Err(Error::out_of_range("r", r as i64, format!("0..={max}")));
    }
    let (y0, y1) = (ring.y_index(0), ring.y_index(1));
    let mixed = |p: &Polynomial, d0: u32, d1: u32| -> Result<Polynomial> {
        let mut q = p.clone();
        for _ in 0..d0 {
            q = q.partial_derivative(y0)?;
        }
        for _ in 0..d1 {
            q = q.partial_derivative(y1)?;
        }
        Ok(q)
    };
    let mut result = Polynomial::zero(ring);
    for k in 0..=r {
        let c = Rational::integer(binomial(r as u64, k as u64) * sign(k as u64));
        let term = &mixed(&f.poly, r - k, k)? * &mixed(&g.poly, k, r - k)?;
        result = &result + &term.scale(&c);
    }
    Covariant::new(result)
}

/// `[f, g]^(r)` computed directly in `R_n`:
/// `Σ_k (-1)^k C(r,k) Δ^k(f) (ord f - k)!/(ord f - r)! · Δ^{r-k}(g) (ord g - r + k)!/(ord g - r)!`.
pub fn semitransvectant(n: usize, f: &Polynomial, g: &Polynomial, r: u32) -> Result<Polynomial> {
    let (of, og) = (order_of(n, f)?, order_of(n, g)?);
    let max = of.min(og);
    if r > max {
        return Err(Error::out_of_range("r", r as i64, format!("0..={max}")));
    }
    let zero = Polynomial::zero(f.ring());
    let delta_f = derivative_chain(DerivationKind::Delta, n, f);
    let delta_g = derivative_chain(DerivationKind::Delta, n, g);
    let at = |chain: &[Polynomial], k: u32| chain.get(k as usize).cloned().unwrap_or_else(|| zero.clone());
    let mut result = zero.clone();
    for k in 0..=r {
        let c = Rational::integer(binomial(r as u64, k as u64) * sign(k as u64))
            * falling_ratio((of - k) as u64, (of - r) as u64)
            * falling_ratio((og - r + k) as u64, (og - r) as u64);
        let term = &at(&delta_f, k) * &at(&delta_g, r - k);
        result = &result + &term.scale(&c);
    }
    Ok(result)
}

/// The raw semitransvectant `w̄ = [x_0, f_p]^(n)`, the scalar `c` with
/// `π_{n/2,n}(w̄) = c·x_0³`, and the normalised `w = w̄ / c`.
#[derive(Clone, Debug)]
pub struct WConstruction {
    pub wbar: Polynomial,
    pub scalar: Rational,
    pub w: Polynomial,
}

fn expect_multiple_of_four(n: usize) -> Result<usize> {
    if n == 0 || n % 4 != 0 {
        return Err(Error::out_of_range("n", n as i64, "a positive multiple of 4"));
    }
    Ok(n / 4)
}

pub fn construct_w(n: usize) -> Result<WConstruction> {
    let p = expect_multiple_of_four(n)?;
    let wbar = semitransvectant(n, &Polynomial::x(n, 0), &build_f(n, p)?, n as u32)?;
    let projected = project(n / 2, n, &wbar)?;
    let cube = Monomial::from_exponents([3u16].into_iter().chain(std::iter::repeat(0).take(n / 2)));
    let scalar = projected.coefficient(&cube);
    let expected = Polynomial::from_terms(projected.ring(), [(cube, scalar.clone())])?;
    if scalar.is_zero() || projected != expected {
        return Err(Error::Parse(format!("π(w̄) = {projected} is not a nonzero multiple of x0^3")));
    }
    let w = wbar.scale(&scalar.recip().expect("nonzero"));
    Ok(WConstruction { wbar, scalar, w })
}

/// The cubic invariant `w ∈ A_n` with `π_{n/2,n}(w) = x_0³`, for `n ≡ 0 mod 4`.
pub fn build_w(n: usize) -> Result<Polynomial> {
    construct_w(n).map(|c| c.w)
}

/// `Σ_{k=0}^n (-1)^k x_k D^k(g)` with `g = Δ_n^n(f_p)`.
pub fn wbar_alternate(n: usize) -> Result<Polynomial> {
    let p = expect_multiple_of_four(n)?;
    let mut g = build_f(n, p)?;
    for _ in 0..n {
        g = derive_unchecked(DerivationKind::Delta, n, &g);
    }
    let mut result = Polynomial::zero(g.ring());
    for k in 0..=n {
        let term = &Polynomial::x(n, k) * &g;
        result = if k % 2 == 0 { &result + &term } else { &result - &term };
        g = derive_unchecked(DerivationKind::Weitzenboeck, n, &g);
    }
    Ok(result)
}

/// `ε_{s_m}(x_j)` next to `[x_0, f_m^j]^(j)`, with the scalar relating them
/// when there is one.
#[derive(Clone, Debug)]
pub struct Exploration {
    pub epsilon: Polynomial,
    pub transvectant: Polynomial,
    /// `λ` with `transvectant = λ · epsilon`.
    pub scalar: Option<Rational>,
}

pub fn explore(n: usize, m: usize, j: usize) -> Result<Exploration> {
    if j > n {
        return Err(Error::out_of_range("j", j as i64, format!("0..={n}")));
    }
    let eps = epsilon(n, &build_s(n, m)?, &Polynomial::x(n, j))?;
    let power = build_f(n, m)?.pow(j as u32);
    let tv = semitransvectant(n, &Polynomial::x(n, 0), &power, j as u32)?;
    let scalar = tv.scalar_multiple_of(&eps);
    Ok(Exploration { epsilon: eps, transvectant: tv, scalar })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::derive;

    fn p(n: usize, text: &str) -> Polynomial {
        Polynomial::parse(RingDescriptor::plain(n), text).unwrap()
    }

    fn cov(n: usize, text: &str) -> Covariant {
        Covariant::new(Polynomial::parse(RingDescriptor::extended(n), text).unwrap()).unwrap()
    }

    #[test]
    fn forward_examples() {
        assert_eq!(roberts_forward(3, &cov(3, "x0*y1^3")).unwrap(), Polynomial::x(3, 0));
        assert!(roberts_forward(3, &cov(3, "x0*x1*y0 - 3*x2*y0")).unwrap().is_zero());
        let f1 = build_f(2, 1).unwrap();
        assert_eq!(roberts_forward(2, &roberts_inverse(2, &f1).unwrap()).unwrap(), f1);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(roberts_inverse(1, &Polynomial::x(1, 0)).unwrap(), cov(1, "x0*y1 - x1*y0"));
        assert_eq!(
            roberts_inverse(2, &Polynomial::x(2, 0)).unwrap(),
            cov(2, "x0*y1^2 - 2*x1*y0*y1 + 2*x2*y0^2")
        );
        let f1 = build_f(2, 1).unwrap();
        let inv = roberts_inverse(2, &f1).unwrap();
        assert_eq!(inv.order(), 0);
        assert_eq!(inv.poly(), &lift(&f1));
        assert_eq!(roberts_inverse(2, &p(2, "x0 + x0^2")), Err(Error::NotIsobaric));
        assert_eq!(roberts_inverse(2, &p(2, "x1")), Err(Error::NotInvariant));
    }

    #[test]
    fn covariant_validation() {
        let ring = RingDescriptor::extended(1);
        assert_eq!(Covariant::new(Polynomial::parse(ring, "y0 + y1^2").unwrap()), Err(Error::NotCovariant));
        assert_eq!(Covariant::new(Polynomial::x(1, 0)), Err(Error::NotExtended));
    }

    #[test]
    fn classical_examples() {
        let f = roberts_inverse(2, &Polynomial::x(2, 0)).unwrap();
        let g = cov(2, "x1*y0^2 + x2*y0*y1");
        assert_eq!(classical_transvectant(&f, &g, 0).unwrap().poly(), &(f.poly() * g.poly()));
        assert!(classical_transvectant(&f, &f, 1).unwrap().poly().is_zero());
        let second = classical_transvectant(&f, &f, 2).unwrap();
        assert_eq!(roberts_forward(2, &second).unwrap(), build_f(2, 1).unwrap().scale(&16.into()));
        assert!(classical_transvectant(&f, &f, 3).is_err());
    }

    #[test]
    fn semitransvectant_examples() {
        let x0 = Polynomial::x(2, 0);
        assert_eq!(semitransvectant(2, &x0, &x0, 2).unwrap(), p(2, "16*x0*x2 - 8*x1^2"));
        assert!(semitransvectant(2, &x0, &x0, 1).unwrap().is_zero());
        assert!(semitransvectant(2, &x0, &x0, 3).is_err());
        let x0 = Polynomial::x(4, 0);
        let f1 = build_f(4, 1).unwrap();
        let bracket = semitransvectant(4, &x0, &f1, 1).unwrap();
        let eps = epsilon(4, &build_s(4, 1).unwrap(), &Polynomial::x(4, 1)).unwrap();
        assert_eq!(bracket.scalar_multiple_of(&eps), Some((-16).into()));
    }

    #[test]
    fn w_examples() {
        let c4 = construct_w(4).unwrap();
        assert_eq!(c4.scalar, (-6912).into());
        assert_eq!(project(2, 4, &c4.w).unwrap(), p(2, "x0^3"));
        assert!(derive(DerivationKind::Weitzenboeck, 4, &c4.w).unwrap().is_zero());
        let c8 = construct_w(8).unwrap();
        assert_eq!(c8.scalar, Rational::integer(42_138_206_208_000i64));
        assert!(build_w(6).is_err());
        assert!(build_w(0).is_err());
    }

    #[test]
    fn alternate_w() {
        let alt = wbar_alternate(4).unwrap();
        assert!(derive(DerivationKind::Weitzenboeck, 4, &alt).unwrap().is_zero());
        assert_eq!(alt.scalar_multiple_of(&build_w(4).unwrap()), Some((-288).into()));
        assert!(wbar_alternate(5).is_err());
    }

    #[test]
    fn explore_known_relation() {
        let e = explore(4, 1, 1).unwrap();
        assert_eq!(e.scalar, Some((-16).into()));
        assert!(explore(4, 1, 5).is_err());
    }
}
