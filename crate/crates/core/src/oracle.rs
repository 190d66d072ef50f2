//! Brute-force kernel of `D_n` on a single graded component.
//!
//! The matrix of `D_n` on degree-`d` forms is built straight from exponent
//! arithmetic, independently of [`crate::derivation`], and its nullspace is
//! found by fraction-free (Bareiss) elimination over the integers followed by
//! rational back-substitution.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, RationalPoint, RingDescriptor};
use crate::rational::Rational;

/// All monomials of total degree `d` in `x_0..x_n`, in canonical (descending) order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComponent {
    pub n: usize,
    pub d: u32,
    pub monomials: Vec<Monomial>,
}

impl GradedComponent {
    pub fn new(n: usize, d: u32) -> Self {
        let mut monomials = Vec::new();
        let mut exps = vec![0u16; n + 1];
        fill(&mut exps, 0, d, &mut monomials);
        monomials.sort_unstable_by(|a, b| b.cmp(a));
        GradedComponent { n, d, monomials }
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    fn index(&self) -> FxHashMap<&Monomial, usize> {
        self.monomials.iter().enumerate().map(|(i, m)| (m, i)).collect()
    }
}

fn fill(exps: &mut [u16], pos: usize, left: u32, out: &mut Vec<Monomial>) {
    if pos + 1 == exps.len() {
        exps[pos] = left as u16;
        out.push(Monomial::from_exponents(exps.iter().copied()));
        return;
    }
    for e in 0..=left {
        exps[pos] = e as u16;
        fill(exps, pos + 1, left - e, out);
    }
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn rank(&self) -> usize {
        echelon(self.clone()).pivots.len()
    }
}

/// Matrix of `D_n` on the degree-`d` component; column `j` holds the image of
/// the `j`-th monomial.
pub fn derivation_matrix(n: usize, d: u32) -> (GradedComponent, IntMatrix) {
    let component = GradedComponent::new(n, d);
    let index = component.index();
    let size = component.dim();
    let mut matrix = IntMatrix::zeros(size, size);
    for (col, m) in component.monomials.iter().enumerate() {
        let exps = m.exponents();
        for k in 1..=n {
            if exps[k] == 0 {
                continue;
            }
            let mut image = exps.to_vec();
            image[k] -= 1;
            image[k - 1] += 1;
            let row = index[&Monomial::from_exponents(image)];
            matrix.data[row][col] += exps[k] as i64;
        }
    }
    (component, matrix)
}

struct Echelon {
    matrix: IntMatrix,
    pivots: Vec<usize>,
}

/// Bareiss fraction-free row reduction to row echelon form. Every
/// intermediate division is exact.
fn echelon(mut a: IntMatrix) -> Echelon {
    let mut pivots = Vec::new();
    let mut prev = BigInt::from(1);
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(found) = (row..a.rows).find(|&r| !a.data[r][col].is_zero()) else {
            continue;
        };
        a.data.swap(row, found);
        let pivot_row = a.data[row].clone();
        let pivot = pivot_row[col].clone();
        for r in row + 1..a.rows {
            let factor = std::mem::take(&mut a.data[r][col]);
            if factor.is_zero() {
                for cell in &mut a.data[r][col + 1..] {
                    *cell = &*cell * &pivot / &prev;
                }
                continue;
            }
            for (cell, p) in a.data[r][col + 1..].iter_mut().zip(&pivot_row[col + 1..]) {
                *cell = (&*cell * &pivot - &factor * p) / &prev;
            }
        }
        prev = pivot;
        pivots.push(col);
        row += 1;
    }
    Echelon { matrix: a, pivots }
}

/// Rational nullspace vectors, one per free column. The vector for free
/// column `f` has a 1 there and 0 at every other free column.
fn nullspace(a: IntMatrix) -> Vec<Vec<Rational>> {
    let cols = a.cols;
    let Echelon { matrix, pivots } = echelon(a);
    let is_pivot: Vec<bool> = (0..cols).map(|c| pivots.contains(&c)).collect();
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut x = vec![Rational::zero(); cols];
            x[free] = Rational::one();
            for (i, &p) in pivots.iter().enumerate().rev() {
                let row = &matrix.data[i];
                let s: Rational = (p + 1..cols)
                    .filter(|&j| !row[j].is_zero() && !x[j].is_zero())
                    .map(|j| Rational::integer(row[j].clone()) * &x[j])
                    .sum();
                x[p] = -(s / Rational::integer(row[p].clone()));
            }
            x
        })
        .collect()
}

/// Basis of the degree-`d` part of `ker D_n`, each element scaled so that its
/// leading coefficient is 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelBasis {
    pub n: usize,
    pub d: u32,
    pub basis: Vec<Polynomial>,
}

impl KernelBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Whether `f` is a `ℚ`-linear combination of the basis.
    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        in_span(&self.basis, f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialization is infallible")
    }
}

pub fn kernel_basis(n: usize, d: u32) -> KernelBasis {
    let (component, matrix) = derivation_matrix(n, d);
    let ring = RingDescriptor::plain(n);
    let basis = nullspace(matrix)
        .into_iter()
        .map(|x| {
            let terms = component.monomials.iter().cloned().zip(x).filter(|(_, c)| !c.is_zero());
            let p = Polynomial::from_terms(ring, terms).expect("component monomials fit the ring");
            let lead = p.leading_term().expect("nullspace vectors are nonzero").1.clone();
            p.scale(&lead.recip().expect("leading coefficient is nonzero"))
        })
        .collect();
    KernelBasis { n, d, basis }
}

/// Rank of a list of rational row vectors.
fn rational_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(found) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, found);
        let pivot = rows[rank][col].clone();
        let pivot_row = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pivot;
            for c in col..cols {
                let v = &row[c] - &(&factor * &pivot_row[c]);
                row[c] = v;
            }
        }
        rank += 1;
    }
    rank
}

/// Whether `f` lies in the `ℚ`-span of `basis`.
pub fn in_span(basis: &[Polynomial], f: &Polynomial) -> Result<bool> {
    if f.is_zero() {
        return Ok(true);
    }
    let ring = f.ring();
    if let Some(other) = basis.iter().find(|b| b.ring() != ring) {
        return Err(Error::RingMismatch { left: other.ring(), right: ring });
    }
    let mut index: FxHashMap<&Monomial, usize> = FxHashMap::default();
    for p in basis.iter().chain([f]) {
        for (m, _) in p.terms() {
            let next = index.len();
            index.entry(m).or_insert(next);
        }
    }
    let vector = |p: &Polynomial| {
        let mut v = vec![Rational::zero(); index.len()];
        for (m, c) in p.terms() {
            v[index[m]] = c.clone();
        }
        v
    };
    let rows: Vec<_> = basis.iter().map(vector).collect();
    let base = rational_rank(rows.clone());
    let mut extended = rows;
    extended.push(vector(f));
    Ok(rational_rank(extended) == base)
}

/// Kernel bases for every degree `1..=d_max`, evaluated on demand.
#[derive(Clone, Debug)]
pub struct KernelOracle {
    n: usize,
    d_max: u32,
    bases: Vec<KernelBasis>,
}

impl KernelOracle {
    pub fn new(n: usize, d_max: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::out_of_range("n", 0, "n >= 1"));
        }
        if d_max == 0 {
            return Err(Error::out_of_range("d_max", 0, "d_max >= 1"));
        }
        let bases = (1..=d_max).into_par_iter().map(|d| kernel_basis(n, d)).collect();
        Ok(KernelOracle { n, d_max, bases })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d_max(&self) -> u32 {
        self.d_max
    }

    pub fn bases(&self) -> &[KernelBasis] {
        &self.bases
    }

    /// Values of every basis element at `v`, degree by degree.
    pub fn values(&self, v: &RationalPoint) -> Result<Vec<Rational>> {
        v.expect_len(self.n + 1)?;
        self.bases.iter().flat_map(|b| &b.basis).map(|p| p.eval(v)).collect()
    }

    /// A basis invariant of lowest degree taking different values at `v` and `w`.
    pub fn separating_invariant(&self, v: &RationalPoint, w: &RationalPoint) -> Result<Option<&Polynomial>> {
        v.expect_len(self.n + 1)?;
        w.expect_len(self.n + 1)?;
        for p in self.bases.iter().flat_map(|b| &b.basis) {
            if p.eval(v)? != p.eval(w)? {
                return Ok(Some(p));
            }
        }
        Ok(None)
    }

    /// True iff no invariant of degree `≤ d_max` distinguishes `v` and `w`.
    pub fn equivalent(&self, v: &RationalPoint, w: &RationalPoint) -> Result<bool> {
        Ok(self.separating_invariant(v, w)?.is_none())
    }
}

pub fn oracle_equivalent(n: usize, d_max: u32, v: &RationalPoint, w: &RationalPoint) -> Result<bool> {
    KernelOracle::new(n, d_max)?.equivalent(v, w)
}

/// Largest absolute entry, handy when reporting matrix growth.
pub fn max_entry(matrix: &IntMatrix) -> BigInt {
    matrix.data.iter().flatten().map(|x| x.abs()).max().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::{derive, DerivationKind};
    use crate::separating::build_f;

    #[test]
    fn component_sizes() {
        assert_eq!(GradedComponent::new(2, 2).dim(), 6);
        assert_eq!(GradedComponent::new(4, 5).dim(), 126);
        let c = GradedComponent::new(1, 2);
        let names: Vec<_> = c.monomials.iter().map(|m| m.exponents().to_vec()).collect();
        assert_eq!(names, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn matrix_ranks() {
        assert_eq!(derivation_matrix(1, 1).1.rank(), 1);
        assert_eq!(derivation_matrix(2, 1).1.rank(), 2);
        assert_eq!(derivation_matrix(2, 2).1.rank(), 4);
    }

    #[test]
    fn known_dimensions() {
        for d in 1..=10 {
            let b = kernel_basis(1, d);
            assert_eq!(b.dim(), 1);
            assert_eq!(b.basis[0], Polynomial::x(1, 0).pow(d));
        }
        assert_eq!(kernel_basis(2, 2).dim(), 2);
        let cubic = kernel_basis(2, 3);
        assert_eq!(cubic.dim(), 2);
        let f1 = build_f(2, 1).unwrap();
        assert!(cubic.contains(&(&Polynomial::x(2, 0) * &f1)).unwrap());
        assert!(!cubic.contains(&Polynomial::x(2, 1).pow(3)).unwrap());
    }

    #[test]
    fn basis_elements_are_invariant() {
        for n in 1..=4 {
            for d in 1..=4 {
                for b in kernel_basis(n, d).basis {
                    assert!(derive(DerivationKind::Weitzenboeck, n, &b).unwrap().is_zero());
                    assert!(b.leading_term().unwrap().1.is_one());
                }
            }
        }
    }

    #[test]
    fn quadratic_invariants_in_span() {
        for n in 2..=6 {
            assert!(kernel_basis(n, 1).contains(&build_f(n, 0).unwrap()).unwrap());
            let basis = kernel_basis(n, 2);
            for m in 1..=n / 2 {
                assert!(basis.contains(&build_f(n, m).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn equivalence_examples() {
        let p = RationalPoint::from_ints;
        assert!(oracle_equivalent(2, 4, &p(&[0, 0, 1]), &p(&[0, 0, 2])).unwrap());
        assert!(!oracle_equivalent(2, 2, &p(&[1, 0, 0]), &p(&[1, 0, 1])).unwrap());
        assert!(oracle_equivalent(3, 3, &p(&[1, 2, 3, 4]), &p(&[1, 2, 3, 4])).unwrap());
        assert!(oracle_equivalent(2, 0, &p(&[0, 0, 1]), &p(&[0, 0, 1])).is_err());
    }

    #[test]
    fn bareiss_matches_small_rank() {
        let mut m = IntMatrix::zeros(3, 3);
        for (i, row) in [[2, 4, 6], [1, 2, 3], [0, 1, 5]].iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.data[i][j] = v.into();
            }
        }
        assert_eq!(m.rank(), 2);
        assert_eq!(max_entry(&m), BigInt::from(6));
    }
}
