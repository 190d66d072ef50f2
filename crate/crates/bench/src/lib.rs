//! Shared fixtures for the benchmarks.

use sepinv::separating::{build_f, build_s};
use sepinv::{Polynomial, RationalPoint};

/// A deterministic point of `ℚ^{n+1}` with small mixed-sign coordinates.
pub fn point(n: usize, salt: i64) -> RationalPoint {
    let coords: Vec<i64> = (0..=n as i64).map(|i| (i * i * 7 + salt * 13 + 3) % 19 - 9).collect();
    RationalPoint::from_ints(&coords)
}

/// `(s_m, f_m)` in `R_n`.
pub fn slice_pair(n: usize, m: usize) -> (Polynomial, Polynomial) {
    (build_s(n, m).expect("valid slice index"), build_f(n, m).expect("valid index"))
}

/// The largest element of `E_n`, by term count.
pub fn largest_element(n: usize) -> Polynomial {
    let set = sepinv::build_e(n).expect("n >= 1");
    set.elements().iter().max_by_key(|e| e.poly.len()).map(|e| e.poly.clone()).expect("E_n is nonempty")
}
