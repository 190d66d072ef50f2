//! Deterministic sweeps over the construction, the transvectant engine, the
//! oracle and the separation engine.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sepinv::derivation::{derive, isobaric_weight, nilpotency_index, DerivationKind, Nilpotency};
use sepinv::oracle::kernel_basis;
use sepinv::separating::{build_f, build_s, epsilon, Label};
use sepinv::separation::{decide_separated, generate_pairs_with, same_orbit, PairStrategy, Separator};
use sepinv::transvectant::{build_w, roberts_forward, roberts_inverse, semitransvectant};
use sepinv::wz::{boundary_account, closed_form};
use sepinv::{build_e, flow_point, Polynomial, Rational, RationalPoint};

const W: DerivationKind = DerivationKind::Weitzenboeck;

#[test]
fn f_m_invariant_and_isobaric() {
    for n in 1..=20usize {
        for m in 0..=n / 2 {
            let f = build_f(n, m).unwrap();
            assert!(derive(W, n, &f).unwrap().is_zero(), "n={n} m={m}");
        }
    }
    for n in 1..=10usize {
        for m in 0..=n / 2 {
            let f = build_f(n, m).unwrap();
            let weight = isobaric_weight(n, &f).unwrap().unwrap();
            let index = nilpotency_index(DerivationKind::Delta, n, &f).unwrap();
            assert_eq!(index, Nilpotency::Index(weight as u32), "n={n} m={m}");
        }
    }
    for p in 1..=3usize {
        assert_eq!(isobaric_weight(4 * p, &build_f(4 * p, p).unwrap()).unwrap(), Some(4 * p as i64));
    }
}

#[test]
fn first_slice_element_factors() {
    for n in 2..=9usize {
        let e = epsilon(n, &build_s(n, 0).unwrap(), &Polynomial::x(n, 2)).unwrap();
        assert_eq!(e, &Polynomial::x(n, 0) * &build_f(n, 1).unwrap());
    }
}

#[test]
fn sets_are_flow_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in 1..=6usize {
        let set = build_e(n).unwrap();
        for _ in 0..25 {
            let a = Rational::new(rng.random_range(-9..=9), rng.random_range(1..=4));
            let coords: Vec<i64> = (0..=n).map(|_| rng.random_range(-9..=9)).collect();
            let v = RationalPoint::from_ints(&coords);
            let moved = flow_point(n, &a, &v).unwrap();
            assert_eq!(set.evaluate(&v).unwrap(), set.evaluate(&moved).unwrap());
        }
    }
}

#[test]
fn null_cone_points_annihilate_positive_degree_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=8usize {
        let set = build_e(n).unwrap();
        for _ in 0..10 {
            let coords: Vec<i64> =
                (0..=n).map(|i| if i <= n / 2 { 0 } else { rng.random_range(-9..=9) }).collect();
            let v = RationalPoint::from_ints(&coords);
            for e in set.elements() {
                if !e.poly.is_constant() {
                    assert!(e.poly.eval(&v).unwrap().is_zero(), "n={n} {} at {v}", e.label);
                }
            }
        }
    }
}

#[test]
fn roberts_round_trip_and_kernel_closure() {
    for n in 1..=8usize {
        let candidates: Vec<Polynomial> = (0..=n / 2).map(|m| build_f(n, m).unwrap()).collect();
        for f in &candidates {
            assert_eq!(&roberts_forward(n, &roberts_inverse(n, f).unwrap()).unwrap(), f);
        }
        let x0 = Polynomial::x(n, 0);
        for g in &candidates {
            for r in 0..=3u32 {
                if let Ok(t) = semitransvectant(n, &x0, g, r) {
                    assert!(derive(W, n, &t).unwrap().is_zero(), "n={n} r={r}");
                }
            }
        }
        for m in 1..=n / 2 {
            let t = semitransvectant(n, &x0, &x0, 2 * m as u32).unwrap();
            let scalar = t.scalar_multiple_of(&build_f(n, m).unwrap()).unwrap();
            assert!(!scalar.is_zero());
        }
    }
}

#[test]
fn w_is_invariant_for_n_up_to_12() {
    for n in [4usize, 8, 12] {
        assert!(derive(W, n, &build_w(n).unwrap()).unwrap().is_zero());
    }
}

#[test]
fn oracle_bases_are_invariant() {
    for n in 1..=5usize {
        for d in 1..=6u32 {
            for b in kernel_basis(n, d).basis {
                assert!(derive(W, n, &b).unwrap().is_zero(), "n={n} d={d}");
            }
        }
    }
}

#[test]
fn slice_elements_lie_in_oracle_span() {
    for n in 1..=4usize {
        let set = build_e(n).unwrap();
        for e in set.elements() {
            if let Label::Eps { .. } = e.label {
                let d = e.poly.total_degree().unwrap();
                assert!(kernel_basis(n, d).contains(&e.poly).unwrap(), "n={n} {}", e.label);
            }
        }
    }
}

#[test]
fn orbits_are_never_separated() {
    for n in 1..=6usize {
        let separator = Separator::new(n).unwrap();
        for pair in generate_pairs_with(&separator, PairStrategy::OrbitTranslate, 20, n as u64).unwrap() {
            let orbit = same_orbit(n, &pair.v, &pair.w).unwrap();
            assert!(orbit.same_orbit);
            let a = orbit.translation.unwrap();
            assert_eq!(flow_point(n, &a, &pair.v).unwrap(), pair.w);
            assert!(!separator.decide(&pair.v, &pair.w).unwrap().separated);
        }
    }
}

#[test]
fn separation_is_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for n in 1..=5usize {
        let separator = Separator::new(n).unwrap();
        for _ in 0..20 {
            let mut draw =
                || RationalPoint::from_ints(&(0..=n).map(|_| rng.random_range(-3..=3)).collect::<Vec<_>>());
            let (v, w) = (draw(), draw());
            let forward = separator.decide(&v, &w).unwrap();
            let backward = separator.decide(&w, &v).unwrap();
            assert_eq!(forward.separated, backward.separated);
            if let (Some(a), Some(b)) = (forward.witness, backward.witness) {
                assert_eq!(a.label, b.label);
                assert_eq!((a.value_v, a.value_w), (b.value_w, b.value_v));
            }
            assert!(!separator.decide(&v, &v).unwrap().separated);
        }
    }
}

#[test]
fn orbit_gap_on_the_null_cone() {
    let (v, w) = (RationalPoint::from_ints(&[0, 1, 0]), RationalPoint::from_ints(&[0, -1, 0]));
    assert!(!same_orbit(2, &v, &w).unwrap().same_orbit);
    assert!(!decide_separated(2, &v, &w).unwrap().separated);
    assert!(sepinv::oracle::oracle_equivalent(2, 6, &v, &w).unwrap());
}

#[test]
fn formula_backend_agrees_with_expansion() {
    // Separator switches to formula evaluation above the expansion limit;
    // compare both routes where they overlap.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [7usize, 9] {
        let set = build_e(n).unwrap();
        for _ in 0..3 {
            let coords: Vec<i64> = (0..=n).map(|_| rng.random_range(-9..=9)).collect();
            let v = RationalPoint::from_ints(&coords);
            for e in set.elements() {
                let direct = sepinv::separating::evaluate_element(n, &e.label, &v).unwrap();
                assert_eq!(direct, e.poly.eval(&v).unwrap(), "n={n} {}", e.label);
            }
        }
    }
}

#[test]
fn closed_form_is_integral_and_bookkeeping_closes() {
    for p in 0..=60 {
        assert!(closed_form(p).is_integer());
    }
    for p in 1..=25 {
        assert!(boundary_account(p).residual().is_zero(), "p={p}");
    }
}
