//! Acceptance suite. Runs every criterion in order, prints one PASS/FAIL line
//! per criterion and exits nonzero if any failed.

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use sepinv::derivation::project;
use sepinv::oracle::kernel_basis;
use sepinv::separating::{
    build_f, build_s, check_slice_identities, check_stratum_properties, epsilon, listing, structural_degree,
    verify_kernel_membership, REFERENCE_SIZES,
};
use sepinv::separation::cross_validate;
use sepinv::transvectant::{
    build_w, classical_transvectant, roberts_forward, roberts_inverse, semitransvectant, wbar_alternate,
};
use sepinv::wz::{check_recurrence, check_wz_pair, closed_form, partial_sum_s};
use sepinv::{build_e, flow_point, Polynomial, Rational, RationalPoint, SeparatingSet};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    check: Box<dyn Fn(&Shared) -> Outcome>,
}

/// `E_n` for `1 <= n <= 12`, expanded once and shared by several criteria.
struct Shared {
    sets: BTreeMap<usize, SeparatingSet>,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: sepinv::Error) -> String {
    e.to_string()
}

fn size_table(_: &Shared) -> Outcome {
    for (n, expected) in REFERENCE_SIZES {
        let got = listing(n).len();
        ensure(got == expected, || format!("|E_{n}| = {got}, expected {expected}"))?;
    }
    Ok("n = 4..20 all match".into())
}

fn kernel_membership(shared: &Shared) -> Outcome {
    let mut checked = 0;
    for (n, set) in &shared.sets {
        let report = verify_kernel_membership(set);
        ensure(report.passed(), || format!("n = {n}: {} elements with D e != 0", report.violations.len()))?;
        checked += report.checked;
    }
    Ok(format!("{checked} elements over n = 1..12"))
}

fn slice_identities(_: &Shared) -> Outcome {
    for n in 1..=20 {
        let failures = check_slice_identities(n).map_err(err)?;
        ensure(failures.is_empty(), || format!("n = {n}: D s_m != f_m for m in {failures:?}"))?;
    }
    Ok("D s_m = f_m for n <= 20".into())
}

fn degree_bound(shared: &Shared) -> Outcome {
    let mut worst = 0;
    for n in 1..=20usize {
        let degrees: Vec<Option<u32>> = listing(n)
            .par_iter()
            .map(|label| structural_degree(n, label))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        let max = degrees.iter().flatten().copied().max().unwrap_or(0);
        ensure(max as usize <= 2 * n + 1, || format!("n = {n}: max degree {max} > {}", 2 * n + 1))?;
        if let Some(set) = shared.sets.get(&n) {
            for (e, structural) in set.elements().iter().zip(&degrees) {
                ensure(e.poly.total_degree() == *structural, || {
                    format!(
                        "n = {n}, {}: expanded degree {:?} vs {structural:?}",
                        e.label,
                        e.poly.total_degree()
                    )
                })?;
            }
        }
        worst = worst.max(max as usize);
    }
    Ok(format!("max over n <= 20 is {worst}; expansions agree for n <= 12"))
}

fn cubic_w(_: &Shared) -> Outcome {
    for n in [4usize, 8, 12] {
        let w = build_w(n).map_err(err)?;
        let projected = project(n / 2, n, &w).map_err(err)?;
        let cube = Polynomial::x(n / 2, 0).pow(3);
        ensure(projected == cube, || format!("n = {n}: projection is {projected}"))?;
    }
    Ok("pi(w) = x0^3 for n = 4, 8, 12".into())
}

fn binomial_sum(_: &Shared) -> Outcome {
    for p in 1..=50 {
        ensure(partial_sum_s(p) == closed_form(p), || format!("S({p}) != closed form"))?;
    }
    for p in 1..=25 {
        ensure(check_wz_pair(p), || format!("telescoping fails at p = {p}"))?;
    }
    for p in 1..=40 {
        ensure(check_recurrence(p), || format!("recurrence fails at p = {p}"))?;
    }
    Ok("sum p <= 50, pair p <= 25, recurrence p <= 40".into())
}

fn stratum(shared: &Shared) -> Outcome {
    for (n, set) in &shared.sets {
        let report = check_stratum_properties(set).map_err(err)?;
        ensure(report.passed(), || format!("n = {n}: {report:?}"))?;
    }
    for m in 1..=6usize {
        let projected = project(m, 2 * m, &build_f(2 * m, m).map_err(err)?).map_err(err)?;
        let sign = if m % 2 == 0 { 1 } else { -1 };
        let expected = Polynomial::x(m, 0).pow(2).scale(&Rational::new(sign, 2));
        ensure(projected == expected, || format!("pi_(m,2m)(f_{m}) = {projected}"))?;
    }
    Ok("n <= 12 stratum properties; pi(f_m) for m <= 6".into())
}

fn flow_invariance(shared: &Shared) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut evaluations = 0;
    for n in 1..=8 {
        let set = &shared.sets[&n];
        for _ in 0..200 {
            let a = Rational::new(rng.random_range(-9..=9), rng.random_range(1..=5));
            let coords: Vec<i64> = (0..=n).map(|_| rng.random_range(-9..=9)).collect();
            let v = RationalPoint::from_ints(&coords);
            let moved = flow_point(n, &a, &v).map_err(err)?;
            let (before, after) = (set.evaluate(&v).map_err(err)?, set.evaluate(&moved).map_err(err)?);
            ensure(before == after, || format!("n = {n}, a = {a}, v = {v}"))?;
            evaluations += set.len();
        }
    }
    Ok(format!("{evaluations} exact evaluations agree"))
}

fn cross_validation(_: &Shared) -> Outcome {
    let mut summary = Vec::new();
    for (n, d_max, trials) in [(2usize, 6u32, 200usize), (3, 6, 200), (4, 5, 100), (5, 4, 100)] {
        let report = cross_validate(n, d_max, trials, 2024).map_err(err)?;
        ensure(report.summaries.len() == 3, || format!("n = {n}: not all strategies ran"))?;
        ensure(report.passed(), || format!("n = {n}: {:?}", report.violations.first()))?;
        let matched: usize = report.summaries.iter().map(|s| s.matched).sum();
        summary.push(format!("n={n}: {matched}/{} matched", 3 * trials));
    }
    Ok(format!("0 violations ({})", summary.join(", ")))
}

fn bridge(_: &Shared) -> Outcome {
    let mut compared = 0;
    for n in 1..=6usize {
        let candidates: Vec<Polynomial> =
            (0..=n / 2).map(|m| build_f(n, m)).collect::<Result<_, _>>().map_err(err)?;
        for f in &candidates {
            for g in &candidates {
                let (cf, cg) = (roberts_inverse(n, f).map_err(err)?, roberts_inverse(n, g).map_err(err)?);
                for r in 0..=4u32.min(cf.order()).min(cg.order()) {
                    let direct = semitransvectant(n, f, g, r).map_err(err)?;
                    let classical = classical_transvectant(&cf, &cg, r).map_err(err)?;
                    let through = roberts_forward(n, &classical).map_err(err)?;
                    ensure(direct == through, || format!("n = {n}, r = {r}: [{f}, {g}] mismatch"))?;
                    compared += 1;
                }
            }
        }
        let x0 = Polynomial::x(n, 0);
        for r in 1..=n as u32 {
            let t = semitransvectant(n, &x0, &x0, r).map_err(err)?;
            if r % 2 == 1 {
                ensure(t.is_zero(), || format!("n = {n}: [x0,x0]^({r}) = {t}"))?;
            } else {
                let f = build_f(n, r as usize / 2).map_err(err)?;
                let scalar = t.scalar_multiple_of(&f);
                ensure(scalar.is_some_and(|s| !s.is_zero()), || {
                    format!("n = {n}: [x0,x0]^({r}) not a multiple of f")
                })?;
            }
        }
        for m in 1..=(n - 1) / 2 {
            let t = semitransvectant(n, &x0, &build_f(n, m).map_err(err)?, 1).map_err(err)?;
            let e = epsilon(n, &build_s(n, m).map_err(err)?, &Polynomial::x(n, 1)).map_err(err)?;
            let scalar = t.scalar_multiple_of(&e);
            ensure(scalar.is_some_and(|s| !s.is_zero()), || {
                format!("n = {n}, m = {m}: [x0,f_m]^(1) = {t}, eps = {e}")
            })?;
        }
    }
    Ok(format!("{compared} transvectant pairs agree"))
}

fn alternate_w(_: &Shared) -> Outcome {
    let mut scalars = Vec::new();
    for n in [4usize, 8] {
        let alt = wbar_alternate(n).map_err(err)?;
        let scalar = alt.scalar_multiple_of(&build_w(n).map_err(err)?);
        match scalar {
            Some(s) if !s.is_zero() => scalars.push(format!("n={n}: {s}")),
            _ => return Err(format!("n = {n}: not a nonzero multiple")),
        }
    }
    Ok(scalars.join(", "))
}

fn oracle_sanity(_: &Shared) -> Outcome {
    for d in 1..=10 {
        let dim = kernel_basis(1, d).dim();
        ensure(dim == 1, || format!("dim(1, {d}) = {dim}"))?;
    }
    let dim = kernel_basis(2, 2).dim();
    ensure(dim == 2, || format!("dim(2, 2) = {dim}"))?;
    for n in 1..=8usize {
        let linear = kernel_basis(n, 1);
        ensure(linear.contains(&build_f(n, 0).map_err(err)?).map_err(err)?, || {
            format!("x0 not in span, n = {n}")
        })?;
        let quadratic = kernel_basis(n, 2);
        for m in 1..=n / 2 {
            let f = build_f(n, m).map_err(err)?;
            ensure(quadratic.contains(&f).map_err(err)?, || format!("f_{m} not in span, n = {n}"))?;
        }
    }
    Ok("dimensions and span membership hold".into())
}

fn criteria() -> Vec<Criterion> {
    let minutes = |m: u64| Some(Duration::from_secs(60 * m));
    let c = |id, name, limit, check: fn(&Shared) -> Outcome| Criterion {
        id,
        name,
        limit,
        check: Box::new(check),
    };
    vec![
        c(1, "size table", Some(Duration::from_secs(10)), size_table),
        c(2, "kernel membership n <= 12", minutes(5), kernel_membership),
        c(3, "local slice identities n <= 20", Some(Duration::from_secs(30)), slice_identities),
        c(4, "degree bound n <= 20", None, degree_bound),
        c(5, "cubic invariant w", minutes(2), cubic_w),
        c(6, "alternating binomial sum", minutes(1), binomial_sum),
        c(7, "null-cone stratum", None, stratum),
        c(8, "flow invariance n <= 8", None, flow_invariance),
        c(9, "separating-property cross-validation", minutes(15), cross_validation),
        c(10, "transvectant bridge", None, bridge),
        c(11, "alternate w", None, alternate_w),
        c(12, "kernel oracle sanity", None, oracle_sanity),
    ]
}

fn main() -> ExitCode {
    let start = Instant::now();
    let sets = (1..=12usize)
        .into_par_iter()
        .map(|n| build_e(n).map(|s| (n, s)))
        .collect::<Result<BTreeMap<_, _>, _>>()
        .expect("E_n builds for n <= 12");
    let setup = start.elapsed();
    println!("built E_1..E_12 in {:.2?}", setup);
    let shared = Shared { sets };
    let mut failed = 0;
    for criterion in criteria() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(|| (criterion.check)(&shared)))
            .unwrap_or_else(|_| Err("panicked".into()));
        let mut elapsed = start.elapsed();
        // The shared expansion is part of criterion 2's budget.
        if criterion.id == 2 {
            elapsed += setup;
        }
        let outcome = match (outcome, criterion.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (outcome, _) => outcome,
        };
        match outcome {
            Ok(detail) => println!("PASS [{:>2}] {} ({elapsed:.2?}): {detail}", criterion.id, criterion.name),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{:>2}] {} ({elapsed:.2?}): {detail}", criterion.id, criterion.name);
            }
        }
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
