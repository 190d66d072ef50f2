//! Point separation by `E_n`, exact orbit membership for the additive-group
//! action, and a randomized cross-check of `E_n` against the kernel oracle.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::derivation::flow_point;
use crate::error::{Error, Result};
use crate::oracle::KernelOracle;
use crate::poly::RationalPoint;
use crate::rational::Rational;
use crate::separating::{build_e, evaluate_element, listing, structural_degree, Label, SeparatingSet};

/// Largest `n` for which a [`Separator`] expands `E_n`; beyond it elements are
/// evaluated from their defining formulas.
pub const EXPANSION_LIMIT: usize = 12;

/// Range of sampled coordinates and flow parameters.
const SAMPLE_BOUND: i64 = 9;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub label: Label,
    pub value_v: Rational,
    pub value_w: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationVerdict {
    pub separated: bool,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug)]
enum Backend {
    Expanded(SeparatingSet),
    Formula(Vec<Label>),
}

/// Evaluates `E_n` at points; built once and reused across many queries.
#[derive(Clone, Debug)]
pub struct Separator {
    n: usize,
    backend: Backend,
}

impl Separator {
    pub fn new(n: usize) -> Result<Self> {
        let backend =
            if n <= EXPANSION_LIMIT { Backend::Expanded(build_e(n)?) } else { Backend::Formula(listing(n)) };
        Ok(Separator { n, backend })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> Vec<Label> {
        match &self.backend {
            Backend::Expanded(set) => set.elements().iter().map(|e| e.label.clone()).collect(),
            Backend::Formula(labels) => labels.clone(),
        }
    }

    fn value(&self, index: usize, v: &RationalPoint) -> Result<Rational> {
        match &self.backend {
            Backend::Expanded(set) => set.elements()[index].poly.eval(v),
            Backend::Formula(labels) => evaluate_element(self.n, &labels[index], v),
        }
    }

    fn len(&self) -> usize {
        match &self.backend {
            Backend::Expanded(set) => set.len(),
            Backend::Formula(labels) => labels.len(),
        }
    }

    pub fn values(&self, v: &RationalPoint) -> Result<Vec<Rational>> {
        v.expect_len(self.n + 1)?;
        (0..self.len()).map(|i| self.value(i, v)).collect()
    }

    /// The first element of `E_n` (in listing order) with different values.
    pub fn decide(&self, v: &RationalPoint, w: &RationalPoint) -> Result<SeparationVerdict> {
        v.expect_len(self.n + 1)?;
        w.expect_len(self.n + 1)?;
        let labels = self.labels();
        for (i, label) in labels.into_iter().enumerate() {
            let (value_v, value_w) = (self.value(i, v)?, self.value(i, w)?);
            if value_v != value_w {
                return Ok(SeparationVerdict {
                    separated: true,
                    witness: Some(Witness { label, value_v, value_w }),
                });
            }
        }
        Ok(SeparationVerdict { separated: false, witness: None })
    }
}

pub fn decide_separated(n: usize, v: &RationalPoint, w: &RationalPoint) -> Result<SeparationVerdict> {
    Separator::new(n)?.decide(v, w)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitVerdict {
    pub same_orbit: bool,
    /// `a` with `flow_point(n, a, v) = w`.
    pub translation: Option<Rational>,
}

impl OrbitVerdict {
    fn different() -> Self {
        OrbitVerdict { same_orbit: false, translation: None }
    }
}

/// Decides whether `w` lies in the orbit of `v`. The first nonzero coordinate
/// is constant along orbits and the next one moves linearly in `a`, which
/// pins down the only possible translation.
pub fn same_orbit(n: usize, v: &RationalPoint, w: &RationalPoint) -> Result<OrbitVerdict> {
    v.expect_len(n + 1)?;
    w.expect_len(n + 1)?;
    let Some(i) = (0..=n).find(|&i| !v[i].is_zero() || !w[i].is_zero()) else {
        return Ok(OrbitVerdict { same_orbit: true, translation: Some(Rational::zero()) });
    };
    if v[i] != w[i] {
        return Ok(OrbitVerdict::different());
    }
    if i == n {
        let same = v == w;
        return Ok(OrbitVerdict { same_orbit: same, translation: same.then(Rational::zero) });
    }
    let a = (&w[i + 1] - &v[i + 1]) / &v[i];
    if &flow_point(n, &a, v)? == w {
        Ok(OrbitVerdict { same_orbit: true, translation: Some(a) })
    } else {
        Ok(OrbitVerdict::different())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PairStrategy {
    /// `(v, a * v)` with `v_0 ≠ 0`.
    OrbitTranslate,
    /// Points vanishing up to index `m`, with opposite coordinate `m + 1`.
    SignFlip,
    /// Points vanishing in coordinates `0..=[n/2]`.
    NullCone,
}

impl PairStrategy {
    pub const ALL: [PairStrategy; 3] =
        [PairStrategy::OrbitTranslate, PairStrategy::SignFlip, PairStrategy::NullCone];

    fn salt(self) -> u64 {
        match self {
            PairStrategy::OrbitTranslate => 0x6f72_6269,
            PairStrategy::SignFlip => 0x7369_676e,
            PairStrategy::NullCone => 0x6e75_6c6c,
        }
    }
}

impl fmt::Display for PairStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairStrategy::OrbitTranslate => "ORBIT_TRANSLATE",
            PairStrategy::SignFlip => "SIGN_FLIP",
            PairStrategy::NullCone => "NULL_CONE",
        })
    }
}

impl FromStr for PairStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().replace('-', "_").as_str() {
            "ORBIT_TRANSLATE" => Ok(PairStrategy::OrbitTranslate),
            "SIGN_FLIP" => Ok(PairStrategy::SignFlip),
            "NULL_CONE" => Ok(PairStrategy::NullCone),
            _ => Err(Error::Parse(format!("unknown pair strategy `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointPair {
    pub v: RationalPoint,
    pub w: RationalPoint,
    /// Whether `E_n` takes equal values at `v` and `w`. Only `SIGN_FLIP` can
    /// produce unmatched pairs, when rejection sampling runs out of attempts.
    pub matched: bool,
}

/// Rejection attempts per `SIGN_FLIP` pair.
const SIGN_FLIP_ATTEMPTS: usize = 32;

fn coordinate(rng: &mut ChaCha8Rng) -> i64 {
    rng.random_range(-SAMPLE_BOUND..=SAMPLE_BOUND)
}

fn nonzero(rng: &mut ChaCha8Rng) -> i64 {
    loop {
        let x = coordinate(rng);
        if x != 0 {
            return x;
        }
    }
}

fn point(coords: &[i64]) -> RationalPoint {
    RationalPoint::from_ints(coords)
}

fn sample_pair(separator: &Separator, strategy: PairStrategy, rng: &mut ChaCha8Rng) -> Result<PointPair> {
    let n = separator.n();
    match strategy {
        PairStrategy::OrbitTranslate => {
            let mut coords: Vec<i64> = (0..=n).map(|_| coordinate(rng)).collect();
            coords[0] = nonzero(rng);
            let a = Rational::integer(nonzero(rng));
            let v = point(&coords);
            let w = flow_point(n, &a, &v)?;
            Ok(PointPair { v, w, matched: true })
        }
        PairStrategy::NullCone => {
            let mut draw =
                || -> Vec<i64> { (0..=n).map(|i| if i <= n / 2 { 0 } else { coordinate(rng) }).collect() };
            let (v, w) = (point(&draw()), point(&draw()));
            let matched = separator.values(&v)? == separator.values(&w)?;
            Ok(PointPair { v, w, matched })
        }
        PairStrategy::SignFlip => {
            let m = rng.random_range(0..n / 2);
            let mut coords = vec![0i64; n + 1];
            coords[m + 1] = nonzero(rng);
            for c in coords.iter_mut().skip(m + 2) {
                *c = coordinate(rng);
            }
            let v = point(&coords);
            let target = separator.values(&v)?;
            // First candidate: x_k ↦ (-1)^{m+k} x_k. Conjugating D by
            // x_k ↦ (-1)^k x_k gives -D, so this maps every homogeneous
            // isobaric invariant to ± itself. Then v's own tail, then random tails.
            let mut flipped: Vec<i64> =
                coords.iter().enumerate().map(|(k, &c)| if (m + k) % 2 == 0 { c } else { -c }).collect();
            let mut w = point(&flipped);
            for attempt in 0..SIGN_FLIP_ATTEMPTS {
                if attempt == 1 {
                    flipped[m + 2..].copy_from_slice(&coords[m + 2..]);
                    w = point(&flipped);
                } else if attempt > 1 {
                    for c in flipped.iter_mut().skip(m + 2) {
                        *c = coordinate(rng);
                    }
                    w = point(&flipped);
                }
                if separator.values(&w)? == target {
                    return Ok(PointPair { v, w, matched: true });
                }
            }
            Ok(PointPair { v, w, matched: false })
        }
    }
}

fn check_strategy(n: usize, strategy: PairStrategy) -> Result<()> {
    if strategy == PairStrategy::SignFlip && n < 2 {
        return Err(Error::out_of_range("n", n as i64, "n >= 2 for SIGN_FLIP"));
    }
    Ok(())
}

fn strategy_rng(strategy: PairStrategy, seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ strategy.salt())
}

/// Pairs sampled with `separator`, reproducible from `seed`.
pub fn generate_pairs_with(
    separator: &Separator,
    strategy: PairStrategy,
    count: usize,
    seed: u64,
) -> Result<Vec<PointPair>> {
    check_strategy(separator.n(), strategy)?;
    let mut rng = strategy_rng(strategy, seed);
    (0..count).map(|_| sample_pair(separator, strategy, &mut rng)).collect()
}

pub fn generate_equivalent_pairs(
    n: usize,
    strategy: PairStrategy,
    count: usize,
    seed: u64,
) -> Result<Vec<PointPair>> {
    check_strategy(n, strategy)?;
    generate_pairs_with(&Separator::new(n)?, strategy, count, seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// An invariant of degree `≤ d_max` separates the points but `E_n` does
    /// not. "`E_n` agrees ⇒ oracle agrees" and "oracle separates ⇒ `E_n`
    /// separates" are the same statement, so one kind covers both.
    Missed,
    /// An element of `E_n` of degree `≤ d_max` separates while no basis
    /// invariant of degree `≤ d_max` does.
    Witness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub strategy: PairStrategy,
    pub kind: ViolationKind,
    pub v: RationalPoint,
    pub w: RationalPoint,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrategySummary {
    pub strategy: PairStrategy,
    pub pairs: usize,
    /// Sampled pairs on which `E_n` agrees.
    pub matched: usize,
    /// Perturbed copies of the sampled pairs.
    pub controls: usize,
    pub separated_by_e: usize,
    pub separated_by_oracle: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub n: usize,
    pub d_max: u32,
    pub trials: usize,
    pub seed: u64,
    pub summaries: Vec<StrategySummary>,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

struct PairOutcome {
    e_separates: bool,
    oracle_separates: bool,
    violations: Vec<Violation>,
}

fn judge(
    separator: &Separator,
    oracle: &KernelOracle,
    degrees: &[Option<u32>],
    strategy: PairStrategy,
    v: &RationalPoint,
    w: &RationalPoint,
) -> Result<PairOutcome> {
    let verdict = separator.decide(v, w)?;
    let oracle_witness = oracle.separating_invariant(v, w)?;
    let mut violations = Vec::new();
    let violation = |kind, detail: String| Violation { strategy, kind, v: v.clone(), w: w.clone(), detail };
    if let (false, Some(p)) = (verdict.separated, oracle_witness) {
        violations
            .push(violation(ViolationKind::Missed, format!("oracle invariant {p} separates, E_n does not")));
    }
    if let (Some(witness), None) = (&verdict.witness, oracle_witness) {
        let index = separator.labels().iter().position(|l| l == &witness.label).expect("witness is listed");
        if degrees[index].is_some_and(|d| d <= oracle.d_max()) {
            let detail = format!(
                "{} separates ({} vs {}) but no invariant of degree <= {} does",
                witness.label,
                witness.value_v,
                witness.value_w,
                oracle.d_max()
            );
            violations.push(violation(ViolationKind::Witness, detail));
        }
    }
    Ok(PairOutcome { e_separates: verdict.separated, oracle_separates: oracle_witness.is_some(), violations })
}

/// Moves one random coordinate of `w` by a nonzero amount.
fn perturb(w: &RationalPoint, rng: &mut ChaCha8Rng) -> RationalPoint {
    let mut coords = w.coords().to_vec();
    let i = rng.random_range(0..coords.len());
    coords[i] += Rational::integer(nonzero(rng));
    RationalPoint::new(coords)
}

/// Samples `trials` pairs per strategy plus one perturbed control per pair,
/// and compares `E_n` against every invariant of degree `≤ d_max`.
pub fn cross_validate(n: usize, d_max: u32, trials: usize, seed: u64) -> Result<ValidationReport> {
    let separator = Separator::new(n)?;
    let oracle = KernelOracle::new(n, d_max)?;
    let degrees = separator.labels().iter().map(|l| structural_degree(n, l)).collect::<Result<Vec<_>>>()?;
    let strategies: Vec<PairStrategy> =
        PairStrategy::ALL.into_iter().filter(|&s| check_strategy(n, s).is_ok()).collect();
    let mut summaries = Vec::new();
    let mut violations = Vec::new();
    for strategy in strategies {
        let mut rng = strategy_rng(strategy, seed);
        let mut cases = Vec::with_capacity(2 * trials);
        let mut matched = 0;
        for _ in 0..trials {
            let pair = sample_pair(&separator, strategy, &mut rng)?;
            matched += pair.matched as usize;
            let control = perturb(&pair.w, &mut rng);
            cases.push((pair.v.clone(), control));
            cases.push((pair.v, pair.w));
        }
        let outcomes = cases
            .par_iter()
            .map(|(v, w)| judge(&separator, &oracle, &degrees, strategy, v, w))
            .collect::<Result<Vec<_>>>()?;
        summaries.push(StrategySummary {
            strategy,
            pairs: trials,
            matched,
            controls: trials,
            separated_by_e: outcomes.iter().filter(|o| o.e_separates).count(),
            separated_by_oracle: outcomes.iter().filter(|o| o.oracle_separates).count(),
        });
        violations.extend(outcomes.into_iter().flat_map(|o| o.violations));
    }
    Ok(ValidationReport { n, d_max, trials, seed, summaries, violations })
}
