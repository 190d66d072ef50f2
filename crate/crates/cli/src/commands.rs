use std::fmt;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use serde_json::{json, Value};

use sepinv::derivation::project;
use sepinv::oracle::kernel_basis;
use sepinv::separating::{
    check_slice_identities, check_stratum_properties, listing, verify_kernel_membership, REFERENCE_SIZES,
};
use sepinv::separation::{cross_validate, decide_separated, same_orbit};
use sepinv::transvectant::{build_w, explore as explore_pair};
use sepinv::wz::{boundary_account, closed_form, partial_sum_s, recurrence_residual, wz_residual};
use sepinv::{build_e, Polynomial, Rational, RationalPoint};

use crate::WzMode;

pub enum Failure {
    Usage(String),
    Io(io::Error),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) => f.write_str(msg),
            Failure::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<sepinv::Error> for Failure {
    fn from(e: sepinv::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// A command result in both renderings. `passed` is false when a
/// mathematical check failed.
pub struct Output {
    pub json: String,
    pub pretty: String,
    pub passed: bool,
}

impl Output {
    fn new(json: Value, pretty: String, passed: bool) -> Self {
        Output { json: json.to_string(), pretty: pretty.trim_end().to_string(), passed }
    }
}

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn checks_output(head: Value, checks: &[Check]) -> Output {
    let passed = checks.iter().all(|c| c.passed);
    let mut pretty = String::new();
    for c in checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        writeln!(pretty, "{mark} {}: {}", c.name, c.detail).unwrap();
    }
    let list: Vec<Value> =
        checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect();
    let mut json = head;
    json["checks"] = Value::Array(list);
    json["passed"] = Value::Bool(passed);
    Output::new(json, pretty, passed)
}

pub fn gen(n: usize) -> Result<Output, Failure> {
    let set = build_e(n)?;
    let mut pretty = String::new();
    for e in set.elements() {
        writeln!(pretty, "{} = {}", e.label, e.poly).unwrap();
    }
    Ok(Output { json: set.to_json(), pretty: pretty.trim_end().to_string(), passed: true })
}

pub fn verify(n: usize) -> Result<Output, Failure> {
    let set = build_e(n)?;
    let mut checks = Vec::new();

    let kernel = verify_kernel_membership(&set);
    let labels = |ls: Vec<String>| if ls.is_empty() { String::new() } else { format!(": {}", ls.join(", ")) };
    checks.push(Check {
        name: "kernel membership",
        passed: kernel.passed(),
        detail: format!(
            "{} elements, {} with D e != 0{}",
            kernel.checked,
            kernel.violations.len(),
            labels(kernel.violations.iter().map(|v| v.label.to_string()).collect())
        ),
    });

    let stratum = check_stratum_properties(&set)?;
    let mut bad: Vec<String> = stratum.ideal_violations.iter().map(|l| format!("{l} (ideal)")).collect();
    bad.extend(stratum.projection_violations.iter().map(|l| format!("{l} (projection)")));
    checks.push(Check {
        name: "null-cone stratum",
        passed: stratum.passed(),
        detail: format!("{} violations{}", bad.len(), labels(bad)),
    });

    let max = set.max_degree().unwrap_or(0);
    let bound = 2 * n as u32 + 1;
    checks.push(Check {
        name: "degree bound",
        passed: max <= bound,
        detail: format!("max degree {max}, bound {bound}"),
    });

    let slices = check_slice_identities(n)?;
    checks.push(Check {
        name: "local slices",
        passed: slices.is_empty(),
        detail: if slices.is_empty() {
            format!("D s_m = f_m for m <= {}", (n - 1) / 2)
        } else {
            format!("fails for m in {slices:?}")
        },
    });

    if n % 4 == 0 {
        let projected = project(n / 2, n, &build_w(n)?)?;
        let cube = Polynomial::x(n / 2, 0).pow(3);
        checks.push(Check {
            name: "cubic invariant",
            passed: projected == cube,
            detail: format!("projection of w is {projected}"),
        });
    }
    Ok(checks_output(json!({"n": n, "size": set.len()}), &checks))
}

fn parse_point(n: usize, text: &str) -> Result<RationalPoint, Failure> {
    let point = RationalPoint::from_json(text)?;
    point.expect_len(n + 1)?;
    Ok(point)
}

pub fn separate(n: usize, v: &str, w: &str) -> Result<Output, Failure> {
    let (v, w) = (parse_point(n, v)?, parse_point(n, w)?);
    let verdict = decide_separated(n, &v, &w)?;
    let pretty = match &verdict.witness {
        Some(wit) => format!("separated by {}: {} vs {}", wit.label, wit.value_v, wit.value_w),
        None => "not separated".to_string(),
    };
    Ok(Output::new(json!(verdict), pretty, true))
}

pub fn orbit(n: usize, v: &str, w: &str) -> Result<Output, Failure> {
    let (v, w) = (parse_point(n, v)?, parse_point(n, w)?);
    let verdict = same_orbit(n, &v, &w)?;
    let pretty = match &verdict.translation {
        Some(a) => format!("same orbit, a = {a}"),
        None => "different orbits".to_string(),
    };
    Ok(Output::new(json!(verdict), pretty, true))
}

pub fn wz(p: u64, mode: WzMode) -> Result<Output, Failure> {
    if p == 0 {
        return Err(Failure::Usage("--p must be at least 1".into()));
    }
    let wants = |m| mode == m || mode == WzMode::All;
    let mut checks = Vec::new();
    if wants(WzMode::Sum) {
        let (s, c) = (partial_sum_s(p), closed_form(p));
        checks.push(Check {
            name: "sum",
            passed: s == c,
            detail: format!("S = {s}, closed form = {c}, residual {}", &s - &c),
        });
    }
    if wants(WzMode::Pair) {
        let mut failing = Vec::new();
        for k in 0..2 * p as i64 {
            let r = wz_residual(p, k)?;
            if !r.is_zero() {
                failing.push(format!("k = {k}: {r}"));
            }
        }
        checks.push(Check {
            name: "pair",
            passed: failing.is_empty(),
            detail: if failing.is_empty() {
                format!("residual 0 for 0 <= k <= {}", 2 * p - 1)
            } else {
                failing.join("; ")
            },
        });
    }
    if wants(WzMode::Recurrence) {
        let r = recurrence_residual(p);
        checks.push(Check { name: "recurrence", passed: r.is_zero(), detail: format!("residual {r}") });
    }
    if mode == WzMode::All {
        let account = boundary_account(p);
        let r = account.residual();
        checks.push(Check {
            name: "boundary",
            passed: r.is_zero(),
            detail: format!(
                "telescoped {} + remaining {} - recurrence {} = {r}",
                account.telescoped, account.remaining, account.recurrence_lhs
            ),
        });
    }
    Ok(checks_output(json!({"p": p}), &checks))
}

pub fn kernel(n: usize, d: u32, dump: Option<&Path>) -> Result<Output, Failure> {
    if n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    let basis = kernel_basis(n, d);
    let json = basis.to_json();
    if let Some(path) = dump {
        fs::write(path, format!("{json}\n")).map_err(Failure::Io)?;
    }
    let mut pretty = format!("dim = {}\n", basis.dim());
    for b in &basis.basis {
        writeln!(pretty, "{b}").unwrap();
    }
    Ok(Output { json, pretty: pretty.trim_end().to_string(), passed: true })
}

pub fn table(max: usize) -> Result<Output, Failure> {
    if max < 4 {
        return Err(Failure::Usage("--max must be at least 4".into()));
    }
    let mut rows = Vec::new();
    let mut pretty = String::from("n     |E_n|  reference\n");
    let mut passed = true;
    for n in 4..=max {
        let size = listing(n).len();
        let reference = REFERENCE_SIZES.iter().find(|(m, _)| *m == n).map(|(_, s)| *s);
        let status = match reference {
            Some(r) if r == size => "match",
            Some(_) => "mismatch",
            None => "unreferenced",
        };
        passed &= status != "mismatch";
        let shown = reference.map_or("-".to_string(), |r| r.to_string());
        writeln!(pretty, "{n:<5} {size:<6} {shown:<9}  {status}").unwrap();
        rows.push(json!({"n": n, "size": size, "reference": reference, "status": status}));
    }
    Ok(Output::new(json!({"rows": rows, "passed": passed}), pretty, passed))
}

fn default_dmax(n: usize) -> u32 {
    match n {
        0..=3 => 6,
        4 => 5,
        5 => 4,
        _ => 3,
    }
}

pub fn validate(n: usize, dmax: Option<u32>, trials: usize, seed: u64) -> Result<Output, Failure> {
    let d_max = dmax.unwrap_or_else(|| default_dmax(n));
    let report = cross_validate(n, d_max, trials, seed)?;
    let mut pretty = format!("n = {n}, d_max = {d_max}, trials = {trials}, seed = {seed}\n");
    for s in &report.summaries {
        writeln!(
            pretty,
            "{:<16} pairs {:>4}  matched {:>4}  controls {:>4}  separated: E_n {:>4}, oracle {:>4}",
            s.strategy.to_string(),
            s.pairs,
            s.matched,
            s.controls,
            s.separated_by_e,
            s.separated_by_oracle
        )
        .unwrap();
    }
    writeln!(pretty, "violations: {}", report.violations.len()).unwrap();
    for v in &report.violations {
        writeln!(pretty, "  {} {:?} v = {} w = {}: {}", v.strategy, v.kind, v.v, v.w, v.detail).unwrap();
    }
    let passed = report.passed();
    Ok(Output::new(json!(report), pretty, passed))
}

pub fn explore(n: usize, m: usize, j: usize) -> Result<Output, Failure> {
    let found = explore_pair(n, m, j)?;
    let relation = match &found.scalar {
        Some(s) => format!("[x0, f_{m}^{j}]^({j}) = {s} * eps"),
        None => "no scalar relation".to_string(),
    };
    let pretty = format!(
        "eps_s{m}(x{j}) = {}\n[x0, f_{m}^{j}]^({j}) = {}\n{relation}",
        found.epsilon, found.transvectant
    );
    let scalar: Option<&Rational> = found.scalar.as_ref();
    let json = json!({
        "n": n, "m": m, "j": j,
        "epsilon": found.epsilon,
        "transvectant": found.transvectant,
        "scalar": scalar,
    });
    Ok(Output::new(json, pretty, true))
}
