//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use aflt::cli::{run_suite, SuiteConfig, VerificationReport};

struct Criterion {
    id: u32,
    title: &'static str,
    suites: &'static [&'static str],
    /// Budget for each suite on its own (`per_suite`) or for the whole group.
    budget: Duration,
    per_suite: bool,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        title: "Cauchy, skew sum, limiting skew sum, evaluation symmetries (exact)",
        suites: &["cauchy", "skew-sum", "skew-sum-limit", "eval-sym"],
        budget: Duration::from_secs(60),
        per_suite: true,
    },
    Criterion {
        id: 2,
        title: "A_n Cauchy identities, variants I and II (exact)",
        suites: &["an-cauchy"],
        budget: Duration::from_secs(300),
        per_suite: false,
    },
    Criterion {
        id: 3,
        title: "AFLT integral at n = 1 by quadrature",
        suites: &["aflt"],
        budget: Duration::from_secs(120),
        per_suite: false,
    },
    Criterion {
        id: 4,
        title: "A_n chain integrals at n = 2",
        suites: &["an-selberg", "an-aflt", "an-alt"],
        budget: Duration::from_secs(600),
        per_suite: false,
    },
    Criterion {
        id: 5,
        title: "gamma = 1 complex theorems",
        suites: &["complex-schur", "beta-schur", "complex-an", "nplusone"],
        budget: Duration::from_secs(300),
        per_suite: false,
    },
    Criterion {
        id: 6,
        title: "Macdonald AFLT and orthogonality on the torus",
        suites: &["mac-aflt", "mac-ortho"],
        budget: Duration::from_secs(300),
        per_suite: false,
    },
    Criterion {
        id: 7,
        title: "elliptic integrals, Jackson sum, connection coefficients, p -> 0 limit",
        suites: &["elliptic-beta", "elliptic-aflt", "jackson", "connection", "mac-limit"],
        budget: Duration::from_secs(600),
        per_suite: false,
    },
    Criterion {
        id: 8,
        title: "R-function recursion, failing guess, hypergeometric displays",
        suites: &["recursion", "guess", "companion"],
        budget: Duration::from_secs(600),
        per_suite: false,
    },
    Criterion {
        id: 9,
        title: "bifundamental product against the Selberg average",
        suites: &["zbifund"],
        budget: Duration::from_secs(300),
        per_suite: false,
    },
    Criterion {
        id: 10,
        title: "padding, duality, guards, chain coverage, radius independence",
        suites: &["properties"],
        budget: Duration::from_secs(600),
        per_suite: false,
    },
];

fn run_criterion(c: &Criterion) -> (bool, String) {
    let start = Instant::now();
    let mut cases = 0;
    let mut failures: Vec<VerificationReport> = Vec::new();
    let mut slow = Vec::new();
    for suite in c.suites {
        let t0 = Instant::now();
        let cfg = SuiteConfig { seed: 7, ..SuiteConfig::for_suite(suite) };
        match run_suite(&cfg) {
            Ok(reports) => {
                cases += reports.len();
                failures.extend(reports.into_iter().filter(|r| !r.pass));
            }
            Err(e) => return (false, format!("{suite}: {e}")),
        }
        let dt = t0.elapsed();
        if c.per_suite && dt > c.budget {
            slow.push(format!("{suite} took {:.1}s", dt.as_secs_f64()));
        }
    }
    let total = start.elapsed();
    if !c.per_suite && total > c.budget {
        slow.push(format!("took {:.1}s", total.as_secs_f64()));
    }
    let mut detail = format!("{cases} cases in {:.1}s", total.as_secs_f64());
    for f in failures.iter().take(5) {
        detail.push_str(&format!("\n    failed {} / {}: rel_err {:e} (tol {:e}) {}", f.suite, f.case_id, f.rel_err, f.tol, f.notes.join("; ")));
    }
    if !slow.is_empty() {
        detail.push_str(&format!("\n    over budget of {}s: {}", c.budget.as_secs(), slow.join(", ")));
    }
    (failures.is_empty() && slow.is_empty(), detail)
}

fn main() -> ExitCode {
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut all = true;
    for c in CRITERIA.iter().filter(|c| only.is_empty() || only.contains(&c.id)) {
        let (ok, detail) = run_criterion(c);
        all &= ok;
        println!("criterion {:>2} {}: {} ({detail})", c.id, if ok { "PASS" } else { "FAIL" }, c.title);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
