//! Verification harness: suite registry, seeded parameter sampling,
//! JSON-lines reports and one-off evaluation of closed forms.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closedform::{
    aflt_rhs, an_aflt_rhs, an_alt_norm, an_alt_rhs, an_selberg_rhs, companion_four_f_three, companion_gamma_one,
    elliptic_selberg_rhs, gamma_one_rhs, guess_three_f_two, mac_aflt_rhs, mac_corollary_rhs, macdonald_norm,
    nplusone_rhs, r_function, r_recursion_rhs, selberg_rhs, AltParams, AnParams,
};
use crate::complexschur::{beta_schur_check, staircase, thm_schur_closed, thm_schur_residue_oracle, ComplexAn};
use crate::elliptic::{
    connection_sides, eaflt_lhs_n1, eaflt_rhs_n1, evaluation_symmetry_sides, guard_defect, inner_poles, interpolation_skew_sides,
    jackson_sides, kadell_lhs_n1, kadell_rhs, skew_interp, skew_interp_branched, skew_interp_pair, skew_limit_scaled,
    skew_limit_value, EllipticParams, Nomes,
};
use crate::field::{bind, var, FieldElement, C64};
use crate::identities::{an_cauchy, cauchy, f_function, skew_sum, skew_sum_limit, z_selb, AnCauchy, CauchyVariant, Ell};
use crate::macdonald::{evaluation_symmetry, general_evaluation_symmetry, numeric_p, Family};
use crate::partitions::{enumerate, Bipartition, Partition};
use crate::quadrature::{
    aflt_lhs, an_alt_lhs, an_selberg_lhs, enumerate_chain, enumerate_companion_chain, mac_aflt_lhs, mac_corollary_lhs,
    macdonald_scalar_product, shifted_power_sums, QuadSpec, TorusSpec,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("unknown suite `{0}` (try `aflt list`)")]
    UnknownSuite(String),
    #[error("malformed configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Eval(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

// ---------------------------------------------------------------------------
// Configuration and reports
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    Double,
    Extended,
}

/// Settings of one `verify` run. Unset options fall back to per-suite
/// defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub suite: String,
    pub max_degree: Option<u32>,
    pub max_size: Option<u32>,
    pub n: Option<usize>,
    pub k: Option<Vec<usize>>,
    pub seed: u64,
    pub tol: Option<f64>,
    pub quad_points: Option<usize>,
    pub jobs: Option<usize>,
    pub report: Option<PathBuf>,
    pub precision: Precision,
    pub rho: Option<f64>,
    pub theta: Option<f64>,
    pub radius: Option<f64>,
    pub epsilon0: Option<f64>,
    /// Record wall-clock time per case (the only non-reproducible field).
    pub timing: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suite: "all".into(),
            max_degree: None,
            max_size: None,
            n: None,
            k: None,
            seed: 0,
            tol: None,
            quad_points: None,
            jobs: None,
            report: None,
            precision: Precision::Double,
            rho: None,
            theta: None,
            radius: None,
            epsilon0: None,
            timing: true,
        }
    }
}

impl SuiteConfig {
    pub fn for_suite(suite: &str) -> SuiteConfig {
        SuiteConfig { suite: suite.into(), ..Default::default() }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.precision == Precision::Extended {
            return bad("only double precision is implemented".into());
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                return bad(format!("tolerance must be positive, got {t}"));
            }
        }
        if let Some(p) = self.quad_points {
            if p < 2 {
                return bad(format!("--quad-points must be at least 2, got {p}"));
            }
        }
        if self.jobs == Some(0) {
            return bad("--jobs must be at least 1".into());
        }
        if let Some(k) = &self.k {
            if k.is_empty() || k.windows(2).any(|w| w[0] > w[1]) {
                return bad(format!("--k must be a nondecreasing list, got {k:?}"));
            }
        }
        if let Some(r) = self.rho {
            if !(r > 0.0) {
                return bad(format!("--rho must be positive, got {r}"));
            }
        }
        if let Some(th) = self.theta {
            if !(th > 0.0 && th < std::f64::consts::PI) {
                return bad(format!("--theta must lie in (0, π), got {th}"));
            }
        }
        for (name, v) in [("--radius", self.radius), ("--epsilon0", self.epsilon0)] {
            if let Some(v) = v {
                if !(v > 0.0) {
                    return bad(format!("{name} must be positive, got {v}"));
                }
            }
        }
        if self.suite != "all" && !SUITES.iter().any(|s| s.name == self.suite) {
            return Err(CliError::UnknownSuite(self.suite.clone()));
        }
        Ok(())
    }

    fn points(&self, default: usize) -> usize {
        self.quad_points.unwrap_or(default)
    }

    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn sector(&self) -> crate::quadrature::SectorContour {
        let mut c = crate::quadrature::SectorContour::default();
        if let Some(t) = self.theta {
            c.theta = t;
        }
        if let Some(r) = self.radius {
            c.radius = r;
        }
        if let Some(e) = self.epsilon0 {
            c.eps0 = e;
        }
        c
    }
}

/// One line of a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub case_id: String,
    pub params: String,
    pub lhs: String,
    pub rhs: String,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tol: f64,
    pub pass: bool,
    pub runtime_ms: u64,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn to_json_line(&self) -> Result<String, CliError> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json_line(line: &str) -> Result<VerificationReport, CliError> {
        Ok(serde_json::from_str(line)?)
    }
}

/// Result of evaluating one case.
#[derive(Clone, Debug)]
pub struct Outcome {
    lhs: String,
    rhs: String,
    abs_err: f64,
    rel_err: f64,
    tol: f64,
    pass: bool,
    notes: Vec<String>,
}

fn fmt_c(z: C64) -> String {
    format!("{:e}{:+e}i", z.re, z.im)
}

fn short(s: String) -> String {
    const MAX: usize = 160;
    if s.chars().count() <= MAX {
        s
    } else {
        let head: String = s.chars().take(120).collect();
        format!("{head}… ({} chars)", s.chars().count())
    }
}

impl Outcome {
    /// Exact comparison; the error fields are 0/1 indicators.
    pub fn exact(lhs: String, rhs: String, equal: bool) -> Outcome {
        let e = if equal { 0.0 } else { 1.0 };
        Outcome { lhs: short(lhs), rhs: short(rhs), abs_err: e, rel_err: e, tol: 0.0, pass: equal, notes: vec!["exact".into()] }
    }

    pub fn field(lhs: &FieldElement, rhs: &FieldElement) -> Outcome {
        Outcome::exact(lhs.to_string(), rhs.to_string(), lhs == rhs)
    }

    /// Relative error against max(|rhs|, floor).
    pub fn numeric(lhs: C64, rhs: C64, tol: f64, floor: f64) -> Outcome {
        let abs = (lhs - rhs).norm();
        let mut scale = rhs.norm().max(floor);
        let mut notes = Vec::new();
        if floor > 0.0 && rhs.norm() < floor {
            notes.push(format!("error relative to floor {floor:e}"));
        }
        if scale == 0.0 {
            scale = lhs.norm();
            notes.push("rhs is zero; error relative to |lhs|".into());
        }
        let rel = if abs == 0.0 { 0.0 } else { abs / scale };
        if !(abs.is_finite() && rel.is_finite()) {
            notes.push("non-finite value".into());
            return Outcome { lhs: fmt_c(lhs), rhs: fmt_c(rhs), abs_err: f64::MAX, rel_err: f64::MAX, tol, pass: false, notes };
        }
        Outcome { lhs: fmt_c(lhs), rhs: fmt_c(rhs), abs_err: abs, rel_err: rel, tol, pass: rel <= tol, notes }
    }

    /// A comparison that is expected to fail by more than `threshold`.
    pub fn mismatch(lhs: C64, rhs: C64, threshold: f64) -> Outcome {
        let mut o = Outcome::numeric(lhs, rhs, threshold, 0.0);
        o.pass = lhs.is_finite() && rhs.is_finite() && o.rel_err > threshold;
        o.notes.push(format!("expected to differ by more than {threshold:e}"));
        o
    }

    /// A yes/no property with free-form sides.
    pub fn property(lhs: String, rhs: String, holds: bool) -> Outcome {
        let mut o = Outcome::exact(lhs, rhs, holds);
        o.notes = vec!["property".into()];
        o
    }

    pub fn error(e: impl std::fmt::Display) -> Outcome {
        Outcome {
            lhs: String::new(),
            rhs: String::new(),
            abs_err: 1.0,
            rel_err: 1.0,
            tol: 0.0,
            pass: false,
            notes: vec![format!("error: {e}")],
        }
    }

    pub fn note(mut self, n: impl Into<String>) -> Outcome {
        self.notes.push(n.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.pass
    }
}

fn lift<E: std::fmt::Display>(r: Result<Outcome, E>) -> Outcome {
    r.unwrap_or_else(Outcome::error)
}

type Runner = Box<dyn Fn() -> Outcome + Send + Sync>;

/// A named verification case. Parameters are drawn when the case is built,
/// so running cases in any order gives the same values.
pub struct Case {
    pub id: String,
    pub params: String,
    run: Runner,
}

impl Case {
    fn new(id: impl Into<String>, params: impl Into<String>, run: impl Fn() -> Outcome + Send + Sync + 'static) -> Case {
        Case { id: id.into(), params: params.into(), run: Box::new(run) }
    }
}

/// Registry entry.
pub struct Suite {
    pub name: &'static str,
    pub about: &'static str,
    build: fn(&SuiteConfig, &mut ChaCha8Rng) -> Vec<Case>,
}

pub static SUITES: &[Suite] = &[
    Suite { name: "cauchy", about: "Cauchy identity with a skew Q, 2+2 letters, exact", build: suite_cauchy },
    Suite { name: "skew-sum", about: "skew Cauchy-type sum with symbolic a, exact", build: suite_skew_sum },
    Suite { name: "skew-sum-limit", about: "skew sum at a = t^(k-l) with the limiting f, exact", build: suite_skew_sum_limit },
    Suite { name: "eval-sym", about: "Macdonald evaluation symmetry and its a-deformation, exact", build: suite_eval_sym },
    Suite { name: "an-cauchy", about: "A_n Cauchy-type identities, variants I and II, exact", build: suite_an_cauchy },
    Suite { name: "zbifund", about: "bifundamental product against the Selberg average", build: suite_zbifund },
    Suite { name: "aflt", about: "one-alphabet AFLT integral by quadrature", build: suite_aflt },
    Suite { name: "an-selberg", about: "A_n Selberg integral by chain quadrature", build: suite_an_selberg },
    Suite { name: "an-aflt", about: "A_n AFLT with a Jack pair by chain quadrature", build: suite_an_aflt },
    Suite { name: "an-alt", about: "companion A_n integral by chain quadrature", build: suite_an_alt },
    Suite { name: "complex-schur", about: "gamma = 1 Schur theorem: residue oracle against closed form", build: suite_complex_schur },
    Suite { name: "beta-schur", about: "beta integral with a complex Schur function, two exact paths", build: suite_beta_schur },
    Suite { name: "complex-an", about: "complex A_n integral: recursion against closed form", build: suite_complex_an },
    Suite { name: "nplusone", about: "n+1 partition average as a ratio of complex evaluations", build: suite_nplusone },
    Suite { name: "recursion", about: "R-function recursion and its gamma = 1 case", build: suite_recursion },
    Suite { name: "guess", about: "the naive product guess fails; the 3F2 form holds", build: suite_guess },
    Suite { name: "companion", about: "companion 4F3 display and its gamma = 1 case", build: suite_companion },
    Suite { name: "mac-aflt", about: "Macdonald AFLT on the torus", build: suite_mac_aflt },
    Suite { name: "mac-ortho", about: "Macdonald orthogonality and norm on the torus", build: suite_mac_ortho },
    Suite { name: "elliptic-beta", about: "elliptic beta integral at n = 1", build: suite_elliptic_beta },
    Suite { name: "elliptic-aflt", about: "elliptic Kadell-type and AFLT integrals at n = 1", build: suite_elliptic_aflt },
    Suite { name: "jackson", about: "elliptic Jackson summation, evaluation symmetry, skew functions", build: suite_jackson },
    Suite { name: "connection", about: "elliptic connection coefficients and skew expansion", build: suite_connection },
    Suite { name: "mac-limit", about: "p -> 0 degeneration of the elliptic skew function", build: suite_mac_limit },
    Suite { name: "properties", about: "padding, duality, guards, chain coverage, radius independence", build: suite_properties },
];

/// Builds the cases of one suite (or of all suites, in registry order).
pub fn build_cases(config: &SuiteConfig) -> Result<Vec<(String, Case)>, CliError> {
    config.validate()?;
    let mut out = Vec::new();
    for (i, s) in SUITES.iter().enumerate() {
        if config.suite != "all" && config.suite != s.name {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(i as u64);
        out.extend((s.build)(config, &mut rng).into_iter().map(|c| (s.name.to_string(), c)));
    }
    Ok(out)
}

/// Runs a suite. Reports are sorted by (suite, case id) whatever the
/// scheduling.
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<VerificationReport>, CliError> {
    let cases = build_cases(config)?;
    let run = || -> Vec<VerificationReport> {
        cases
            .par_iter()
            .map(|(suite, case)| {
                let start = Instant::now();
                let o = (case.run)();
                let ms = if config.timing { start.elapsed().as_millis() as u64 } else { 0 };
                VerificationReport {
                    suite: suite.clone(),
                    case_id: case.id.clone(),
                    params: case.params.clone(),
                    lhs: o.lhs,
                    rhs: o.rhs,
                    abs_err: o.abs_err,
                    rel_err: o.rel_err,
                    tol: o.tol,
                    pass: o.pass,
                    runtime_ms: ms,
                    notes: o.notes,
                }
            })
            .collect()
    };
    let mut reports = match config.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| CliError::Config(e.to_string()))?
            .install(run),
        None => run(),
    };
    reports.sort_by(|a, b| (&a.suite, &a.case_id).cmp(&(&b.suite, &b.case_id)));
    Ok(reports)
}

/// Appends reports to a JSON-lines file.
pub fn append_reports(path: &Path, reports: &[VerificationReport]) -> Result<(), CliError> {
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    for r in reports {
        writeln!(f, "{}", r.to_json_line()?)?;
    }
    Ok(())
}

pub fn exit_status(reports: &[VerificationReport]) -> i32 {
    if reports.iter().all(|r| r.pass) {
        0
    } else {
        1
    }
}

// ---------------------------------------------------------------------------
// Small helpers for suite builders
// ---------------------------------------------------------------------------

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn p(parts: &[u32]) -> Partition {
    Partition::of(parts)
}

fn row(m: u32) -> Partition {
    if m == 0 {
        Partition::empty()
    } else {
        p(&[m])
    }
}

fn cx(rng: &mut ChaCha8Rng, re: (f64, f64), im: f64) -> C64 {
    C64::new(rng.gen_range(re.0..re.1), rng.gen_range(-im..=im))
}

fn polar(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> C64 {
    C64::from_polar(rng.gen_range(lo..hi), rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
}

fn list<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn cl(xs: &[C64]) -> String {
    xs.iter().map(|&z| fmt_c(z)).collect::<Vec<_>>().join(",")
}

fn max_size(cfg: &SuiteConfig, default: u32) -> u32 {
    cfg.max_size.unwrap_or(default)
}

// ---------------------------------------------------------------------------
// Exact algebra
// ---------------------------------------------------------------------------

fn suite_cauchy(cfg: &SuiteConfig, _: &mut ChaCha8Rng) -> Vec<Case> {
    let cap = cfg.max_degree.unwrap_or(6);
    let letters = cfg.n.unwrap_or(2);
    [Partition::empty(), p(&[1]), p(&[2, 1])]
        .into_iter()
        .filter(|mu| mu.size() <= max_size(cfg, 3))
        .map(|mu| {
            let params = format!("mu={mu} x={letters} y={letters} cap={cap}");
            Case::new(format!("mu={mu}"), params, move || {
                lift(cauchy(&mu, letters, letters, cap).map(|id| {
                    let o = Outcome::exact(
                        format!("{} terms", id.lhs.terms().len()),
                        format!("{} terms", id.rhs.terms().len()),
                        id.holds(),
                    );
                    match id.first_difference() {
                        Some((m, a, b)) => o.note(format!("first difference at {m:?}: {a} vs {b}")),
                        None => o.note(format!("truncated at total degree {cap}")),
                    }
                }))
            })
        })
        .collect()
}

fn skew_pairs(cfg: &SuiteConfig) -> Vec<(Partition, Partition)> {
    let m = max_size(cfg, 3);
    let parts = enumerate(m, m as usize);
    let mut out = Vec::new();
    for lam in &parts {
        for mu in &parts {
            out.push((lam.clone(), mu.clone()));
        }
    }
    out
}

fn suite_skew_sum(cfg: &SuiteConfig, _: &mut ChaCha8Rng) -> Vec<Case> {
    let kmax = cfg.n.unwrap_or(3);
    let mut out = Vec::new();
    for (lam, mu) in skew_pairs(cfg) {
        for k in lam.len()..=kmax {
            for l in mu.len()..=kmax {
                let (lam, mu) = (lam.clone(), mu.clone());
                out.push(Case::new(format!("lam={lam} mu={mu} k={k} l={l}"), format!("a symbolic"), move || {
                    lift(skew_sum(&lam, &mu, k, Ell::Finite(l), &var("a")).map(|id| Outcome::field(&id.lhs, &id.rhs)))
                }));
            }
        }
    }
    out
}

fn suite_skew_sum_limit(cfg: &SuiteConfig, _: &mut ChaCha8Rng) -> Vec<Case> {
    let kmax = cfg.n.unwrap_or(3);
    let mut out = Vec::new();
    for (lam, mu) in skew_pairs(cfg) {
        for k in lam.len().max(1)..=kmax {
            for l in k.max(mu.len())..=kmax {
                let (lam, mu) = (lam.clone(), mu.clone());
                out.push(Case::new(format!("lam={lam} mu={mu} k={k} l={l}"), format!("a=t^{}", k as i64 - l as i64), move || {
                    lift(skew_sum_limit(&lam, &mu, k, l).map(|id| Outcome::field(&id.lhs, &id.rhs)))
                }));
            }
        }
    }
    out
}

fn suite_eval_sym(cfg: &SuiteConfig, _: &mut ChaCha8Rng) -> Vec<Case> {
    let mut out = Vec::new();
    for (lam, mu) in skew_pairs(cfg) {
        let n = lam.len().max(mu.len()).max(1);
        let (l2, m2) = (lam.clone(), mu.clone());
        out.push(Case::new(format!("plain lam={lam} mu={mu}"), format!("n={n}"), move || {
            let (a, b) = evaluation_symmetry(&l2, &m2, n);
            Outcome::field(&a, &b)
        }));
        let (n1, m1) = (lam.len().max(1), mu.len().max(1));
        out.push(Case::new(format!("general lam={lam} mu={mu}"), format!("n={n1} m={m1} a symbolic"), move || {
            let (a, b) = general_evaluation_symmetry(&lam, &mu, n1, m1, &var("a"));
            Outcome::field(&a, &b)
        }));
    }
    out
}

fn suite_an_cauchy(cfg: &SuiteConfig, _: &mut ChaCha8Rng) -> Vec<Case> {
    let cap = cfg.max_degree.unwrap_or(3);
    let shapes: Vec<Vec<usize>> = match &cfg.k {
        Some(k) => vec![k.clone()],
        None => vec![vec![2], vec![1, 1], vec![1, 2], vec![1, 1, 2]],
    };
    let mut out = Vec::new();
    for ks in shapes {
        let n = ks.len();
        let mut runs = vec![(CauchyVariant::IFinite, Partition::empty())];
        for mu in [Partition::empty(), p(&[1])] {
            runs.push((CauchyVariant::IInfinite, mu.clone()));
            if n >= 2 {
                runs.push((CauchyVariant::II, mu));
            }
        }
        if n >= 2 {
            runs.push((CauchyVariant::IIPlethystic, Partition::empty()));
        }
        for (variant, mu) in runs {
            let spec = AnCauchy { ks: ks.clone(), mu: mu.clone(), cap, variant };
            let symbolic = matches!(variant, CauchyVariant::IFinite | CauchyVariant::IInfinite);
            let params = format!("k=({}) mu_n={mu} cap={cap}{}", list(&ks), if symbolic { " a_{n-1} symbolic" } else { "" });
            out.push(Case::new(format!("k=({}) {variant:?} mu={mu}", list(&ks)), params, move || {
                lift(an_cauchy(&spec).map(|id| {
                    let o = Outcome::exact(
                        format!("{} terms", id.lhs.terms().len()),
                        format!("{} terms", id.rhs.terms().len()),
                        id.holds(),
                    );
                    o.note(format!("countable alphabets cut to {cap} letters; degree cap {cap}"))
                }))
            }));
        }
    }
    out
}

fn suite_zbifund(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Vec<Case> {
    let tol = cfg.tol(1e-8);
    let parts = enumerate(max_size(cfg, 2), 2);
    let mut out = Vec::new();
    for k in 1..=2usize {
        for lam in parts.iter().filter(|l| l.len() <= k) {
            for mu in &parts {
                let b = cx(rng, (0.5, 0.9), 0.3);
                let pv = cx(rng, (0.2, 0.5), 0.2);
                let al = cx(rng, (0.1, 0.3), 0.1);
                let (lam, mu) = (lam.clone(), mu.clone());
                let params = format!("k={k} b={} P={} alpha={}", fmt_c(b), fmt_c(pv), fmt_c(al));
                out.push(Case::new(format!("k={k} lam={lam} mu={mu}"), params, move || {
                    lift(z_selb(&lam, &mu, k, b, pv, al).map(|(l, r)| Outcome::numeric(l, r, tol, 0.0)))
                }));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Real-domain integrals
// ---------------------------------------------------------------------------

fn suite_aflt(cfg: &SuiteConfig, _: &mut ChaCha8Rng) -> Vec<Case> {
    let mut out = Vec::new();
    let points = cfg.points(24);
    out.push(Case::new("anchor closed", "k=2 alpha=beta=gamma=1", || {
        lift(selberg_rhs(2, c(1.0), c(1.0), c(1.0)).map(|v| Outcome::numeric(v, c(1.0 / 6.0), 1e-13, 0.0)))
    }));
    let spec = QuadSpec { points, tol: 1e-6 };
    out.push(Case::new("anchor quadrature", "k=2 alpha=beta=gamma=1", move || {
        let e = Partition::empty();
        lift(aflt_lhs(2, &e, &e, 1.0, 1.0, 1.0, &spec).map(|v| Outcome::numeric(v.value, c(1.0 / 6.0), 1e-6, 0.0)))
    }));
    let shapes = [Partition::empty(), p(&[1]), p(&[2]), p(&[1, 1])];
    let ks = cfg.k.clone().unwrap_or_else(|| vec![1, 2]);
    for &k in &ks {
        let tol = cfg.tol(if k >= 2 { 1e-5 } else { 1e-6 });
        for (gname, g) in [("1/2", 0.5), ("1", 1.0), ("3/2", 1.5)] {
            for lam in shapes.iter().filter(|l| l.len() <= k) {
                for mu in &shapes {
                    let (lam, mu) = (lam.clone(), mu.clone());
                    let spec = QuadSpec { points, tol };
                    let id = format!("k={k} gamma={gname} lam={lam} mu={mu}");
                    out.push(Case::new(id, format!("alpha=2 beta=2 gamma={g} points={points}"), move || {
                        let run = || -> Result<Outcome, String> {
                            let lhs = aflt_lhs(k, &lam, &mu, 2.0, 2.0, g, &spec).map_err(|e| e.to_string())?;
                            let rhs = aflt_rhs(k, &lam, &mu, mu.len(), c(2.0), c(2.0), c(g)).map_err(|e| e.to_string())?;
                            Ok(Outcome::numeric(lhs.value, rhs, tol, 0.0).note(format!("refinement difference {:e}", lhs.error)))
                        };
                        lift(run())
                    }));
                }
            }
        }
    }
    out
}

fn one_obs(_: &[Vec<f64>]) -> C64 {
    c(1.0)
}

/// (k-vector, γ) pairs for rank-two chain suites; γ = 1/2 is lowered to 1/3
/// where k_n = 2 requires γ < 1/2.
fn chain_shapes(cfg: &SuiteConfig) -> Vec<(Vec<usize>, f64, &'static str)> {
    let shapes = match &cfg.k {
        Some(k) => vec![k.clone()],
        None => vec![vec![1, 1], vec![1, 2]],
    };
    shapes
        .into_iter()
        .map(|ks| {
            let kn = *ks.last().unwrap();
            if kn >= 2 {
                (ks, 1.0 / 3.0, "1/3")
            } else {
                (ks, 0.5, "1/2")
            }
        })
        .collect()
}

const CHAIN_ALPHAS: [f64; 3] = [1.2, 1.5, 1.4];
const CHAIN_BETA: f64 = 1.1;

fn suite_an_selberg(cfg: &SuiteConfig, _: &mut ChaCha8Rng) -> Vec<Case> {
    let tol = cfg.tol(1e-3);
    let points = cfg.points(32);
    chain_shapes(cfg)
        .into_iter()
        .map(|(ks, g, gname)| {
            let al: Vec<f64> = CHAIN_ALPHAS[..ks.len()].to_vec();
            let params = format!("alpha=({}) beta={CHAIN_BETA} gamma={gname} points={points}", list(&al));
            Case::new(format!("k=({})", list(&ks)), params, move || {
                let run = || -> Result<Outcome, String> {
                    let spec = QuadSpec { points, tol: 1e-4 };
                    let v = an_selberg_lhs(&ks, &al, CHAIN_BETA, g, &one_obs, &spec).map_err(|e| e.to_string())?;
                    let alc: Vec<C64> = al.iter().map(|&a| c(a)).collect();
                    let pr = AnParams::new(&ks, &alc, c(CHAIN_BETA), c(g)).map_err(|e| e.to_string())?;
                    Ok(Outcome::numeric(v.value, an_selberg_rhs(&pr).map_err(|e| e.to_string())?, tol, 0.0))
                };
                lift(run())
            })
        })
        .collect()
}

fn suite_an_aflt(cfg: &SuiteConfig, _: &mut ChaCha8Rng) -> Vec<Case> {
    let tol = cfg.tol(1e-3);
    let points = cfg.points(32);
    let mut out = Vec::new();
    for (ks, g, gname) in chain_shapes(cfg) {
        if ks.len() != 2 {
            continue;
        }
        for lam in [Partition::empty(), p(&[1])] {
            for mu in [Partition::empty(), p(&[1])] {
                let (ks, lam, mu) = (ks.clone(), lam.clone(), mu.clone());
                let al: Vec<f64> = CHAIN_ALPHAS[..2].to_vec();
                let params = format!("alpha=({}) beta={CHAIN_BETA} gamma={gname} points={points}", list(&al));
                out.push(Case::new(format!("k=({}) lam={lam} mu={mu}", list(&ks)), params, move || {
                    let run = || -> Result<Outcome, String> {
                        let spec = QuadSpec { points, tol: 1e-4 };
                        let jb = bind(&[("gamma", c(g))]);
                        let pl = numeric_p(Family::Jack, &lam, &jb).map_err(|e| e.to_string())?;
                        let pm = numeric_p(Family::Jack, &mu, &jb).map_err(|e| e.to_string())?;
                        let obs = |t: &[Vec<f64>]| {
                            pl.eval_power_sums(&shifted_power_sums(&t[0], 0.0, lam.size()))
                                * pm.eval_power_sums(&shifted_power_sums(&t[1], CHAIN_BETA / g - 1.0, mu.size()))
                        };
                        let e = |x: crate::quadrature::QuadError| x.to_string();
                        let norm = an_selberg_lhs(&ks, &al, CHAIN_BETA, g, &one_obs, &spec).map_err(e)?.value;
                        let v = an_selberg_lhs(&ks, &al, CHAIN_BETA, g, &obs, &spec).map_err(e)?.value / norm;
                        let pr = AnParams::new(&ks, &[c(al[0]), c(al[1])], c(CHAIN_BETA), c(g)).map_err(|e| e.to_string())?;
                        let want = an_aflt_rhs(&pr, &lam, &mu, lam.len(), mu.len()).map_err(|e| e.to_string())?;
                        Ok(Outcome::numeric(v, want, tol, 0.0))
                    };
                    lift(run())
                }));
            }
        }
    }
    out
}

const ALT_ALPHAS: [f64; 2] = [1.3, 1.6];
const ALT_BETA1: f64 = 0.75;

fn suite_an_alt(cfg: &SuiteConfig, _: &mut ChaCha8Rng) -> Vec<Case> {
    let tol = cfg.tol(1e-3);
    let points = cfg.points(40);
    let g = 0.5;
    let bp = (ALT_BETA1, g + 1.0 - ALT_BETA1);
    let params = format!("k=(1,1) alpha=({}) beta=({},{}) gamma=1/2 points={points}", list(&ALT_ALPHAS), bp.0, bp.1);
    let mut out = Vec::new();
    let cases: [(&str, Partition, Partition); 4] = [
        ("norm", Partition::empty(), Partition::empty()),
        ("lam=(1) mu=0", p(&[1]), Partition::empty()),
        ("lam=0 mu=(1)", Partition::empty(), p(&[1])),
        ("lam=(1) mu=(1)", p(&[1]), p(&[1])),
    ];
    for (id, lam, mu) in cases {
        let norm_case = id == "norm";
        out.push(Case::new(id, params.clone(), move || {
            let run = || -> Result<Outcome, String> {
                let e = |x: crate::quadrature::QuadError| x.to_string();
                let pr = AltParams::new(&[1, 1], &[c(ALT_ALPHAS[0]), c(ALT_ALPHAS[1])], (c(bp.0), c(bp.1)), c(g))
                    .map_err(|e| e.to_string())?;
                pr.check_conditions().map_err(|e| e.to_string())?;
                let spec = QuadSpec { points, tol: 1e-4 };
                let norm = an_alt_lhs(&[1, 1], &ALT_ALPHAS, bp, g, &one_obs, &spec).map_err(e)?.value;
                if norm_case {
                    return Ok(Outcome::numeric(norm, an_alt_norm(&pr, false).map_err(|e| e.to_string())?, tol, 0.0));
                }
                let (dl, dm) = (lam.size() as i32, mu.size() as i32);
                let obs = |t: &[Vec<f64>]| c(t[0][0].powi(dl) * t[1][0].powi(dm));
                let v = an_alt_lhs(&[1, 1], &ALT_ALPHAS, bp, g, &obs, &spec).map_err(e)?.value / norm;
                Ok(Outcome::numeric(v, an_alt_rhs(&pr, &lam, &mu).map_err(|e| e.to_string())?, tol, 0.0))
            };
            lift(run())
        }));
    }
    out
}

// ---------------------------------------------------------------------------
// γ = 1 complex theorems
// ---------------------------------------------------------------------------

fn suite_complex_schur(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Vec<Case> {
    let tol = cfg.tol(1e-9);
    let shapes = enumerate(max_size(cfg, 3), 4);
    (0..50)
        .map(|i| {
            let l = rng.gen_range(0..=4usize);
            let k = rng.gen_range(0..=2usize.min(l + 1));
            let lam = shapes[rng.gen_range(0..shapes.len())].clone();
            let y: Vec<C64> = (0..l).map(|_| cx(rng, (0.3, 1.5), 0.7)).collect();
            let z: Vec<C64> = (0..k).map(|_| cx(rng, (-0.5, 2.0), 1.0)).collect();
            let params = format!("k={k} l={l} lam={lam} y=({}) z=({})", cl(&y), cl(&z));
            Case::new(format!("draw={i:02}"), params, move || {
                let run = || -> Result<Outcome, crate::complexschur::SchurError> {
                    let a = thm_schur_residue_oracle(k, &y, &z, &lam)?;
                    let b = thm_schur_closed(k, &y, &z, &lam)?;
                    Ok(Outcome::numeric(a, b, tol, 1e-3))
                };
                lift(run())
            })
        })
        .collect()
}

fn suite_beta_schur(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Vec<Case> {
    let tol = cfg.tol(1e-9);
    let contour = if cfg.theta.is_some() || cfg.radius.is_some() || cfg.epsilon0.is_some() { Some(cfg.sector()) } else { None };
    let mut out = Vec::new();
    for k in 0..=3usize {
        for lam in enumerate(max_size(cfg, 3), 3) {
            let z: Vec<C64> = (0..k).map(|_| cx(rng, (-0.5, 2.0), 1.0)).collect();
            let b = cx(rng, (-1.0, 2.0), 1.0);
            let params = format!("z=({}) beta={}", cl(&z), fmt_c(b));
            out.push(Case::new(format!("k={k} lam={lam}"), params, move || {
                lift(beta_schur_check(&z, b, &lam, contour.as_ref()).map(|paths| {
                    let o = Outcome::numeric(paths.expansion, paths.closed, tol, 0.0);
                    match paths.contour {
                        Some(q) => o.note(format!(
                            "contour {} (eps0 sensitivity {:e})",
                            fmt_c(q.value),
                            q.eps0_sensitivity
                        )),
                        None => o,
                    }
                }))
            }));
        }
    }
    out
}

fn suite_complex_an(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Vec<Case> {
    let tol = cfg.tol(1e-8);
    let shapes: Vec<Vec<usize>> = match &cfg.k {
        Some(k) => vec![k.clone()],
        None => vec![vec![1], vec![1, 1], vec![1, 2], vec![1, 1, 1], vec![1, 1, 2], vec![1, 2, 2], vec![1, 2, 3]],
    };
    let small = enumerate(max_size(cfg, 2), 2);
    let mut out = Vec::new();
    for ks in shapes {
        for round in 0..3 {
            let n = ks.len();
            let alphas: Vec<C64> = (0..n).map(|_| cx(rng, (1.5, 2.5), 0.5)).collect();
            let z: Vec<C64> = (0..ks[0]).map(|_| cx(rng, (0.0, 1.5), 0.5)).collect();
            let beta = cx(rng, (-0.5, 1.5), 0.5);
            let lams: Vec<Partition> = (0..n).map(|_| small[rng.gen_range(0..small.len())].clone()).collect();
            let problem = ComplexAn { ks: ks.clone(), z, lams: lams.clone(), alphas, beta };
            let params = format!(
                "alpha=({}) beta={} z=({}) lams=({})",
                cl(&problem.alphas),
                fmt_c(beta),
                cl(&problem.z),
                list(&lams)
            );
            out.push(Case::new(format!("k=({}) round={round}", list(&ks)), params, move || {
                let run = || -> Result<Outcome, crate::complexschur::SchurError> {
                    problem.check_conditions()?;
                    Ok(Outcome::numeric(problem.recursive()?, problem.closed()?, tol, 1e-12))
                };
                lift(run())
            }));
        }
    }
    out
}

fn complex_closed(pr: &AnParams, lams: &[Partition]) -> Result<C64, crate::complexschur::SchurError> {
    ComplexAn {
        ks: pr.ks.clone(),
        z: staircase(&lams[0], pr.ks[0]),
        lams: lams[1..].to_vec(),
        alphas: pr.alphas.clone(),
        beta: pr.beta,
    }
    .closed()
}

fn suite_nplusone(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Vec<Case> {
    let tol = cfg.tol(1e-8);
    let small = [Partition::empty(), p(&[1]), p(&[2]), p(&[1, 1])];
    let mut out = Vec::new();
    for ks in [vec![1], vec![2], vec![1, 2], vec![2, 2], vec![1, 2, 3]] {
        let n = ks.len();
        for round in 0..6u32 {
            let alphas: Vec<C64> = ks.iter().map(|_| cx(rng, (2.5, 4.0), 0.5)).collect();
            let beta = cx(rng, (0.3, 2.0), 0.5);
            let mut lams: Vec<Partition> = (0..=n).map(|_| small[rng.gen_range(0..small.len())].clone()).collect();
            if lams[0].len() > ks[0] {
                lams[0] = p(&[round % 2 + 1]);
            }
            let mut ells: Vec<usize> =
                (1..=n).map(|r| (ks[r - 1] - if r > 1 { ks[r - 2] } else { 0 }).max(lams[r - 1].len())).collect();
            ells.push(lams[n].len() + 1);
            let ks2 = ks.clone();
            let params = format!("alpha=({}) beta={} lams=({}) ells=({})", cl(&alphas), fmt_c(beta), list(&lams), list(&ells));
            out.push(Case::new(format!("k=({}) round={round}", list(&ks)), params, move || {
                let run = || -> Result<Outcome, String> {
                    let pr = AnParams::new(&ks2, &alphas, beta, c(1.0)).map_err(|e| e.to_string())?;
                    let zero: Vec<Partition> = (0..=n).map(|_| Partition::empty()).collect();
                    let ratio = complex_closed(&pr, &lams).map_err(|e| e.to_string())?
                        / complex_closed(&pr, &zero).map_err(|e| e.to_string())?;
                    let rhs = nplusone_rhs(&pr, &lams, &ells).map_err(|e| e.to_string())?;
                    Ok(Outcome::numeric(ratio, rhs, tol, 1.0))
                };
                lift(run())
            }));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// R-function, counterexample and companion displays
// ---------------------------------------------------------------------------

fn suite_recursion(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Vec<Case> {
    let tol = cfg.tol(1e-10);
    let shapes = [Partition::empty(), p(&[1]), p(&[2]), p(&[1, 1]), p(&[2, 1])];
    let kss = [vec![1, 1], vec![1, 2], vec![2, 2], vec![2, 3], vec![1, 2, 2]];
    let mut out = Vec::new();
    for i in 0..20 {
        let g = cx(rng, (0.3, 0.9), 0.5);
        let ks = kss[rng.gen_range(0..kss.len())].clone();
        let n = ks.len();
        let alphas: Vec<C64> = ks.iter().map(|_| cx(rng, (1.5, 3.0), 0.5)).collect();
        let beta = cx(rng, (0.5, 1.5), 0.5);
        let mut lams: Vec<Partition> = (0..=n).map(|_| shapes[rng.gen_range(0..shapes.len())].clone()).collect();
        // the recursion needs l(λ⁽¹⁾) < k₁
        while !lams[0].is_empty() && lams[0].len() >= ks[0] {
            lams[0] = if ks[0] == 1 { Partition::empty() } else { p(&[lams[0].part(1)]) };
        }
        let ells: Vec<usize> =
            lams.iter().enumerate().map(|(r, l)| if r == 0 { l.len() } else { l.len() + rng.gen_range(0..2) }).collect();
        let pr = match AnParams::new(&ks, &alphas, beta, g) {
            Ok(pr) => pr,
            Err(_) => continue,
        };
        let params = format!(
            "k=({}) alpha=({}) beta={} gamma={} lams=({}) ells=({})",
            list(&ks),
            cl(&alphas),
            fmt_c(beta),
            fmt_c(g),
            list(&lams),
            list(&ells)
        );
        let (pr2, lams2, ells2) = (pr.clone(), lams.clone(), ells.clone());
        out.push(Case::new(format!("draw={i:02} recursion"), params.clone(), move || {
            let run = || -> Result<Outcome, crate::coeffs::CoeffError> {
                Ok(Outcome::numeric(r_function(&pr2, &lams2, &ells2)?, r_recursion_rhs(&pr2, &lams2, &ells2)?, tol, 1e-13))
            };
            lift(run())
        }));
        out.push(Case::new(format!("draw={i:02} gamma=1"), params, move || {
            let run = || -> Result<Outcome, crate::coeffs::CoeffError> {
                let one = pr.with_gamma(c(1.0));
                Ok(Outcome::numeric(r_function(&one, &lams, &ells)?, gamma_one_rhs(&one, &lams, &ells)?, tol, 1e-13))
            };
            lift(run())
        }));
    }
    out
}

const GUESS_ALPHAS: [f64; 2] = [1.4, 2.1];
const GUESS_BETA: f64 = 1.2;

/// Chain-quadrature average of P_{(u₁)}[t₁] P_{(u₂)}[t₂ − t₁] P_μ[t₂ + β/γ − 1]
/// at k = (1,1).
fn guess_average(u: [u32; 2], mu: &Partition, al: [f64; 2], g: f64, points: usize) -> Result<C64, String> {
    let e = |x: crate::quadrature::QuadError| x.to_string();
    let jb = bind(&[("gamma", c(g))]);
    let row_p = |m: u32| numeric_p(Family::Jack, &row(m), &jb).map_err(|e| e.to_string());
    let (p1, p2) = (row_p(u[0])?, row_p(u[1])?);
    let pm = numeric_p(Family::Jack, mu, &jb).map_err(|e| e.to_string())?;
    let obs = |t: &[Vec<f64>]| {
        let (x, y) = (t[0][0], t[1][0]);
        let diff: Vec<C64> = (0..=u[1]).map(|j| c(y.powi(j as i32) - x.powi(j as i32))).collect();
        p1.eval_power_sums(&shifted_power_sums(&t[0], 0.0, u[0]))
            * p2.eval_power_sums(&diff)
            * pm.eval_power_sums(&shifted_power_sums(&t[1], GUESS_BETA / g - 1.0, mu.size()))
    };
    let spec = QuadSpec { points, tol: 1e-5 };
    let norm = an_selberg_lhs(&[1, 1], &al, GUESS_BETA, g, &one_obs, &spec).map_err(e)?.value;
    Ok(an_selberg_lhs(&[1, 1], &al, GUESS_BETA, g, &obs, &spec).map_err(e)?.value / norm)
}

fn suite_guess(cfg: &SuiteConfig, _: &mut ChaCha8Rng) -> Vec<Case> {
    let tol = cfg.tol(1e-4);
    let points = cfg.points(32);
    let g = 0.5;
    let mut out = Vec::new();
    for u in [[0u32, 1], [1, 1]] {
        for mu in [Partition::empty(), p(&[1])] {
            let params = format!(
                "k=(1,1) alpha=({}) beta={GUESS_BETA} gamma=1/2 points={points}; the 3F2 case shifts alpha by -u",
                list(&GUESS_ALPHAS)
            );
            let (mu2, id) = (mu.clone(), format!("u=({}) mu={mu}", list(&u)));
            out.push(Case::new(format!("{id} naive guess fails"), params.clone(), move || {
                let run = || -> Result<Outcome, String> {
                    let avg = guess_average(u, &mu2, GUESS_ALPHAS, g, points)?;
                    let al = [c(GUESS_ALPHAS[0]), c(GUESS_ALPHAS[1])];
                    let pr = AnParams::new(&[1, 1], &al, c(GUESS_BETA), c(g)).map_err(|e| e.to_string())?;
                    let lams = [row(u[0]), row(u[1]), mu2.clone()];
                    let ells = [lams[0].len(), lams[1].len(), lams[2].len()];
                    let r = r_function(&pr, &lams, &ells).map_err(|e| e.to_string())?;
                    Ok(Outcome::mismatch(avg, r, 1e-2))
                };
                lift(run())
            }));
            out.push(Case::new(format!("{id} 3F2 form"), params, move || {
                let run = || -> Result<Outcome, String> {
                    let shifted = [GUESS_ALPHAS[0] - u[0] as f64, GUESS_ALPHAS[1] - u[1] as f64];
                    let avg = guess_average(u, &mu, shifted, g, points)?;
                    let al = [c(GUESS_ALPHAS[0]), c(GUESS_ALPHAS[1])];
                    let want = guess_three_f_two(&al, c(GUESS_BETA), c(g), &u, &mu).map_err(|e| e.to_string())?;
                    Ok(Outcome::numeric(avg, want, tol, 0.0))
                };
                lift(run())
            }));
        }
    }
    let params = format!("k=(1,2) alpha=(1.2,1.5) beta={CHAIN_BETA} gamma=1/3 points={points}");
    out.push(Case::new("k=(1,2) lams=(0,(1),0) naive guess fails", params, move || lift(guess_nonvanishing(points))));
    out
}

/// Average of P_{(1)}[t₂ − t₁] = p₁(t₂) − p₁(t₁) at k = (1,2), where R is nonzero.
fn guess_nonvanishing(points: usize) -> Result<Outcome, String> {
    let (ks, al, g) = ([1usize, 2], [1.2, 1.5], 1.0 / 3.0);
    let e = |x: crate::quadrature::QuadError| x.to_string();
    let spec = QuadSpec { points, tol: 1e-4 };
    let obs = |t: &[Vec<f64>]| c(t[1].iter().sum::<f64>() - t[0].iter().sum::<f64>());
    let norm = an_selberg_lhs(&ks, &al, CHAIN_BETA, g, &one_obs, &spec).map_err(e)?.value;
    let avg = an_selberg_lhs(&ks, &al, CHAIN_BETA, g, &obs, &spec).map_err(e)?.value / norm;
    let pr = AnParams::new(&ks, &[c(al[0]), c(al[1])], c(CHAIN_BETA), c(g)).map_err(|e| e.to_string())?;
    let lams = [Partition::empty(), p(&[1]), Partition::empty()];
    let r = r_function(&pr, &lams, &[0, 1, 0]).map_err(|e| e.to_string())?;
    Ok(Outcome::mismatch(avg, r, 1e-2))
}

fn suite_companion(cfg: &SuiteConfig, _: &mut ChaCha8Rng) -> Vec<Case> {
    let tol = cfg.tol(1e-4);
    let points = cfg.points(40);
    let mut out = Vec::new();
    let (g, al) = (0.5, ALT_ALPHAS);
    let bp = (ALT_BETA1, g + 1.0 - ALT_BETA1);
    for u in [[1u32, 1, 1], [0, 1, 0], [1, 0, 2], [0, 2, 1]] {
        let params = format!("k=(1,1) alpha=({}) beta=({},{}) gamma=1/2 points={points}", list(&al), bp.0, bp.1);
        out.push(Case::new(format!("4F3 u=({})", list(&u)), params, move || {
            let run = || -> Result<Outcome, String> {
                let e = |x: crate::quadrature::QuadError| x.to_string();
                let jb = bind(&[("gamma", c(g))]);
                let row_p = |m: u32| numeric_p(Family::Jack, &row(m), &jb).map_err(|e| e.to_string());
                let (p1, p2, p3) = (row_p(u[0])?, row_p(u[1])?, row_p(u[2])?);
                let obs = |t: &[Vec<f64>]| {
                    let (x, y) = (t[0][0], t[1][0]);
                    let diff: Vec<C64> = (0..=u[1]).map(|j| c(y.powi(j as i32) - x.powi(j as i32))).collect();
                    p1.eval_power_sums(&shifted_power_sums(&t[0], 0.0, u[0]))
                        * p2.eval_power_sums(&diff)
                        * p3.eval_power_sums(&shifted_power_sums(&t[1], 0.0, u[2]))
                };
                let spec = QuadSpec { points, tol: 1e-4 };
                let norm = an_alt_lhs(&[1, 1], &al, bp, g, &one_obs, &spec).map_err(e)?.value;
                let v = an_alt_lhs(&[1, 1], &al, bp, g, &obs, &spec).map_err(e)?.value / norm;
                let want = companion_four_f_three((c(al[0]), c(al[1])), (c(bp.0), c(bp.1)), c(g), u).map_err(|e| e.to_string())?;
                Ok(Outcome::numeric(v, want, tol, 0.0))
            };
            lift(run())
        }));
    }
    let b1 = 0.6;
    for u in [[0u32, 0, 0], [1, 0, 2], [2, 1, 0], [1, 2, 1], [0, 3, 2]] {
        let params = format!("alpha=({}) beta=({b1},{}) gamma=1", list(&al), 2.0 - b1);
        out.push(Case::new(format!("gamma=1 u=({})", list(&u)), params, move || {
            let a = (c(al[0]), c(al[1]));
            let b = (c(b1), c(2.0 - b1));
            let run = || -> Result<Outcome, String> {
                let x = companion_four_f_three(a, b, c(1.0), u).map_err(|e| e.to_string())?;
                let y = companion_gamma_one(a, b, u).map_err(|e| e.to_string())?;
                Ok(Outcome::numeric(x, y, 1e-10, 0.0))
            };
            lift(run())
        }));
    }
    out
}

// ---------------------------------------------------------------------------
// Macdonald torus integrals
// ---------------------------------------------------------------------------

const MAC_Q: f64 = 0.3;
const MAC_T: f64 = 0.4;

fn mac_ranks(cfg: &SuiteConfig) -> Vec<usize> {
    match cfg.n {
        Some(n) => vec![n],
        None => vec![1, 2],
    }
}

fn suite_mac_aflt(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Vec<Case> {
    let (q, t) = (c(MAC_Q), c(MAC_T));
    let points = cfg.points(256);
    let a = polar(rng, 0.5, 0.9);
    let b = polar(rng, 0.3, 0.5);
    let parts = [Partition::empty(), p(&[1]), p(&[2])];
    let mut out = Vec::new();
    for n in mac_ranks(cfg) {
        let tol = cfg.tol(if n >= 2 { 1e-5 } else { 1e-7 });
        for lam in parts.iter().filter(|l| l.len() <= n) {
            for mu in &parts {
                let rho = cfg.rho.unwrap_or((1.0 + b.norm()) / 2.0);
                let params = format!("q={MAC_Q} t={MAC_T} a={} b={} rho={rho} points={points}", fmt_c(a), fmt_c(b));
                let (l2, m2) = (lam.clone(), mu.clone());
                out.push(Case::new(format!("n={n} lam={lam} mu={mu}"), params, move || {
                    let run = || -> Result<Outcome, String> {
                        let spec = TorusSpec { rho, points };
                        let lhs = mac_aflt_lhs(n, &l2, &m2, a, b, q, t, &spec).map_err(|e| e.to_string())?;
                        let rhs = mac_aflt_rhs(n, &l2, &m2, m2.len(), a, b, q, t).map_err(|e| e.to_string())?;
                        Ok(Outcome::numeric(lhs, rhs, tol, 0.0))
                    };
                    lift(run())
                }));
                let rho2 = (1.0 + 1.0 / b.norm()) / 2.0;
                let params = format!("q={MAC_Q} t={MAC_T} a={} b={} rho={rho2} points={points}", fmt_c(a), fmt_c(b));
                let (lam, mu) = (lam.clone(), mu.clone());
                out.push(Case::new(format!("n={n} lam={lam} mu={mu} scalar-product form"), params, move || {
                    let run = || -> Result<Outcome, String> {
                        let spec = TorusSpec { rho: rho2, points };
                        let lhs = mac_corollary_lhs(n, &lam, &mu, a, b, q, t, &spec).map_err(|e| e.to_string())?;
                        let rhs = mac_corollary_rhs(n, &lam, &mu, mu.len() + 1, a, b, q, t).map_err(|e| e.to_string())?;
                        Ok(Outcome::numeric(lhs, rhs, tol, 0.0))
                    };
                    lift(run())
                }));
            }
        }
    }
    out
}

fn suite_mac_ortho(cfg: &SuiteConfig, _: &mut ChaCha8Rng) -> Vec<Case> {
    let (q, t) = (c(MAC_Q), c(MAC_T));
    let tol = cfg.tol(1e-8);
    let points = cfg.points(64);
    let parts = [Partition::empty(), p(&[1]), p(&[2]), p(&[1, 1])];
    let mut out = Vec::new();
    for n in mac_ranks(cfg) {
        for lam in parts.iter().filter(|l| l.len() <= n) {
            for mu in parts.iter().filter(|l| l.len() <= n) {
                let (lam, mu) = (lam.clone(), mu.clone());
                let params = format!("q={MAC_Q} t={MAC_T} points={points}");
                out.push(Case::new(format!("n={n} <{lam},{mu}>"), params, move || {
                    let run = || -> Result<Outcome, String> {
                        let v = macdonald_scalar_product(n, &lam, &mu, q, t, points).map_err(|e| e.to_string())?;
                        if lam == mu {
                            Ok(Outcome::numeric(v, macdonald_norm(n, &lam, q, t).map_err(|e| e.to_string())?, tol, 0.0))
                        } else {
                            Ok(Outcome::numeric(v, c(0.0), tol, 1.0))
                        }
                    };
                    lift(run())
                }));
            }
            for (aname, a) in [("q", q), ("t", t)] {
                let lam = lam.clone();
                out.push(Case::new(format!("n={n} lam={lam} scalar-product form at b=t a={aname}"), format!("q={MAC_Q} t={MAC_T}"), move || {
                    let run = || -> Result<Outcome, crate::coeffs::CoeffError> {
                        let v = mac_corollary_rhs(n, &lam, &lam, lam.len(), a, t, q, t)?;
                        Ok(Outcome::numeric(v, macdonald_norm(n, &lam, q, t)?, 1e-10, 0.0))
                    };
                    lift(run())
                }));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Elliptic
// ---------------------------------------------------------------------------

fn bip(a: u32, b: u32) -> Bipartition {
    Bipartition::new(row(a), row(b))
}

fn ep_params(ep: &EllipticParams) -> String {
    format!("t={} ts=({}) p={} q={}", fmt_c(ep.t), cl(&ep.ts), fmt_c(ep.p), fmt_c(ep.q))
}

/// Redraws until no inner pole lies within 10% of the unit circle.
fn separated_sample(rng: &mut ChaCha8Rng, lam: &Bipartition, mu: &Bipartition) -> EllipticParams {
    loop {
        let ep = EllipticParams::sample(rng);
        let clear = inner_poles(lam, mu, &ep, 1e-3).map(|ws| ws.iter().all(|w| (w.norm() - 1.0).abs() > 0.1));
        if clear.unwrap_or(false) {
            return ep;
        }
    }
}

fn suite_elliptic_beta(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Vec<Case> {
    let tol = cfg.tol(1e-8);
    let points = cfg.points(128);
    (0..4)
        .map(|i| {
            let ep = EllipticParams::sample(rng);
            Case::new(format!("draw={i}"), format!("{} points={points}", ep_params(&ep)), move || {
                let zero = Bipartition::default();
                let run = || -> Result<Outcome, String> {
                    let lhs = eaflt_lhs_n1(&zero, &zero, &ep, points).map_err(|e| e.to_string())?;
                    let rhs = elliptic_selberg_rhs(1, ep.t, &ep.ts, ep.p, ep.q).map_err(|e| e.to_string())?;
                    Ok(Outcome::numeric(lhs, rhs, tol, 0.0))
                };
                lift(run())
            })
        })
        .collect()
}

fn suite_elliptic_aflt(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Vec<Case> {
    let tol = cfg.tol(1e-7);
    let points = cfg.points(128);
    let mut out = Vec::new();
    let kadell = [(bip(1, 0), bip(0, 0)), (bip(0, 0), bip(1, 0)), (bip(1, 0), bip(1, 0)), (bip(2, 0), bip(0, 1)), (bip(1, 1), bip(1, 0))];
    for (lam, mu) in kadell {
        let ep = separated_sample(rng, &lam, &mu);
        out.push(Case::new(format!("kadell lam={lam} mu={mu}"), format!("{} points={points}", ep_params(&ep)), move || {
            let run = || -> Result<Outcome, crate::elliptic::EllipticError> {
                Ok(Outcome::numeric(kadell_lhs_n1(&lam, &mu, &ep, points)?, kadell_rhs(&lam, &mu, &ep)?, tol, 0.0))
            };
            lift(run())
        }));
    }
    let aflt = [(bip(1, 0), bip(0, 0)), (bip(0, 0), bip(1, 0)), (bip(1, 0), bip(1, 0)), (bip(0, 1), bip(1, 0)), (bip(1, 1), bip(0, 1))];
    for (lam, mu) in aflt {
        let ep = separated_sample(rng, &lam, &mu);
        out.push(Case::new(format!("aflt lam={lam} mu={mu}"), format!("{} points={points}", ep_params(&ep)), move || {
            let run = || -> Result<Outcome, crate::elliptic::EllipticError> {
                Ok(Outcome::numeric(eaflt_lhs_n1(&lam, &mu, &ep, points)?, eaflt_rhs_n1(&lam, &mu, &ep)?, tol, 0.0))
            };
            lift(run())
        }));
    }
    out
}

fn nomes(rng: &mut ChaCha8Rng) -> Nomes {
    let q = polar(rng, 0.2, 0.3);
    let t = polar(rng, 0.3, 0.6);
    let pp = polar(rng, 0.1, 0.3);
    Nomes::new(q, t, pp)
}

fn generic(rng: &mut ChaCha8Rng) -> C64 {
    polar(rng, 0.5, 1.5)
}

fn nm_params(nm: &Nomes) -> String {
    format!("q={} t={} p={}", fmt_c(nm.q), fmt_c(nm.t), fmt_c(nm.p))
}

fn suite_jackson(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Vec<Case> {
    let tol = cfg.tol(1e-10);
    let mut out = Vec::new();
    for draw in 0..3 {
        let nm = nomes(rng);
        let (a, b, cc, d) = (generic(rng), generic(rng), generic(rng), generic(rng));
        let base = format!("{} a={} b={} c={} d={}", nm_params(&nm), fmt_c(a), fmt_c(b), fmt_c(cc), fmt_c(d));
        for (l, nu) in [(0, 0), (1, 1), (2, 2), (1, 0), (2, 0), (2, 1), (3, 1)] {
            out.push(Case::new(format!("draw={draw} sum lam=({l}) nu=({nu})"), base.clone(), move || {
                lift(jackson_sides(l, nu, a, b, cc, d, &nm).map(|(x, y)| Outcome::numeric(x, y, tol, 0.0)))
            }));
        }
        let v = generic(rng);
        for (l, m) in [(0, 1), (1, 1), (2, 1), (1, 3), (2, 2)] {
            out.push(Case::new(format!("draw={draw} evaluation symmetry ({l},{m})"), format!("{base} v={}", fmt_c(v)), move || {
                lift(evaluation_symmetry_sides(l, m, v, a, b, &nm).map(|(x, y)| Outcome::numeric(x, y, tol, 0.0)))
            }));
        }
        let vs: Vec<C64> = (0..4).map(|_| generic(rng)).collect();
        for (l, nu) in [(0, 0), (1, 1), (1, 0), (2, 0), (2, 1), (3, 1)] {
            let vs2 = vs.clone();
            let params = format!("{base} v=({})", cl(&vs));
            out.push(Case::new(format!("draw={draw} skew pair ({l},{nu})"), params.clone(), move || {
                let run = || -> Result<Outcome, crate::elliptic::EllipticError> {
                    let sum = skew_interp(l, nu, &vs2[..2], a, b, &nm)?;
                    Ok(Outcome::numeric(sum, skew_interp_pair(l, nu, vs2[0], vs2[1], a, b, &nm)?, tol, 0.0))
                };
                lift(run())
            }));
            let vs2 = vs.clone();
            out.push(Case::new(format!("draw={draw} skew branching ({l},{nu})"), params, move || {
                let run = || -> Result<Outcome, crate::elliptic::EllipticError> {
                    let four = skew_interp(l, nu, &vs2, a, b, &nm)?;
                    Ok(Outcome::numeric(four, skew_interp_branched(l, nu, &vs2[..2], &vs2[2..], a, b, &nm)?, tol, 0.0))
                };
                lift(run())
            }));
        }
    }
    out
}

fn suite_connection(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Vec<Case> {
    let tol = cfg.tol(1e-10);
    let mut out = Vec::new();
    for draw in 0..3 {
        let nm = nomes(rng);
        let (a, b, x, a2) = (generic(rng), generic(rng), generic(rng), generic(rng));
        let base = format!("{} a={} a'={} b={} x={}", nm_params(&nm), fmt_c(a), fmt_c(a2), fmt_c(b), fmt_c(x));
        for l in 0..4u32 {
            out.push(Case::new(format!("draw={draw} connection lam=({l})"), base.clone(), move || {
                lift(connection_sides(l, x, a, a2, b, &nm).map(|(u, v)| Outcome::numeric(u, v, tol, 0.0)))
            }));
        }
        for l in 0..3u32 {
            out.push(Case::new(format!("draw={draw} skew expansion lam=({l})"), base.clone(), move || {
                lift(interpolation_skew_sides(l, x, a, b, &nm).map(|(u, v)| Outcome::numeric(u, v, tol, 0.0)))
            }));
        }
    }
    out
}

fn suite_mac_limit(_: &SuiteConfig, _: &mut ChaCha8Rng) -> Vec<Case> {
    let (x, cc, d, a, b) = (C64::new(0.8, 0.3), C64::new(0.5, -0.2), C64::new(0.7, 0.1), C64::new(0.9, 0.2), C64::new(0.6, -0.4));
    let (q, t) = (C64::new(0.3, 0.1), C64::new(0.4, -0.1));
    let (alpha, beta) = (0.25, 0.5);
    let params = format!(
        "lam=(1) x={} c={} d={} a={} b={} q={} t={} alpha={alpha} beta={beta}",
        fmt_c(x),
        fmt_c(cc),
        fmt_c(d),
        fmt_c(a),
        fmt_c(b),
        fmt_c(q),
        fmt_c(t)
    );
    let err = move |pv: f64| -> Result<f64, crate::elliptic::EllipticError> {
        let target = skew_limit_value(1, x, cc, d, a, q, t)?;
        let v = skew_limit_scaled(1, x, cc, d, a, b, q, t, pv, alpha, beta)?;
        Ok((v - target).norm() / target.norm())
    };
    vec![
        Case::new("trend p=1e-2,1e-3,1e-4", params.clone(), move || {
            let run = || -> Result<Outcome, crate::elliptic::EllipticError> {
                let errs = [err(1e-2)?, err(1e-3)?, err(1e-4)?];
                let decreasing = errs[0] > errs[1] && errs[1] > errs[2];
                Ok(Outcome::property(errs.iter().map(|e| format!("{e:e}")).collect::<Vec<_>>().join(","), "strictly decreasing".into(), decreasing))
            };
            lift(run())
        }),
        Case::new("value p=1e-16", params, move || {
            let run = || -> Result<Outcome, crate::elliptic::EllipticError> {
                let target = skew_limit_value(1, x, cc, d, a, q, t)?;
                let v = skew_limit_scaled(1, x, cc, d, a, b, q, t, 1e-16, alpha, beta)?;
                Ok(Outcome::numeric(v, target, 1e-3, 0.0).note("convergence rate about p^(1/4)"))
            };
            lift(run())
        }),
    ]
}

// ---------------------------------------------------------------------------
// Properties
// ---------------------------------------------------------------------------

fn suite_properties(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Vec<Case> {
    let mut out = Vec::new();
    // f transpose: f^{k,ℓ}_{λ,μ}(a) = f^{ℓ,k}_{μ,λ}(t/(aq))
    for (lam, mu) in skew_pairs(cfg) {
        let (k, l) = (lam.len().max(1), mu.len().max(1));
        let (l2, m2) = (lam.clone(), mu.clone());
        out.push(Case::new(format!("f transpose lam={lam} mu={mu}"), format!("k={k} l={l} a symbolic"), move || {
            let (q, t, a) = (var("q"), var("t"), var("a"));
            let a2 = &t / (&a * &q);
            let run = || -> Result<Outcome, crate::identities::IdentityError> {
                let x = f_function(&l2, &m2, k, Ell::Finite(l), &a)?;
                let y = f_function(&m2, &l2, l, Ell::Finite(k), &a2)?;
                Ok(Outcome::field(&x, &y))
            };
            lift(run())
        }));
        let (k3, l3) = (3usize.max(lam.len()), 3usize.max(mu.len()));
        out.push(Case::new(format!("skew-sum padding lam={lam} mu={mu}"), format!("k={k3} l={l3}"), move || {
            let run = || -> Result<Outcome, crate::identities::IdentityError> {
                let a = var("a");
                let x = skew_sum(&lam, &mu, lam.len(), Ell::Finite(mu.len()), &a)?;
                let y = skew_sum(&lam, &mu, k3, Ell::Finite(l3), &a)?;
                // both sides hold and the left side does not depend on the padding
                Ok(Outcome::property(
                    "lhs independent of (k,l)".into(),
                    "both identities hold".into(),
                    x.lhs == y.lhs && x.holds() && y.holds(),
                ))
            };
            lift(run())
        }));
    }
    // padding independence of the numeric closed forms
    let (q, t) = (c(MAC_Q), c(MAC_T));
    let (a, b) = (polar(rng, 0.5, 0.9), polar(rng, 0.3, 0.5));
    for n in [1usize, 2] {
        for lam in [Partition::empty(), p(&[1]), p(&[2, 1])].into_iter().filter(|l| l.len() <= n) {
            for mu in [Partition::empty(), p(&[1]), p(&[2, 1])] {
                let params = format!("q={MAC_Q} t={MAC_T} a={} b={}", fmt_c(a), fmt_c(b));
                let lam = lam.clone();
                out.push(Case::new(format!("mac padding n={n} lam={lam} mu={mu}"), params, move || {
                    let m = mu.len();
                    let run = || -> Result<Outcome, crate::coeffs::CoeffError> {
                        let x = mac_aflt_rhs(n, &lam, &mu, m, a, b, q, t)?;
                        let y = mac_aflt_rhs(n, &lam, &mu, m + 2, a, b, q, t)?;
                        Ok(Outcome::numeric(y, x, 1e-12, 0.0))
                    };
                    lift(run())
                }));
            }
        }
    }
    let pr = AnParams::new(&[2, 3], &[c(1.2), c(0.9)], c(0.8), c(0.3)).expect("valid parameters");
    for (l, m) in [(3usize, 1usize), (2, 3), (4, 2)] {
        let pr = pr.clone();
        out.push(Case::new(format!("an-aflt padding l={l} m={m}"), "k=(2,3) alpha=(1.2,0.9) beta=0.8 gamma=0.3 lam=(2,1) mu=(1)", move || {
            let (lam, mu) = (p(&[2, 1]), p(&[1]));
            let run = || -> Result<Outcome, crate::coeffs::CoeffError> {
                Ok(Outcome::numeric(an_aflt_rhs(&pr, &lam, &mu, l, m)?, an_aflt_rhs(&pr, &lam, &mu, 2, 1)?, 1e-12, 0.0))
            };
            lift(run())
        }));
    }
    // duality between the γ = 1 forms: conjugate last partition, sign (−1)^{|ν|}
    let pr1 = AnParams::new(&[1, 2], &[c(2.4), C64::new(3.3, 0.2)], C64::new(0.7, -0.1), c(1.0)).expect("valid parameters");
    for nu in [Partition::empty(), p(&[1]), p(&[2]), p(&[2, 1]), p(&[1, 1, 1])] {
        let pr1 = pr1.clone();
        out.push(Case::new(format!("gamma=1 duality nu={nu}"), "k=(1,2) alpha=(2.4,3.3+0.2i) beta=0.7-0.1i", move || {
            let run = || -> Result<Outcome, crate::coeffs::CoeffError> {
                let a = vec![p(&[1]), p(&[1]), nu.clone()];
                let b = vec![p(&[1]), p(&[1]), nu.conjugate()];
                let x = nplusone_rhs(&pr1, &a, &[1, 1, nu.len()])?;
                let y = gamma_one_rhs(&pr1, &b, &[1, 1, nu.conjugate().len() + 1])?;
                let sign = if nu.size() % 2 == 0 { 1.0 } else { -1.0 };
                Ok(Outcome::numeric(x, y * sign, 1e-11, 0.0))
            };
            lift(run())
        }));
    }
    // reflection and quasi-periodicity guards
    for i in 0..5 {
        let ep = EllipticParams::sample(rng);
        let z = generic(rng);
        out.push(Case::new(format!("elliptic guards draw={i}"), ep_params(&ep), move || {
            let zs: Vec<C64> = ep.ts.iter().copied().chain([z, ep.t]).collect();
            let run = || -> Result<Outcome, crate::elliptic::EllipticError> {
                let d = guard_defect(&zs, ep.p, ep.q)?;
                let bal = ep.balancing_defect(1);
                Ok(Outcome::numeric(c(d.max(bal)), c(0.0), 1e-10, 1.0).note("largest guard defect"))
            };
            lift(run())
        }));
    }
    // chain coverage: sampled points lie in exactly one region
    for ks in [vec![1usize, 2], vec![2, 3], vec![1, 2, 2], vec![2, 2]] {
        let seed: u64 = rng.gen();
        out.push(Case::new(format!("chain coverage k=({})", list(&ks)), format!("gamma=0.2 companion beta=0.7 seed={seed}"), move || {
            let run = || -> Result<Outcome, crate::quadrature::QuadError> {
                let chain = enumerate_chain(&ks, 0.2)?;
                let comp = enumerate_companion_chain(&ks, 0.7, 0.2)?;
                let mut r = ChaCha8Rng::seed_from_u64(seed);
                let n = ks.len();
                let (mut tested, mut bad) = (0, 0);
                while tested < 200 {
                    let t: Vec<Vec<f64>> = ks
                        .iter()
                        .map(|&k| {
                            let mut v: Vec<f64> = (0..k).map(|_| r.gen::<f64>()).collect();
                            v.sort_by(f64::total_cmp);
                            v
                        })
                        .collect();
                    let below = |s: usize| (1..=ks[s]).all(|i| t[s][i - 1] < t[s + 1][i + ks[s + 1] - ks[s] - 1]);
                    if (0..n - 2).all(below) && comp.regions_containing(&t).len() != 1 {
                        bad += 1;
                    }
                    if (0..n - 1).all(below) {
                        if chain.regions_containing(&t).len() != 1 {
                            bad += 1;
                        }
                        tested += 1;
                    }
                }
                Ok(Outcome::property(format!("{bad} points outside exactly one region"), "0".into(), bad == 0))
            };
            lift(run())
        }));
    }
    // torus radius independence on the Macdonald AFLT integrand
    let points = cfg.points(320);
    for n in [1usize, 2] {
        let params = format!("q={MAC_Q} t={MAC_T} a={} b={} points={points}", fmt_c(a), fmt_c(b));
        out.push(Case::new(format!("torus radius n={n}"), params, move || {
            let (lam, mu) = (p(&[1]), p(&[2]));
            let run = || -> Result<Outcome, crate::quadrature::QuadError> {
                let r1 = (1.0 + b.norm()) / 2.0;
                let r2 = (3.0 + b.norm()) / 4.0;
                let v1 = mac_aflt_lhs(n, &lam, &mu, a, b, q, t, &TorusSpec { rho: r1, points })?;
                let v2 = mac_aflt_lhs(n, &lam, &mu, a, b, q, t, &TorusSpec { rho: r2, points })?;
                Ok(Outcome::numeric(v2, v1, 1e-9, 0.0).note(format!("radii {r1} and {r2}")))
            };
            lift(run())
        }));
    }
    out
}

// ---------------------------------------------------------------------------
// One-off evaluation
// ---------------------------------------------------------------------------

pub const FORMULAS: &[(&str, &str)] = &[
    ("selberg", "--k --alpha --beta --gamma"),
    ("aflt", "--k --lambda --mu --alpha --beta --gamma"),
    ("an-selberg", "--k a,b,.. --alpha a1,a2,.. --beta --gamma"),
    ("an-aflt", "--k a,b,.. --alpha a1,a2,.. --beta --gamma --lambda --mu"),
    ("mac-aflt", "--n --lambda --mu --a --b --q --t"),
    ("mac-norm", "--n --lambda --q --t"),
    ("elliptic-selberg", "--n --t --ts t1,..,t6 --p --q"),
];

fn parse_c(s: &str) -> Result<C64, CliError> {
    C64::from_str(s.trim()).map_err(|_| CliError::Eval(format!("cannot parse `{s}` as a complex number")))
}

fn parse_list(s: &str) -> Result<Vec<C64>, CliError> {
    s.split(',').map(parse_c).collect()
}

fn one_value(v: &Option<String>, name: &str) -> Result<C64, CliError> {
    match v {
        Some(s) => parse_c(s),
        None => Err(CliError::Eval(format!("missing --{name}"))),
    }
}

fn partition_arg(v: &Option<String>) -> Result<Partition, CliError> {
    match v {
        Some(s) => Partition::from_str(s).map_err(|e| CliError::Eval(format!("bad partition `{s}`: {e}"))),
        None => Ok(Partition::empty()),
    }
}

/// Evaluates a named closed form.
pub fn eval_formula(args: &EvalArgs) -> Result<C64, CliError> {
    let ks = || args.k.clone().ok_or_else(|| CliError::Eval("missing --k".into()));
    let alphas = || -> Result<Vec<C64>, CliError> {
        args.alpha.as_deref().map(parse_list).unwrap_or_else(|| Err(CliError::Eval("missing --alpha".into())))
    };
    let single_k = || -> Result<usize, CliError> {
        let k = ks()?;
        if k.len() != 1 {
            return Err(CliError::Eval("this formula takes a single --k".into()));
        }
        Ok(k[0])
    };
    let n = || args.n.ok_or_else(|| CliError::Eval("missing --n".into()));
    let ev = |e: &dyn std::fmt::Display| CliError::Eval(e.to_string());
    match args.formula.as_str() {
        "selberg" => {
            let a = alphas()?;
            selberg_rhs(single_k()?, a[0], one_value(&args.beta, "beta")?, one_value(&args.gamma, "gamma")?).map_err(|e| ev(&e))
        }
        "aflt" => {
            let (lam, mu) = (partition_arg(&args.lambda)?, partition_arg(&args.mu)?);
            let a = alphas()?;
            aflt_rhs(single_k()?, &lam, &mu, mu.len(), a[0], one_value(&args.beta, "beta")?, one_value(&args.gamma, "gamma")?)
                .map_err(|e| ev(&e))
        }
        "an-selberg" | "an-aflt" => {
            let pr = AnParams::new(&ks()?, &alphas()?, one_value(&args.beta, "beta")?, one_value(&args.gamma, "gamma")?)
                .map_err(|e| ev(&e))?;
            if args.formula == "an-selberg" {
                an_selberg_rhs(&pr).map_err(|e| ev(&e))
            } else {
                let (lam, mu) = (partition_arg(&args.lambda)?, partition_arg(&args.mu)?);
                an_aflt_rhs(&pr, &lam, &mu, lam.len(), mu.len()).map_err(|e| ev(&e))
            }
        }
        "mac-aflt" => {
            let (lam, mu) = (partition_arg(&args.lambda)?, partition_arg(&args.mu)?);
            let n = n()?;
            if lam.len() > n {
                return Err(CliError::Eval(format!("λ = {lam} has more than n = {n} parts")));
            }
            mac_aflt_rhs(
                n,
                &lam,
                &mu,
                mu.len(),
                one_value(&args.a, "a")?,
                one_value(&args.b, "b")?,
                one_value(&args.q, "q")?,
                one_value(&args.t, "t")?,
            )
            .map_err(|e| ev(&e))
        }
        "mac-norm" => {
            let lam = partition_arg(&args.lambda)?;
            let n = n()?;
            if lam.len() > n {
                return Err(CliError::Eval(format!("λ = {lam} has more than n = {n} parts")));
            }
            macdonald_norm(n, &lam, one_value(&args.q, "q")?, one_value(&args.t, "t")?).map_err(|e| ev(&e))
        }
        "elliptic-selberg" => {
            let ts = args.ts.as_deref().map(parse_list).unwrap_or_else(|| Err(CliError::Eval("missing --ts".into())))?;
            let ts: [C64; 6] = ts.try_into().map_err(|_| CliError::Eval("--ts needs six values".into()))?;
            elliptic_selberg_rhs(n()?, one_value(&args.t, "t")?, &ts, one_value(&args.p, "p")?, one_value(&args.q, "q")?)
                .map_err(|e| ev(&e))
        }
        other => Err(CliError::Eval(format!("unknown formula `{other}`"))),
    }
}

/// Real values print with a small-denominator fraction when one matches.
pub fn format_value(v: C64) -> String {
    if v.im.abs() > 1e-14 * v.norm().max(1e-300) {
        return fmt_c(v);
    }
    let x = v.re;
    if x.is_finite() && x.abs() < 1e12 {
        let close = |d: i64| {
            let n = (x * d as f64).round();
            ((n / d as f64 - x).abs() <= 1e-12 * x.abs().max(1.0)).then_some(n as i64)
        };
        if let Some((n, d)) = (2..=10_000i64).find_map(|d| close(d).map(|n| (n, d))) {
            let r = num_rational::Ratio::new(n, d);
            if *r.denom() > 1 {
                return format!("{r} ≈ {x}");
            }
        }
    }
    format!("{x}")
}

// ---------------------------------------------------------------------------
// Command line
// ---------------------------------------------------------------------------

#[derive(Parser, Debug)]
#[command(name = "aflt", version, about = "Verify Selberg and AFLT-type integral identities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a verification suite (or `all`).
    Verify(VerifyArgs),
    /// Evaluate a closed form.
    Eval(EvalArgs),
    /// List suites and formulas.
    List,
}

#[derive(Args, Debug, Default)]
pub struct VerifyArgs {
    pub suite: String,
    /// Declarative config (JSON, same keys as the flags); flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub max_degree: Option<u32>,
    #[arg(long)]
    pub max_size: Option<u32>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<usize>>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub quad_points: Option<usize>,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub precision: Option<Precision>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub epsilon0: Option<f64>,
    /// Write runtime_ms = 0 so that reruns are byte-identical.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Args, Debug, Default)]
pub struct EvalArgs {
    pub formula: String,
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<usize>>,
    #[arg(long)]
    pub n: Option<usize>,
    /// One value, or a comma-separated list for the rank-n forms.
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub mu: Option<String>,
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub t: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub ts: Option<String>,
}

/// Merges the optional config file with the flags.
pub fn resolve_config(args: &VerifyArgs) -> Result<SuiteConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str::<SuiteConfig>(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        None => SuiteConfig::default(),
    };
    cfg.suite = args.suite.clone();
    macro_rules! over {
        ($($f:ident),*) => { $( if args.$f.is_some() { cfg.$f = args.$f.clone(); } )* };
    }
    over!(max_degree, max_size, n, k, tol, quad_points, jobs, report, rho, theta, radius, epsilon0);
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(p) = args.precision {
        cfg.precision = p;
    }
    if args.no_timing {
        cfg.timing = false;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Runs the command line and returns the process exit status.
pub fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::List => {
            println!("suites:");
            for s in SUITES {
                println!("  {:<16} {}", s.name, s.about);
            }
            println!("  {:<16} every suite above", "all");
            println!("formulas:");
            for (name, flags) in FORMULAS {
                println!("  {name:<16} {flags}");
            }
            Ok(0)
        }
        Command::Eval(args) => {
            println!("{}", format_value(eval_formula(&args)?));
            Ok(0)
        }
        Command::Verify(args) => {
            let cfg = resolve_config(&args)?;
            let reports = run_suite(&cfg)?;
            if let Some(path) = &cfg.report {
                append_reports(path, &reports)?;
            }
            let mut by_suite: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
            for r in &reports {
                let e = by_suite.entry(&r.suite).or_default();
                e.1 += 1;
                if r.pass {
                    e.0 += 1;
                } else {
                    println!("FAIL {} / {}: rel_err {:e} (tol {:e}) {}", r.suite, r.case_id, r.rel_err, r.tol, r.notes.join("; "));
                }
            }
            for (s, (ok, total)) in &by_suite {
                println!("{s}: {ok}/{total} passed");
            }
            Ok(exit_status(&reports))
        }
    }
}
