//! Exact forms of the skew-Macdonald summation, the Aₙ Cauchy-type
//! identities and the bifundamental/Selberg-average bridge.

use std::collections::HashMap;

use num_complex::Complex64 as C64;

use crate::closedform::{aflt_rhs, selberg_rhs};
use crate::coeffs::{qpoch, rqpoch, CoeffError};
use crate::field::{var, FieldElement, Mono, Var};
use crate::macdonald::{b as b_lambda, skew_p, Family};
use crate::partitions::{enumerate, subpartitions, Bipartition, Partition};
use crate::series::Series;
use crate::symfunc::{Alphabet, PlethysmEvaluator, SymError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IdentityError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("pole in a specialised factor")]
    Pole,
    #[error(transparent)]
    Sym(#[from] SymError),
}

impl From<CoeffError> for IdentityError {
    fn from(_: CoeffError) -> Self {
        IdentityError::Pole
    }
}

/// Length bound that may be infinite, with t^∞ := 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ell {
    Finite(usize),
    Infinite,
}

impl Ell {
    fn covers(&self, n: usize) -> bool {
        match self {
            Ell::Finite(l) => *l >= n,
            Ell::Infinite => true,
        }
    }

    /// t^ℓ, zero when ℓ is infinite.
    fn t_pow(&self, shift: i64) -> FieldElement {
        match self {
            Ell::Finite(l) => var("t").pow(*l as i64 + shift),
            Ell::Infinite => FieldElement::zero(),
        }
    }
}

/// Two sides of an identity in the field.
#[derive(Clone, Debug)]
pub struct FieldIdentity {
    pub lhs: FieldElement,
    pub rhs: FieldElement,
}

impl FieldIdentity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Two sides of a series identity truncated at total letter degree `cap`.
#[derive(Clone, Debug)]
pub struct SeriesIdentity {
    pub lhs: Series,
    pub rhs: Series,
    pub cap: u32,
}

impl SeriesIdentity {
    pub fn holds(&self) -> bool {
        self.first_difference().is_none()
    }

    /// The smallest monomial whose coefficients differ.
    pub fn first_difference(&self) -> Option<(Mono, FieldElement, FieldElement)> {
        let d = self.lhs.sub(&self.rhs);
        d.terms().keys().next().map(|m| (m.clone(), self.lhs.coeff(m), self.rhs.coeff(m)))
    }
}

fn one() -> FieldElement {
    FieldElement::one()
}

fn ratio(num: FieldElement, t: &FieldElement) -> Alphabet {
    // (1 − num)/(1 − t)
    Alphabet::Ratio(one(), num, t.clone())
}

// ---------------------------------------------------------------------------
// The f-function
// ---------------------------------------------------------------------------

/// f^{k,ℓ}_{λ,μ}(a;q,t) = t^{−k|μ|} ∏_{i≤k, j≤ℓ} (aqt^{j−i−1};q)_{λ_i−μ_j} / (aqt^{j−i};q)_{λ_i−μ_j}.
pub fn f_function(lam: &Partition, mu: &Partition, k: usize, ell: Ell, a: &FieldElement) -> Result<FieldElement, IdentityError> {
    if k < lam.len() || !ell.covers(mu.len()) {
        return Err(IdentityError::Precondition(format!("k ≥ l({lam}) and ℓ ≥ l({mu}) required")));
    }
    let (q, t) = (var("q"), var("t"));
    let aq = a * &q;
    let l_fin = match ell {
        Ell::Finite(l) => l,
        Ell::Infinite => mu.len(),
    };
    let mut v = t.pow(-((k as i64) * mu.size() as i64));
    for i in 1..=k {
        for j in 1..=l_fin {
            let n = lam.part(i) as i64 - mu.part(j) as i64;
            let e = j as i64 - i as i64;
            v = v * qpoch(&(&aq * t.pow(e - 1)), &q, n)? * rqpoch(&(&aq * t.pow(e)), &q, n)?;
        }
        if ell == Ell::Infinite {
            // telescoped tail over j > l(μ), where μ_j = 0 and t^ℓ = 0
            v = v * qpoch(&(&aq * t.pow(mu.len() as i64 - i as i64)), &q, lam.part(i) as i64)?;
        }
    }
    Ok(v)
}

/// lim_{b→1} f^{k,ℓ}_{λ,μ}(b t^{k−ℓ}; q, t) for k ≤ ℓ.
///
/// Factors with a nonzero power of t are regular at b = 1. The remaining
/// t-free factors telescope to
/// 1/(q;q)_{λ_k−μ_ℓ} ∏_{i=ℓ−k+1}^{ℓ−1} (q^{1+λ_{i+k−ℓ}−μ_i};q)_{μ_i−μ_{i+1}}.
pub fn f_limit(lam: &Partition, mu: &Partition, k: usize, ell: usize) -> Result<FieldElement, IdentityError> {
    if k > ell || k < lam.len() || ell < mu.len() {
        return Err(IdentityError::Precondition(format!("need l({lam}) ≤ k ≤ ℓ and l({mu}) ≤ ℓ")));
    }
    if k == 0 {
        return Ok(one());
    }
    let (q, t) = (var("q"), var("t"));
    let shift = k as i64 - ell as i64;
    let mut v = t.pow(-((k as i64) * mu.size() as i64));
    for i in 1..=k {
        for j in 1..=ell {
            let n = lam.part(i) as i64 - mu.part(j) as i64;
            let e = j as i64 - i as i64 + shift;
            if e - 1 != 0 {
                v = v * qpoch(&(&q * t.pow(e - 1)), &q, n)?;
            }
            if e != 0 {
                v = v * rqpoch(&(&q * t.pow(e)), &q, n)?;
            }
        }
    }
    v = v * rqpoch(&q, &q, lam.part(k) as i64 - mu.part(ell) as i64)?;
    for i in ell - k + 1..ell {
        let lam_i = lam.part((i as i64 + shift) as usize) as i64;
        let e = 1 + lam_i - mu.part(i) as i64;
        v = v * qpoch(&q.pow(e), &q, mu.part(i) as i64 - mu.part(i + 1) as i64)?;
    }
    Ok(v)
}

// ---------------------------------------------------------------------------
// Skew-sum
// ---------------------------------------------------------------------------

fn skew_at(family: Family, q_side: bool, lam: &Partition, nu: &Partition, a: &Alphabet) -> Result<FieldElement, IdentityError> {
    let s = skew_p(family, lam, nu).plethysm(a, None)?.constant_term();
    Ok(if q_side { s * b_lambda(family, lam) / b_lambda(family, nu) } else { s })
}

fn p_at(lam: &Partition, nu: &Partition, a: &Alphabet) -> Result<FieldElement, IdentityError> {
    skew_at(Family::Macdonald, false, lam, nu, a)
}

fn q_at(lam: &Partition, nu: &Partition, a: &Alphabet) -> Result<FieldElement, IdentityError> {
    skew_at(Family::Macdonald, true, lam, nu, a)
}

fn common_subpartitions(lam: &Partition, mu: &Partition) -> Vec<Partition> {
    subpartitions(lam).into_iter().filter(|nu| mu.contains(nu)).collect()
}

/// Σ_ν t^{−|ν|} P_{μ/ν}[(1−1/a)/(1−t)] Q_{λ/ν}[(1−aq/t)/(1−t)]
/// against P_μ[(1−t^k/a)/(1−t)] Q_λ[(1−aqt^{ℓ−1})/(1−t)] f^{k,ℓ}_{λ,μ}(a).
pub fn skew_sum(lam: &Partition, mu: &Partition, k: usize, ell: Ell, a: &FieldElement) -> Result<FieldIdentity, IdentityError> {
    let (q, t) = (var("q"), var("t"));
    let ai = a.inv().map_err(|_| IdentityError::Pole)?;
    let x1 = ratio(ai.clone(), &t);
    let x2 = ratio(a * &q / &t, &t);
    let mut terms = Vec::new();
    for nu in common_subpartitions(lam, mu) {
        terms.push(t.pow(-(nu.size() as i64)) * p_at(mu, &nu, &x1)? * q_at(lam, &nu, &x2)?);
    }
    let lhs = crate::series::sum_fe(terms);
    let e = Partition::empty();
    let rhs = p_at(mu, &e, &ratio(t.pow(k as i64) * &ai, &t))?
        * q_at(lam, &e, &ratio(a * &q * ell.t_pow(-1), &t))?
        * f_function(lam, mu, k, ell, a)?;
    Ok(FieldIdentity { lhs, rhs })
}

/// The skew-sum at a = t^{k−ℓ} with the limiting f, for k ≤ ℓ and l(λ) ≤ k.
pub fn skew_sum_limit(lam: &Partition, mu: &Partition, k: usize, ell: usize) -> Result<FieldIdentity, IdentityError> {
    if k > ell || lam.len() > k {
        return Err(IdentityError::Precondition(format!("need l({lam}) ≤ k ≤ ℓ")));
    }
    let (q, t) = (var("q"), var("t"));
    let d = k as i64 - ell as i64;
    let mut terms = Vec::new();
    for nu in common_subpartitions(lam, mu) {
        terms.push(
            t.pow(-(nu.size() as i64))
                * p_at(mu, &nu, &ratio(t.pow(-d), &t))?
                * q_at(lam, &nu, &ratio(&q * t.pow(d - 1), &t))?,
        );
    }
    let lhs = crate::series::sum_fe(terms);
    // both sides vanish when l(μ) > ℓ
    let f = if mu.len() > ell { FieldElement::zero() } else { f_limit(lam, mu, k, ell)? };
    let e = Partition::empty();
    let rhs = p_at(mu, &e, &ratio(t.pow(ell as i64), &t))? * q_at(lam, &e, &ratio(&q * t.pow(k as i64 - 1), &t))? * f;
    Ok(FieldIdentity { lhs, rhs })
}

// ---------------------------------------------------------------------------
// Cauchy-type identities
// ---------------------------------------------------------------------------

fn letter_vars(prefix: &str, n: usize) -> Vec<Var> {
    (1..=n).map(|i| Var::new(&format!("{prefix}{i}"))).collect()
}

fn mono(vs: &[Var]) -> Mono {
    vs.iter().fold(Mono::one(), |m, v| m.mul(&Mono::var(*v, 1)))
}

/// Accumulates σ_1[E] for E = Σ c·m/(1 − q) with monomial c and letter
/// monomial m, so that each term contributes a ratio of infinite products.
struct InfiniteProduct {
    exponent: Series,
    cap: u32,
}

impl InfiniteProduct {
    fn new(cap: u32) -> Self {
        InfiniteProduct { exponent: Series::zero(Some(cap)), cap }
    }

    fn term(&mut self, m: &Mono, c: FieldElement) {
        let c = c / (one() - var("q"));
        self.exponent = self.exponent.add(&Series::monomial(m.clone(), c, Some(self.cap)));
    }

    /// Multiplies by (u·m;q)_∞ / (v·m;q)_∞ for a letter monomial m.
    fn ratio(&mut self, u: &FieldElement, v: &FieldElement, m: &Mono) {
        self.term(m, v.clone());
        self.term(m, -u.clone());
    }

    fn series(&self) -> Series {
        let cap = Some(self.cap);
        let mut psi = Series::zero(cap);
        for k in 1..=self.cap {
            let pk = self.exponent.adams(k).with_cap(cap);
            psi = psi.add(&pk.scale(&FieldElement::from_ratio(1, k as i64)));
        }
        psi.exp()
    }
}

/// Σ_λ P_λ[X] Q_{λ/μ}[Y] against P_μ[X] σ_1[(1−t)/(1−q) XY] with |X| = nx and
/// |Y| = ny letters.
pub fn cauchy(mu: &Partition, nx: usize, ny: usize, cap: u32) -> Result<SeriesIdentity, IdentityError> {
    let xs = letter_vars("x", nx);
    let ys = letter_vars("y", ny);
    let c = Some(cap);
    let mut ex = PlethysmEvaluator::new(Alphabet::letters(&xs), c);
    let mut ey = PlethysmEvaluator::new(Alphabet::letters(&ys), c);
    let mut lhs = Series::zero(c);
    for lam in enumerate(cap + mu.size(), nx) {
        if 2 * lam.size() > cap + mu.size() || !lam.contains(mu) {
            continue;
        }
        let px = ex.eval(&skew_p(Family::Macdonald, &lam, &Partition::empty()))?;
        let qy = ey.eval(&skew_p(Family::Macdonald, &lam, mu))?.scale(&(b_lambda(Family::Macdonald, &lam) / b_lambda(Family::Macdonald, mu)));
        lhs = lhs.add(&px.mul(&qy));
    }
    let mut prod = InfiniteProduct::new(cap);
    let t = var("t");
    for x in &xs {
        for y in &ys {
            prod.ratio(&t, &one(), &mono(&[*x, *y]));
        }
    }
    let rhs = ex.eval(&skew_p(Family::Macdonald, mu, &Partition::empty()))?.mul(&prod.series());
    Ok(SeriesIdentity { lhs, rhs, cap })
}

/// Which Aₙ Cauchy-type formula to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CauchyVariant {
    /// Formula I, finite k_n = |Y⁽ⁿ⁾|, a_{n−1} symbolic.
    IFinite,
    /// Formula I with k_n = ∞ and a countable Y⁽ⁿ⁾.
    IInfinite,
    /// Formula II: a_{n−1} = t^{k_{n−1}−k_n}, countable Y⁽ⁿ⁾.
    II,
    /// Formula II with μ⁽ⁿ⁾ = 0 and Y⁽ⁿ⁾ ↦ Y⁽ⁿ⁾ + (c − d)/(1 − t), c and d
    /// treated as letters.
    IIPlethystic,
}

/// Input to [`an_cauchy`]. `ks` has length n; for `IInfinite` its last entry
/// is ignored.
#[derive(Clone, Debug)]
pub struct AnCauchy {
    pub ks: Vec<usize>,
    pub mu: Partition,
    pub cap: u32,
    pub variant: CauchyVariant,
}

/// Enumerates (λ⁽¹⁾,…,λ⁽ⁿ⁾) with the given length bounds whose weighted size
/// Σ w_r |λ⁽ʳ⁾| stays within `budget`.
fn tuples(bounds: &[Option<usize>], weights: &[u32], budget: u32) -> Vec<Vec<Partition>> {
    let mut out = Vec::new();
    fn rec(r: usize, bounds: &[Option<usize>], w: &[u32], left: u32, cur: &mut Vec<Partition>, out: &mut Vec<Vec<Partition>>) {
        if r == bounds.len() {
            out.push(cur.clone());
            return;
        }
        let max = if w[r] == 0 { left } else { left / w[r] };
        for lam in enumerate(max, bounds[r].unwrap_or(max as usize)) {
            cur.push(lam.clone());
            rec(r + 1, bounds, w, left - w[r] * lam.size(), cur, out);
            cur.pop();
        }
    }
    rec(0, bounds, weights, budget, &mut Vec::new(), &mut out);
    out
}

/// Both sides of the Aₙ Cauchy-type formula, truncated at total degree
/// `cap` in the letters x, y, z (and c, d).
///
/// X⁽¹⁾ has k₁ letters. A countable Y⁽ⁿ⁾ is cut to `cap` letters, which
/// changes no coefficient of degree ≤ cap.
pub fn an_cauchy(spec: &AnCauchy) -> Result<SeriesIdentity, IdentityError> {
    let n = spec.ks.len();
    if n == 0 {
        return Err(IdentityError::Precondition("n ≥ 1".into()));
    }
    let ks = &spec.ks;
    let ii = matches!(spec.variant, CauchyVariant::II | CauchyVariant::IIPlethystic);
    if ks[..n - 1].windows(2).any(|w| w[0] > w[1]) || (ii && n > 1 && ks[n - 2] > ks[n - 1]) {
        return Err(IdentityError::Precondition("k₁ ≤ k₂ ≤ … required".into()));
    }
    let plethystic = spec.variant == CauchyVariant::IIPlethystic;
    if plethystic && !spec.mu.is_empty() {
        return Err(IdentityError::Precondition("the plethystic form has μ⁽ⁿ⁾ = 0".into()));
    }
    let cap = spec.cap;
    let c = Some(cap);
    let (q, t) = (var("q"), var("t"));
    let kn = match spec.variant {
        CauchyVariant::IInfinite => Ell::Infinite,
        _ => Ell::Finite(ks[n - 1]),
    };
    let ny = match spec.variant {
        CauchyVariant::IFinite => ks[n - 1],
        _ => cap as usize,
    };
    let xs = letter_vars("x", ks[0]);
    let ys = letter_vars("y", ny);
    let zs = letter_vars("z", n.saturating_sub(1));
    let zprod = |lo: usize, hi: usize| mono(&zs[lo - 1..hi]); // z_lo ⋯ z_hi, 1-based

    // a_r for r = 1..n−1
    let mut a: Vec<FieldElement> = (1..n).map(|r| t.pow(ks[r - 1] as i64 - ks[r] as i64)).collect();
    if n > 1 && matches!(spec.variant, CauchyVariant::IFinite | CauchyVariant::IInfinite) {
        a[n - 2] = var("a");
    }
    let k_pow = |r: usize| -> FieldElement {
        // t^{k_r}, 1-based, with t^∞ = 0
        if r == n { kn.t_pow(0) } else { t.pow(ks[r - 1] as i64) }
    };

    // alphabets
    let mut x_alph = vec![Alphabet::letters(&xs)];
    for r in 1..n {
        x_alph.push(ratio(k_pow(r) / &a[r - 1], &t));
    }
    let mut y_alph = Vec::new();
    for r in 1..n {
        let z = Alphabet::Expr(Series::letter(zs[r - 1], c));
        y_alph.push(z.times(Alphabet::Ratio(t.clone(), &a[r - 1] * &q * k_pow(r + 1), t.clone())));
    }
    let mut yn = Alphabet::letters(&ys);
    if plethystic {
        let cd = Series::letter(Var::new("c"), c).sub(&Series::letter(Var::new("d"), c));
        yn = yn.plus(Alphabet::Expr(cd.scale(&(one() / (one() - &t)))));
    }
    y_alph.push(yn);

    let mut xev: Vec<PlethysmEvaluator> = x_alph.into_iter().map(|a| PlethysmEvaluator::new(a, c)).collect();
    let mut yev: Vec<PlethysmEvaluator> = y_alph.into_iter().map(|a| PlethysmEvaluator::new(a, c)).collect();

    // Letter degree of a term: |λ⁽¹⁾| from X⁽¹⁾, |λ⁽ʳ⁾| from z_r for r < n and
    // |λ⁽ⁿ⁾| − |μ| from Y⁽ⁿ⁾.
    let mut weights = vec![1u32; n];
    weights[0] = 2;
    let mut bounds: Vec<Option<usize>> = ks.iter().map(|&k| Some(k)).collect();
    if spec.variant == CauchyVariant::IInfinite {
        bounds[n - 1] = None;
    }
    let budget = cap + spec.mu.size();
    let empty = Partition::empty();
    let mut px_cache: Vec<HashMap<Partition, Series>> = vec![HashMap::new(); n];
    let mut qy_cache: Vec<HashMap<Partition, Series>> = vec![HashMap::new(); n];
    let mut lhs = Series::zero(c);
    for lams in tuples(&bounds, &weights, budget) {
        if !lams[n - 1].contains(&spec.mu) {
            continue;
        }
        let mut term = Series::one(c);
        for r in 0..n {
            let lam = &lams[r];
            if !px_cache[r].contains_key(lam) {
                let s = xev[r].eval(&skew_p(Family::Macdonald, lam, &empty))?;
                px_cache[r].insert(lam.clone(), s);
            }
            if !qy_cache[r].contains_key(lam) {
                let inner = if r == n - 1 { &spec.mu } else { &empty };
                let s = yev[r]
                    .eval(&skew_p(Family::Macdonald, lam, inner))?
                    .scale(&(b_lambda(Family::Macdonald, lam) / b_lambda(Family::Macdonald, inner)));
                qy_cache[r].insert(lam.clone(), s);
            }
            term = term.mul(&px_cache[r][lam]).mul(&qy_cache[r][lam]);
            if term.is_zero() {
                break;
            }
        }
        if term.is_zero() {
            continue;
        }
        for r in 0..n - 1 {
            let f = if r < n - 2 || ii {
                f_limit(&lams[r], &lams[r + 1], ks[r], ks[r + 1])?
            } else {
                let ell = if spec.variant == CauchyVariant::IInfinite { Ell::Infinite } else { Ell::Finite(ks[r + 1]) };
                f_function(&lams[r], &lams[r + 1], ks[r], ell, &a[r])?
            };
            term = term.scale(&f);
        }
        lhs = lhs.add(&term);
    }

    // right-hand side
    let mut prod = InfiniteProduct::new(cap);
    for r in 1..n {
        for x in &xs {
            let m = zprod(1, r).mul(&Mono::var(*x, 1));
            prod.ratio(&(&a[r - 1] * &q), &t, &m);
        }
        for y in &ys {
            let m = zprod(r + 1, n - 1).mul(&Mono::var(*y, 1));
            prod.ratio(&a[r - 1].inv().unwrap(), &one(), &m);
        }
    }
    for x in &xs {
        for y in &ys {
            let m = zprod(1, n - 1).mul(&mono(&[*x, *y]));
            prod.ratio(&t, &one(), &m);
        }
    }
    for r in 1..n {
        for s in r + 1..n {
            for i in 1..=(ks[r] - ks[r - 1]) as i64 {
                prod.ratio(&(&a[s - 1] * &q * t.pow(i - 1)), &t.pow(i), &zprod(r + 1, s));
            }
        }
    }
    if plethystic {
        // (d·m;q)_∞/(c·m;q)_∞ with c, d letters
        let (cv, dv) = (Mono::var(Var::new("c"), 1), Mono::var(Var::new("d"), 1));
        let mut cd = |m: &Mono, w: FieldElement| {
            prod.term(&m.mul(&cv), w.clone());
            prod.term(&m.mul(&dv), -w);
        };
        for x in &xs {
            cd(&zprod(1, n - 1).mul(&Mono::var(*x, 1)), one());
        }
        for r in 1..n {
            for i in 1..=(ks[r] - ks[r - 1]) as i64 {
                cd(&zprod(r + 1, n - 1), t.pow(i - 1));
            }
        }
    }
    let mut w = vec![Alphabet::Expr(Series::letters(&xs, c).mul(&Series::monomial(zprod(1, n - 1), one(), c)))];
    for r in 1..n {
        let z = Alphabet::Expr(Series::monomial(zprod(r + 1, n - 1), one(), c));
        w.push(z.times(ratio(a[r - 1].inv().unwrap(), &t)));
    }
    let pw = PlethysmEvaluator::new(Alphabet::Sum(w), c).eval(&skew_p(Family::Macdonald, &spec.mu, &empty))?;
    let rhs = pw.mul(&prod.series());
    Ok(SeriesIdentity { lhs, rhs, cap })
}

// ---------------------------------------------------------------------------
// Bifundamental contribution and the Selberg-average bridge
// ---------------------------------------------------------------------------

/// E(u, λ, μ, s) = u − b(μ'_j − i) + b⁻¹(λ_i − j + 1) for s = (i, j).
pub fn e_function(u: C64, lam: &Partition, mu: &Partition, s: (usize, usize), b: C64) -> C64 {
    let (i, j) = s;
    let mu_conj = mu.conjugate();
    u - b * (mu_conj.part(j) as f64 - i as f64) + (lam.part(i) as f64 - j as f64 + 1.0) / b
}

/// Z_bifund((u₁,u₂), 𝛌; (v₁,v₂), 𝛍; m) as a finite product over cells.
pub fn zbifund(u: [C64; 2], lam: &Bipartition, v: [C64; 2], mu: &Bipartition, m: C64, b: C64) -> C64 {
    let qq = b + 1.0 / b;
    let l = [&lam.first, &lam.second];
    let mm = [&mu.first, &mu.second];
    let mut z = C64::new(1.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            for s in l[i].cells() {
                z *= e_function(u[i] - v[j], l[i], mm[j], s, b) - m;
            }
            for s in mm[j].cells() {
                z *= qq - m - e_function(v[j] - u[i], mm[j], l[i], s, b);
            }
        }
    }
    z
}

/// κ_λ(P) = ∏_{(i,j)∈λ} (b(i − λ'_j − 1) + b⁻¹(λ_i − j)) (2P + bi + b⁻¹j).
pub fn kappa(lam: &Partition, p: C64, b: C64) -> C64 {
    let conj = lam.conjugate();
    lam.cells()
        .map(|(i, j)| {
            let (fi, fj) = (i as f64, j as f64);
            (b * (fi - conj.part(j) as f64 - 1.0) + (lam.part(i) as f64 - fj) / b) * (2.0 * p + b * fi + fj / b)
        })
        .product()
}

/// Selberg average ⟨P_λ(t⁻¹) P_μ[t + β/γ − 1]⟩ in closed form, using
/// P_λ(t⁻¹) = (t₁⋯t_k)^{−N} P_{(N−λ_k,…,N−λ₁)}(t) and the AFLT evaluation.
pub fn selberg_average_inverse(k: usize, lam: &Partition, mu: &Partition, alpha: C64, beta: C64, gamma: C64) -> Result<C64, IdentityError> {
    if lam.len() > k {
        return Ok(C64::new(0.0, 0.0));
    }
    let n = lam.part(1);
    let hat = lam.complement(k, n).map_err(|e| IdentityError::Precondition(e.to_string()))?;
    let num = aflt_rhs(k, &hat, mu, mu.len(), alpha - n as f64, beta, gamma)?;
    Ok(num / selberg_rhs(k, alpha, beta, gamma)?)
}

/// Both sides of the bridge between Z_bifund and the Selberg average, with
/// P' = −P − α − kb.
///
/// The P'-slot of Z_bifund carries (μ, 0) and the P-slot carries (λ, 0);
/// with the slots the other way round the two sides already differ at
/// k = 1, λ = (1), μ = 0.
pub fn z_selb(lam: &Partition, mu: &Partition, k: usize, b: C64, p: C64, alpha: C64) -> Result<(C64, C64), IdentityError> {
    let pp = -p - alpha - b * k as f64;
    let e = Partition::empty();
    let lhs = zbifund(
        [pp, -pp],
        &Bipartition::new(mu.clone(), e.clone()),
        [p, -p],
        &Bipartition::new(lam.clone(), e),
        alpha,
        b,
    );
    let qq = b + 1.0 / b;
    let a_s = 1.0 - b * (qq + 2.0 * p);
    let b_s = 1.0 - 2.0 * b * alpha;
    let g = -b * b;
    let avg = selberg_average_inverse(k, lam, mu, a_s, b_s, g)?;
    Ok((lhs, kappa(lam, p, b) * kappa(mu, pp, b) * avg))
}
