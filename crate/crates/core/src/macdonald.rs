//! Macdonald polynomials over ℚ(q,t) and Jack polynomials over ℚ(γ).
//!
//! Both families are obtained by Gram–Schmidt in the monomial basis, ordered
//! by a linear extension of dominance (lexicographic, smallest first). The
//! orthogonalisation is carried out as an LDLᵀ factorisation of the Gram
//! matrix G = ⟨m_λ, m_μ⟩, so that P = L⁻¹ m and ⟨P_λ, P_λ⟩ = D_λ.
//!
//! Skew polynomials come from the coproduct Δp_k = p_k ⊗ 1 + 1 ⊗ p_k: the
//! second tensor factor is re-expanded in the P-basis and the coefficient of
//! P_μ is read off.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::One;

use crate::coeffs::{b_lambda, gamma_poch, hooks, poch, qt_poch};
use crate::field::{var, FieldElement, Rational, Var};
use crate::partitions::{partitions_of, Partition};
use crate::series::{sum_fe, Series};
use crate::symfunc::{Alphabet, Basis, PlethysmEvaluator, SymError, SymFunc};

/// Which orthogonal family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Macdonald P_λ(q,t) in the indeterminates `q`, `t`.
    Macdonald,
    /// Jack P_λ^{(1/γ)} in the indeterminate `gamma`.
    Jack,
}

impl Family {
    /// Weight w_k in ⟨p_λ, p_μ⟩ = δ z_λ ∏ w_{λ_i}.
    pub fn weight(&self, k: u32) -> FieldElement {
        match self {
            Family::Macdonald => {
                let (q, t) = (var("q"), var("t"));
                (FieldElement::one() - q.pow(k as i64)) / (FieldElement::one() - t.pow(k as i64))
            }
            Family::Jack => var("gamma").inv().unwrap(),
        }
    }

    pub fn scalar_product(&self, f: &SymFunc, g: &SymFunc) -> FieldElement {
        f.scalar_product(g, &|k| self.weight(k))
    }
}

struct DegreeData {
    parts: Vec<Partition>,
    index: HashMap<Partition, usize>,
    /// Row i: P_{parts[i]} in the m-basis (unit lower triangular).
    u: Vec<Vec<FieldElement>>,
    norms: Vec<FieldElement>,
    /// P_λ in the p-basis.
    in_p: Vec<SymFunc>,
    /// Row ρ: p_ρ = Σ_μ p_to_family[ρ][μ] P_μ.
    p_to_family: Vec<Vec<FieldElement>>,
}

fn degree_data(family: Family, n: u32) -> Arc<DegreeData> {
    type Cache = RwLock<HashMap<(Family, u32), Arc<DegreeData>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(d) = cache.read().unwrap().get(&(family, n)) {
        return d.clone();
    }
    let d = Arc::new(build_degree(family, n));
    cache.write().unwrap().entry((family, n)).or_insert(d).clone()
}

fn build_degree(family: Family, n: u32) -> DegreeData {
    let mut parts = partitions_of(n, n as usize);
    parts.reverse();
    let index: HashMap<Partition, usize> = parts.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let dim = parts.len();

    let m_in_p: Vec<SymFunc> = parts
        .iter()
        .map(|p| SymFunc::basis_element(Basis::M, p.clone()).to_basis(Basis::P))
        .collect();
    let mut gram = vec![vec![FieldElement::zero(); dim]; dim];
    for i in 0..dim {
        for j in 0..=i {
            let g = family.scalar_product(&m_in_p[i], &m_in_p[j]);
            gram[i][j] = g.clone();
            gram[j][i] = g;
        }
    }

    // LDLᵀ with unit lower-triangular L.
    let mut l = vec![vec![FieldElement::zero(); dim]; dim];
    let mut d = vec![FieldElement::zero(); dim];
    for i in 0..dim {
        l[i][i] = FieldElement::one();
        let mut terms = vec![gram[i][i].clone()];
        for k in 0..i {
            if !l[i][k].is_zero() {
                terms.push(-(&l[i][k] * &l[i][k] * &d[k]));
            }
        }
        d[i] = sum_fe(terms);
        let di_inv = d[i].inv().expect("degenerate Gram matrix");
        for j in i + 1..dim {
            let mut terms = vec![gram[j][i].clone()];
            for k in 0..i {
                if !l[j][k].is_zero() && !l[i][k].is_zero() {
                    terms.push(-(&l[j][k] * &l[i][k] * &d[k]));
                }
            }
            l[j][i] = sum_fe(terms) * &di_inv;
        }
    }

    // U = L⁻¹ by forward substitution.
    let mut u = vec![vec![FieldElement::zero(); dim]; dim];
    for i in 0..dim {
        u[i][i] = FieldElement::one();
        for j in (0..i).rev() {
            let mut terms = Vec::new();
            for k in j..i {
                if !l[i][k].is_zero() && !u[k][j].is_zero() {
                    terms.push(-(&l[i][k] * &u[k][j]));
                }
            }
            u[i][j] = sum_fe(terms);
        }
    }

    let in_p: Vec<SymFunc> = (0..dim)
        .map(|i| {
            let coeffs: BTreeMap<Partition, FieldElement> =
                (0..=i).filter(|&j| !u[i][j].is_zero()).map(|j| (parts[j].clone(), u[i][j].clone())).collect();
            SymFunc::from_coeffs(Basis::M, coeffs).to_basis(Basis::P)
        })
        .collect();

    // p_ρ = Σ_j (p in m)[ρ][j] m_j = Σ_j Σ_μ (p in m)[ρ][j] L[j][μ] P_μ
    let p_to_family: Vec<Vec<FieldElement>> = parts
        .iter()
        .map(|rho| {
            let pm = SymFunc::basis_element(Basis::P, rho.clone()).to_basis(Basis::M);
            (0..dim)
                .map(|mu| {
                    let terms: Vec<FieldElement> = pm
                        .coeffs()
                        .iter()
                        .filter(|(p, _)| !l[index[*p]][mu].is_zero())
                        .map(|(p, c)| c * &l[index[p]][mu])
                        .collect();
                    sum_fe(terms)
                })
                .collect()
        })
        .collect();

    DegreeData { parts, index, u, norms: d, in_p, p_to_family }
}

/// P_λ in the m-basis.
pub fn p_m(family: Family, lam: &Partition) -> SymFunc {
    let d = degree_data(family, lam.size());
    let i = d.index[lam];
    let coeffs = (0..=i).filter(|&j| !d.u[i][j].is_zero()).map(|j| (d.parts[j].clone(), d.u[i][j].clone())).collect();
    SymFunc::from_coeffs(Basis::M, coeffs)
}

/// P_λ in the p-basis.
pub fn p_p(family: Family, lam: &Partition) -> SymFunc {
    let d = degree_data(family, lam.size());
    d.in_p[d.index[lam]].clone()
}

/// ⟨P_λ, P_λ⟩.
pub fn norm(family: Family, lam: &Partition) -> FieldElement {
    let d = degree_data(family, lam.size());
    d.norms[d.index[lam]].clone()
}

/// b_λ with Q_λ = b_λ P_λ, i.e. 1/⟨P_λ, P_λ⟩.
pub fn b(family: Family, lam: &Partition) -> FieldElement {
    match family {
        Family::Macdonald => b_lambda(lam, &var("q"), &var("t")),
        Family::Jack => jack_b(lam),
    }
}

/// ∏_s (a(s) + γ(l(s)+1)) / (a(s) + 1 + γ l(s)).
pub fn jack_b(lam: &Partition) -> FieldElement {
    let g = var("gamma");
    lam.cells()
        .map(|(i, j)| {
            let (a, l, _, _) = lam.arm_leg(i, j);
            let a = FieldElement::from_int(a);
            let l = FieldElement::from_int(l);
            (&a + &g * (&l + FieldElement::one())) / (&a + FieldElement::one() + &g * &l)
        })
        .product()
}

pub fn macdonald_p(lam: &Partition) -> SymFunc {
    p_m(Family::Macdonald, lam)
}

pub fn macdonald_q(lam: &Partition) -> SymFunc {
    p_m(Family::Macdonald, lam).scale(&b(Family::Macdonald, lam))
}

pub fn jack_p(lam: &Partition) -> SymFunc {
    p_m(Family::Jack, lam)
}

/// Skew P_{λ/μ} in the p-basis (zero unless μ ⊆ λ).
pub fn skew_p(family: Family, lam: &Partition, mu: &Partition) -> SymFunc {
    if !lam.contains(mu) {
        return SymFunc::zero(Basis::P);
    }
    if mu.is_empty() {
        return p_p(family, lam);
    }
    let full = p_p(family, lam);
    let dmu = degree_data(family, mu.size());
    let mu_idx = dmu.index[mu];
    let target = mu.size();
    let mut acc: BTreeMap<Partition, Vec<FieldElement>> = BTreeMap::new();
    for (rho, c) in full.coeffs() {
        for (sigma, tau, mult) in splits(rho, target) {
            let a = &dmu.p_to_family[dmu.index[&tau]][mu_idx];
            if a.is_zero() {
                continue;
            }
            acc.entry(sigma).or_default().push((c * a).scale(&Rational::from_integer(mult)));
        }
    }
    SymFunc::from_coeffs(Basis::P, acc.into_iter().map(|(p, cs)| (p, sum_fe(cs))).collect())
}

/// Skew Q_{λ/μ} = (b_λ / b_μ) P_{λ/μ}.
pub fn skew_q(family: Family, lam: &Partition, mu: &Partition) -> SymFunc {
    skew_p(family, lam, mu).scale(&(b(family, lam) / b(family, mu)))
}

/// Ways to split the parts of ρ into (σ, τ) with |τ| = target, with the
/// multiplicity ∏ C(m_i, k_i).
fn splits(rho: &Partition, target: u32) -> Vec<(Partition, Partition, BigInt)> {
    let mults = rho.multiplicities();
    let mut out = Vec::new();
    fn rec(
        i: usize,
        mults: &[u32],
        left: i64,
        sigma: &mut Vec<u32>,
        tau: &mut Vec<u32>,
        mult: BigInt,
        out: &mut Vec<(Partition, Partition, BigInt)>,
    ) {
        if i == mults.len() {
            if left == 0 {
                out.push((Partition::from_unsorted(sigma.clone()), Partition::from_unsorted(tau.clone()), mult));
            }
            return;
        }
        let part = i as u32 + 1;
        let m = mults[i];
        for k in 0..=m {
            let take = k as i64 * part as i64;
            if take > left {
                break;
            }
            for _ in 0..k {
                tau.push(part);
            }
            for _ in k..m {
                sigma.push(part);
            }
            rec(i + 1, mults, left - take, sigma, tau, &mult * binom(m, k), out);
            for _ in 0..k {
                tau.pop();
            }
            for _ in k..m {
                sigma.pop();
            }
        }
    }
    rec(0, &mults, target as i64, &mut Vec::new(), &mut Vec::new(), BigInt::one(), &mut out);
    out
}

fn binom(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Plethystic value of P_{λ/μ}[A] for a letter-free alphabet.
pub fn skew_p_at(family: Family, lam: &Partition, mu: &Partition, a: &Alphabet) -> Result<FieldElement, SymError> {
    Ok(skew_p(family, lam, mu).plethysm(a, None)?.constant_term())
}

// ---------------------------------------------------------------------------
// Specialisations
// ---------------------------------------------------------------------------

/// t^{n(λ)} (a;q,t)_λ / c_λ(q,t), the value of P_λ[(1−a)/(1−t)].
pub fn principal_spec(lam: &Partition, a: &FieldElement) -> FieldElement {
    let (q, t) = (var("q"), var("t"));
    let (c, _, _) = hooks(lam, &q, &t);
    t.pow(lam.n_stat() as i64) * qt_poch(a, &q, &t, lam) / c
}

/// P^{(1/γ)}_λ[z] from the product formula with padding k ≥ l(λ).
pub fn jack_binomial_spec(lam: &Partition, z: &FieldElement, k: usize) -> FieldElement {
    let g = var("gamma");
    let l = lam.padded(k);
    let mut v = gamma_poch(&(z * &g), &g, lam) / gamma_poch(&(FieldElement::from_int(k as i64) * &g), &g, lam);
    for i in 0..k {
        for j in i + 1..k {
            let d = l[i] as i64 - l[j] as i64;
            let e = (j - i) as i64;
            v = v * poch(&(FieldElement::from_int(e + 1) * &g), d).unwrap()
                / poch(&(FieldElement::from_int(e) * &g), d).unwrap();
        }
    }
    v
}

/// P_{(r)}[x − y] as the terminating ₂φ₁ sum, a series in letters x and y.
pub fn single_row_xminusy(r: u32, x: Var, y: Var) -> Series {
    let (q, t) = (var("q"), var("t"));
    let one = FieldElement::one();
    let qpoch = |b: &FieldElement, n: u32| -> FieldElement {
        (0..n).map(|i| &one - b * q.pow(i as i64)).product()
    };
    let ti = t.inv().unwrap();
    let mut s = Series::zero(None);
    for k in 0..=r {
        let c = qpoch(&ti, k) * qpoch(&q.pow(-(r as i64)), k)
            / (qpoch(&(q.pow(1 - r as i64) * &ti), k) * qpoch(&q, k))
            * q.pow(k as i64);
        let mut e = vec![0u32; x.0.max(y.0) + 1];
        e[x.0] += r - k;
        e[y.0] += k;
        s = s.add(&Series::monomial(crate::field::Mono::from_exponents(&e), c, None));
    }
    s
}

/// Spectral vector ⟨λ⟩_n as a plethystic alphabet.
pub fn spectral_alphabet(lam: &Partition, n: usize) -> Alphabet {
    let v: FieldElement = lam.spectral(n).expect("partition longer than n").into_iter().sum();
    Alphabet::field(v)
}

/// Both sides of P_μ[⟨0⟩_n] P_λ[⟨μ⟩_n] = P_λ[⟨0⟩_n] P_μ[⟨λ⟩_n].
pub fn evaluation_symmetry(lam: &Partition, mu: &Partition, n: usize) -> (FieldElement, FieldElement) {
    let at = |f: &Partition, a: &Alphabet| skew_p_at(Family::Macdonald, f, &Partition::empty(), a).unwrap();
    let zero = spectral_alphabet(&Partition::empty(), n);
    let lhs = at(mu, &zero) * at(lam, &spectral_alphabet(mu, n));
    let rhs = at(lam, &zero) * at(mu, &spectral_alphabet(lam, n));
    (lhs, rhs)
}

/// Both sides of the evaluation symmetry with a free parameter a, for
/// λ with at most n parts and μ with at most m parts.
pub fn general_evaluation_symmetry(
    lam: &Partition,
    mu: &Partition,
    n: usize,
    m: usize,
    a: &FieldElement,
) -> (FieldElement, FieldElement) {
    let t = var("t");
    let one = FieldElement::one();
    let at = |f: &Partition, al: &Alphabet| skew_p_at(Family::Macdonald, f, &Partition::empty(), al).unwrap();
    let ratio = |b: &FieldElement| Alphabet::field((&one - b) / (&one - &t));
    let shifted = |nu: &Partition, k: usize| {
        let atk = a * t.pow(-(k as i64));
        let spec: FieldElement = nu.spectral(k).unwrap().into_iter().sum();
        Alphabet::field(&atk * spec + (&one - &atk) / (&one - &t))
    };
    let lhs = at(mu, &ratio(a)) * at(lam, &shifted(mu, m));
    let rhs = at(lam, &ratio(a)) * at(mu, &shifted(lam, n));
    (lhs, rhs)
}

/// Evaluates P_λ at numeric parameter values as a p-basis [`crate::symfunc::NumericSym`].
pub fn numeric_p(
    family: Family,
    lam: &Partition,
    params: &HashMap<Var, num_complex::Complex64>,
) -> Result<crate::symfunc::NumericSym, crate::field::FieldError> {
    p_p(family, lam).numeric(params)
}

/// P_λ evaluated in finitely many letters (an m-basis expansion).
pub fn p_in_letters(family: Family, lam: &Partition, letters: &[Var], cap: Option<u32>) -> Series {
    crate::symfunc::eval_in_letters(&p_m(family, lam), letters, cap)
}

/// Evaluates skew P_{λ/μ} in letters through the cached p-basis form.
pub fn skew_p_in(family: Family, lam: &Partition, mu: &Partition, ev: &mut PlethysmEvaluator) -> Result<Series, SymError> {
    ev.eval(&skew_p(family, lam, mu))
}

/// Coefficient ψ_{λ/μ} of the tableau formula for a horizontal strip λ/μ.
pub fn psi_strip(lam: &Partition, mu: &Partition) -> FieldElement {
    let (q, t) = (var("q"), var("t"));
    let bcell = |nu: &Partition, i: usize, j: usize| -> FieldElement {
        if j as u32 > nu.part(i) || i > nu.len() {
            return FieldElement::one();
        }
        let (a, l, _, _) = nu.arm_leg(i, j);
        (FieldElement::one() - q.pow(a) * t.pow(l + 1)) / (FieldElement::one() - q.pow(a + 1) * t.pow(l))
    };
    let strip_cols: Vec<usize> = lam.cells().filter(|&(i, j)| j as u32 > mu.part(i)).map(|(_, j)| j).collect();
    let strip_rows: Vec<usize> = lam.cells().filter(|&(i, j)| j as u32 > mu.part(i)).map(|(i, _)| i).collect();
    let mut v = FieldElement::one();
    for (i, j) in mu.cells() {
        if strip_rows.contains(&i) && !strip_cols.contains(&j) {
            v = v * bcell(mu, i, j) / bcell(lam, i, j);
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::bind;
    use crate::partitions::enumerate;
    use crate::symfunc::horizontal_strips;
    use num_complex::Complex64 as C64;

    fn one() -> FieldElement {
        FieldElement::one()
    }

    #[test]
    fn small_examples() {
        let (q, t) = (var("q"), var("t"));
        assert_eq!(macdonald_p(&Partition::of(&[1])), SymFunc::m(&[1]));
        assert_eq!(macdonald_p(&Partition::of(&[1, 1])), SymFunc::m(&[1, 1]));
        let c = (one() - &t) * (one() + &q) / (one() - &q * &t);
        assert_eq!(macdonald_p(&Partition::of(&[2])), SymFunc::m(&[2]).add(&SymFunc::m(&[1, 1]).scale(&c)));
        let g = var("gamma");
        assert_eq!(jack_p(&Partition::of(&[1])), SymFunc::m(&[1]));
        let cj = FieldElement::from_int(2) * &g / (&g + one());
        assert_eq!(jack_p(&Partition::of(&[2])), SymFunc::m(&[2]).add(&SymFunc::m(&[1, 1]).scale(&cj)));
    }

    fn tableau_p(lam: &Partition, mu: &Partition) -> FieldElement {
        // Σ over SSYT of shape λ and content μ of ∏ ψ of the strips.
        fn rec(cur: Partition, lam: &Partition, mu: &[u32], acc: FieldElement, out: &mut Vec<FieldElement>) {
            match mu.split_first() {
                None => {
                    if cur == *lam {
                        out.push(acc);
                    }
                }
                Some((&m, rest)) => {
                    for next in horizontal_strips(&cur, m, lam) {
                        let w = psi_strip(&next, &cur);
                        rec(next, lam, rest, &acc * &w, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        rec(Partition::empty(), lam, mu.parts(), one(), &mut out);
        sum_fe(out)
    }

    #[test]
    fn matches_tableau_formula() {
        for n in 1..=5 {
            for lam in partitions_of(n, n as usize) {
                let p = macdonald_p(&lam);
                for mu in partitions_of(n, n as usize) {
                    assert_eq!(p.coeff(&mu), tableau_p(&lam, &mu), "P_{lam} at m_{mu}");
                }
            }
        }
    }

    #[test]
    fn orthogonality_and_triangularity() {
        for n in 1..=5 {
            let ps = partitions_of(n, n as usize);
            for lam in &ps {
                let p = macdonald_p(lam);
                assert!(p.coeff(lam).is_one());
                for mu in &ps {
                    if !lam.dominates(mu) {
                        assert!(p.coeff(mu).is_zero());
                    }
                    if lam != mu {
                        let ip = Family::Macdonald.scalar_product(&p_p(Family::Macdonald, lam), &p_p(Family::Macdonald, mu));
                        assert!(ip.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn norms_match_hook_ratio() {
        for lam in enumerate(5, 5).into_iter().skip(1) {
            assert_eq!(norm(Family::Macdonald, &lam) * b(Family::Macdonald, &lam), one());
            assert_eq!(norm(Family::Jack, &lam) * b(Family::Jack, &lam), one());
        }
    }

    #[test]
    fn q_equals_t_gives_schur() {
        let mut sub = HashMap::new();
        sub.insert(Var::new("t"), var("q"));
        for lam in enumerate(5, 5) {
            let p = macdonald_p(&lam);
            let s = SymFunc::basis_element(Basis::S, lam.clone()).to_basis(Basis::M);
            let coeffs = p.coeffs().iter().map(|(k, c)| (k.clone(), c.substitute(&sub).unwrap())).collect();
            assert_eq!(SymFunc::from_coeffs(Basis::M, coeffs), s);
        }
    }

    #[test]
    fn jack_at_one_is_schur() {
        let mut sub = HashMap::new();
        sub.insert(Var::new("gamma"), one());
        for lam in enumerate(5, 5) {
            let p = jack_p(&lam);
            let s = SymFunc::basis_element(Basis::S, lam.clone()).to_basis(Basis::M);
            let coeffs = p.coeffs().iter().map(|(k, c)| (k.clone(), c.substitute(&sub).unwrap())).collect();
            assert_eq!(SymFunc::from_coeffs(Basis::M, coeffs), s);
        }
    }

    #[test]
    fn jack_is_numeric_limit_of_macdonald() {
        let gamma = 0.7;
        let lam = Partition::of(&[2, 1]);
        let jack = jack_p(&lam);
        let mac = macdonald_p(&lam);
        let gpt = bind(&[("gamma", C64::new(gamma, 0.0))]);
        for mu in partitions_of(3, 3) {
            let want = jack.coeff(&mu).eval_complex(&gpt).unwrap();
            let mut errs = Vec::new();
            for k in [3, 4, 5] {
                let qv: f64 = 1.0 - 10f64.powi(-k);
                let pt = bind(&[("q", C64::new(qv, 0.0)), ("t", C64::new(qv.powf(gamma), 0.0))]);
                errs.push((mac.coeff(&mu).eval_complex(&pt).unwrap() - want).norm());
            }
            assert!(errs[2] < 1e-4, "{mu}: {errs:?}");
            assert!(errs[2] <= errs[0] + 1e-12);
        }
    }

    #[test]
    fn skew_examples() {
        let lam = Partition::of(&[2, 1]);
        assert_eq!(skew_p(Family::Macdonald, &lam, &Partition::empty()), p_p(Family::Macdonald, &lam));
        let s = skew_p(Family::Macdonald, &Partition::of(&[1]), &Partition::of(&[1]));
        assert_eq!(s, SymFunc::one());
        assert!(skew_p(Family::Macdonald, &Partition::of(&[2]), &Partition::of(&[1, 1])).is_zero());
    }

    #[test]
    fn skew_matches_two_alphabet_expansion() {
        // P_λ[x + y1 + y2] = Σ_μ P_{λ/μ}[x] P_μ[y1 + y2]
        let x = Var::new("x1");
        let ys = [Var::new("y1"), Var::new("y2")];
        for lam in enumerate(4, 3).into_iter().skip(1) {
            let mut all = vec![x];
            all.extend_from_slice(&ys);
            let whole = p_in_letters(Family::Macdonald, &lam, &all, None);
            let mut rhs = Series::zero(None);
            let mut ev = PlethysmEvaluator::new(Alphabet::letters(&[x]), None);
            for mu in crate::partitions::subpartitions(&lam) {
                let a = skew_p_in(Family::Macdonald, &lam, &mu, &mut ev).unwrap();
                let b = p_in_letters(Family::Macdonald, &mu, &ys, None);
                rhs = rhs.add(&a.mul(&b));
            }
            assert_eq!(whole, rhs, "{lam}");
        }
    }

    #[test]
    fn principal_specialisation() {
        let (t, a) = (var("t"), var("a"));
        for lam in enumerate(4, 4) {
            for n in [1i64, 2, 3] {
                let alph = Alphabet::field((one() - t.pow(n)) / (one() - &t));
                let via = skew_p_at(Family::Macdonald, &lam, &Partition::empty(), &alph).unwrap();
                assert_eq!(via, principal_spec(&lam, &t.pow(n)), "{lam} n={n}");
            }
            let alph = Alphabet::field((one() - &a) / (one() - &t));
            let via = skew_p_at(Family::Macdonald, &lam, &Partition::empty(), &alph).unwrap();
            assert_eq!(via, principal_spec(&lam, &a));
        }
        assert_eq!(principal_spec(&Partition::of(&[1]), &a), (one() - &a) / (one() - &t));
    }

    #[test]
    fn jack_binomial_specialisation() {
        let z = var("z");
        assert_eq!(jack_binomial_spec(&Partition::of(&[1]), &z, 1), z);
        for lam in enumerate(4, 4) {
            let base = jack_binomial_spec(&lam, &z, lam.len().max(1));
            assert_eq!(jack_binomial_spec(&lam, &z, lam.len() + 2), base, "{lam}");
            let via = skew_p_at(Family::Jack, &lam, &Partition::empty(), &Alphabet::Binomial(z.clone())).unwrap();
            assert_eq!(via, base, "{lam}");
        }
    }

    #[test]
    fn single_row_difference() {
        let (x, y) = (Var::new("x"), Var::new("y"));
        let alph = Alphabet::letters(&[x]).minus(Alphabet::letters(&[y]));
        for r in 0..=4u32 {
            let lhs = single_row_xminusy(r, x, y);
            let rhs = p_p(Family::Macdonald, &Partition::of(&[r])).plethysm(&alph, None).unwrap();
            assert_eq!(lhs, rhs, "r={r}");
        }
        let at0: HashMap<Var, FieldElement> = [(y, FieldElement::zero())].into_iter().collect();
        let v = single_row_xminusy(3, x, y).eval_letters(&at0);
        assert_eq!(v, Series::monomial(crate::field::Mono::var(x, 3), one(), None));
    }

    #[test]
    fn evaluation_symmetry_examples() {
        let l = Partition::of(&[1]);
        let (a, b) = evaluation_symmetry(&l, &l, 2);
        assert_eq!(a, b);
        let (a, b) = evaluation_symmetry(&Partition::of(&[1]), &Partition::of(&[2]), 2);
        assert_eq!(a, b);
        let (a, b) = general_evaluation_symmetry(&Partition::of(&[2, 1]), &Partition::of(&[1]), 2, 2, &var("a"));
        assert_eq!(a, b);
    }
}
