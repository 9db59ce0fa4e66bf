//! One-variable elliptic interpolation functions.
//!
//! At a single variable the BC₁ interpolation function is fixed by its
//! principal specialisation, which is a ratio of four elliptic shifted
//! factorials valid at every argument. Binomial coefficients, skew
//! interpolation functions and the integrands of the elliptic Selberg and
//! AFLT integrals are built from it. Only partitions with at most one part
//! are supported; longer ones are rejected with [`EllipticError::Scope`].
//!
//! A bipartition (λ⁽¹⁾, λ⁽²⁾) stands for the product of the λ⁽¹⁾ function
//! with nomes (q,t;p) and the λ⁽²⁾ function with (p,t;q).

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::closedform::{bi_delta0, eaflt_rhs, elliptic_selberg_rhs};
use crate::coeffs::{c_minus, c_plus, delta0, ell_gamma, ell_poch, ell_qt_poch, qpoch_inf, theta, CoeffError};
use crate::partitions::{Bipartition, Partition};
use crate::quadrature::{torus_integral, QuadError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EllipticError {
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("partition {0} has more than one part; only single rows are supported")]
    Scope(String),
    #[error("skew interpolation needs a nonempty even number of arguments (got {0})")]
    Arguments(usize),
    #[error("balancing condition violated (relative defect {0:e})")]
    Balancing(f64),
    #[error("integrand pole at distance {0:e} from the unit circle")]
    Contour(f64),
}

pub type EResult = Result<C64, EllipticError>;

/// Nomes (q, t; p) of a single-slot elliptic function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Nomes {
    pub q: C64,
    pub t: C64,
    pub p: C64,
}

impl Nomes {
    pub fn new(q: C64, t: C64, p: C64) -> Nomes {
        Nomes { q, t, p }
    }

    /// The nomes of the second slot of a bipartition: p and q exchanged.
    pub fn swapped(&self) -> Nomes {
        Nomes { q: self.p, t: self.t, p: self.q }
    }

    fn pq(&self) -> C64 {
        self.p * self.q
    }
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn row(m: u32) -> Partition {
    if m == 0 {
        Partition::empty()
    } else {
        Partition::of(&[m])
    }
}

/// The single part of λ (0 for the empty partition).
pub fn single_row(lam: &Partition) -> Result<u32, EllipticError> {
    if lam.len() > 1 {
        return Err(EllipticError::Scope(lam.to_string()));
    }
    Ok(lam.part(1))
}

fn checked_div(num: C64, den: C64) -> EResult {
    if den.norm() < 1e-300 {
        return Err(CoeffError::Pole.into());
    }
    Ok(num / den)
}

// ---------------------------------------------------------------------------
// Interpolation functions and binomial coefficients
// ---------------------------------------------------------------------------

/// R*_m(z;a,b;q,p) = (az, a/z;q,p)_m / (pq/(bz), pqz/b;q,p)_m.
pub fn bc1_interp(m: u32, z: C64, a: C64, b: C64, nm: &Nomes) -> EResult {
    let (q, p, pq) = (nm.q, nm.p, nm.pq());
    let m = m as i64;
    let num = ell_poch(a * z, q, p, m)? * ell_poch(a / z, q, p, m)?;
    let den = ell_poch(pq / (b * z), q, p, m)? * ell_poch(pq * z / b, q, p, m)?;
    checked_div(num, den)
}

/// Δ⁰_m(a/b | az, a/z), the factorised form of a Cauchy-type function.
pub fn bc1_interp_cauchy(m: u32, z: C64, a: C64, b: C64, nm: &Nomes) -> EResult {
    Ok(delta0(a / b, &[a * z, a / z], nm.q, nm.t, nm.p, &row(m))?)
}

/// (pqa;q,t;p)_{2μ²} / (C⁻_μ(pq) C⁻_μ(t) C⁺_μ(a) C⁺_μ(pqa/t)) for μ = (m).
fn binomial_prefactor(m: u32, a: C64, nm: &Nomes) -> EResult {
    let (q, t, p, pq) = (nm.q, nm.t, nm.p, nm.pq());
    let mu = row(m);
    let doubled = if m == 0 { Partition::empty() } else { Partition::of(&[2 * m, 2 * m]) };
    let num = ell_qt_poch(pq * a, q, t, p, &doubled)?;
    let den = c_minus(pq, q, t, p, &mu)? * c_minus(t, q, t, p, &mu)? * c_plus(a, q, t, p, &mu)? * c_plus(pq * a / t, q, t, p, &mu)?;
    checked_div(num, den)
}

/// Elliptic binomial coefficient for λ = (l), μ = (m), with an explicit
/// choice `sqrt_a` of a^{1/2}.
pub fn elliptic_binomial_branch(l: u32, m: u32, a: C64, b: C64, sqrt_a: C64, nm: &Nomes) -> EResult {
    if m > l {
        return Ok(C64::new(0.0, 0.0));
    }
    let pre = binomial_prefactor(m, a / b, nm)?;
    let d = delta0(a / b, &[nm.t, one() / b], nm.q, nm.t, nm.p, &row(m))?;
    let r = bc1_interp(m, sqrt_a * nm.q.powi(l as i32), sqrt_a, b / sqrt_a, nm)?;
    Ok(pre * d * r)
}

/// Elliptic binomial coefficient (λ over μ)_{[a,b]} for single rows.
pub fn elliptic_binomial(lam: &Partition, mu: &Partition, a: C64, b: C64, nm: &Nomes) -> EResult {
    let (l, m) = (single_row(lam)?, single_row(mu)?);
    elliptic_binomial_branch(l, m, a, b, a.sqrt(), nm)
}

/// Normalised binomial ⟨λ/μ⟩_{[a,b](v_1..v_k)}.
pub fn normalised_binomial(l: u32, m: u32, a: C64, b: C64, vs: &[C64], nm: &Nomes) -> EResult {
    let top: Vec<C64> = std::iter::once(b).chain(vs.iter().copied()).collect();
    let bottom: Vec<C64> = std::iter::once(one() / b).chain(vs.iter().copied()).collect();
    let num = delta0(a, &top, nm.q, nm.t, nm.p, &row(l))?;
    let den = delta0(a / b, &bottom, nm.q, nm.t, nm.p, &row(m))?;
    Ok(checked_div(num, den)? * elliptic_binomial_branch(l, m, a, b, a.sqrt(), nm)?)
}

/// Both sides of the Jackson summation
/// Σ_μ Δ⁰_μ(a/b|d,e) ⟨λ/μ⟩_{[a,b]} ⟨μ/ν⟩_{[a/b,c/b]} = ⟨λ/ν⟩_{[a,c](bd,be)},
/// with e fixed by bcde = apq.
pub fn jackson_sides(l: u32, nu: u32, a: C64, b: C64, c: C64, d: C64, nm: &Nomes) -> Result<(C64, C64), EllipticError> {
    let e = a * nm.pq() / (b * c * d);
    let mut lhs = C64::new(0.0, 0.0);
    for m in nu..=l {
        lhs += delta0(a / b, &[d, e], nm.q, nm.t, nm.p, &row(m))?
            * normalised_binomial(l, m, a, b, &[], nm)?
            * normalised_binomial(m, nu, a / b, c / b, &[], nm)?;
    }
    let rhs = normalised_binomial(l, nu, a, c, &[b * d, b * e], nm)?;
    Ok((lhs, rhs))
}

/// Both sides of the evaluation symmetry at one variable, with a′ = v√b/a.
pub fn evaluation_symmetry_sides(l: u32, m: u32, v: C64, a: C64, b: C64, nm: &Nomes) -> Result<(C64, C64), EllipticError> {
    let ap = v * b.sqrt() / a;
    let q = nm.q;
    let lhs = checked_div(
        bc1_interp(m, v * q.powi(l as i32) / a, a, b / a, nm)?,
        bc1_interp(m, v / a, a, b / a, nm)?,
    )?;
    let rhs = checked_div(
        bc1_interp(l, v * q.powi(m as i32) / ap, ap, b / ap, nm)?,
        bc1_interp(l, v / ap, ap, b / ap, nm)?,
    )?;
    Ok((lhs, rhs))
}

/// Both sides of the connection-coefficient expansion
/// R*_l(x;a,b) = Σ_m ⟨l/m⟩_{[a/b,a/a′](aa′)} R*_m(x;a′,b).
pub fn connection_sides(l: u32, x: C64, a: C64, a2: C64, b: C64, nm: &Nomes) -> Result<(C64, C64), EllipticError> {
    let lhs = bc1_interp(l, x, a, b, nm)?;
    let mut rhs = C64::new(0.0, 0.0);
    for m in 0..=l {
        rhs += normalised_binomial(l, m, a / b, a / a2, &[a * a2], nm)? * bc1_interp(m, x, a2, b, nm)?;
    }
    Ok((lhs, rhs))
}

// ---------------------------------------------------------------------------
// Skew interpolation functions
// ---------------------------------------------------------------------------

/// R*_{λ/ν}([v_1..v_{2k}];a,b) for single rows λ = (l), ν = (nu), from the
/// defining sum over ν ⊆ μ ⊆ λ.
pub fn skew_interp(l: u32, nu: u32, vs: &[C64], a: C64, b: C64, nm: &Nomes) -> EResult {
    if vs.is_empty() || vs.len() % 2 == 1 {
        return Err(EllipticError::Arguments(vs.len()));
    }
    if nu > l {
        return Ok(C64::new(0.0, 0.0));
    }
    let pq = nm.pq();
    let vprod: C64 = vs.iter().product();
    let args: Vec<C64> = vs.iter().map(|&v| pq / (b * v)).collect();
    let mut s = C64::new(0.0, 0.0);
    for m in nu..=l {
        s += delta0(pq / (b * b), &args, nm.q, nm.t, nm.p, &row(m))?
            * normalised_binomial(l, m, a / b, a * b / pq, &[], nm)?
            * normalised_binomial(m, nu, pq / (b * b), pq * vprod / (a * b), &[], nm)?;
    }
    Ok(s)
}

/// Two-argument skew function as the single normalised binomial
/// ⟨λ/ν⟩_{[a/b, v₁v₂](a/v₁, a/v₂)}.
pub fn skew_interp_pair(l: u32, nu: u32, v1: C64, v2: C64, a: C64, b: C64, nm: &Nomes) -> EResult {
    if nu > l {
        return Ok(C64::new(0.0, 0.0));
    }
    normalised_binomial(l, nu, a / b, v1 * v2, &[a / v1, a / v2], nm)
}

/// The skew function of the concatenated arguments [vs, ws] through the
/// branching rule Σ_μ R*_{λ/μ}([vs];a,b) R*_{μ/ν}([ws];a/V,b), V = ∏vs.
pub fn skew_interp_branched(l: u32, nu: u32, vs: &[C64], ws: &[C64], a: C64, b: C64, nm: &Nomes) -> EResult {
    let vprod: C64 = vs.iter().product();
    let mut s = C64::new(0.0, 0.0);
    for m in nu..=l {
        s += skew_interp(l, m, vs, a, b, nm)? * skew_interp(m, nu, ws, a / vprod, b, nm)?;
    }
    Ok(s)
}

/// Both sides of the skew-to-ordinary reduction
/// R*_{λ/0}([t^{1/2}x^±]; t^{1/2}a, t^{1/2}b) = Δ⁰_λ(a/b|t) R*_λ(x;a,b).
pub fn interpolation_skew_sides(l: u32, x: C64, a: C64, b: C64, nm: &Nomes) -> Result<(C64, C64), EllipticError> {
    let st = nm.t.sqrt();
    let lhs = skew_interp(l, 0, &[st * x, st / x], st * a, st * b, nm)?;
    let rhs = delta0(a / b, &[nm.t], nm.q, nm.t, nm.p, &row(l))? * bc1_interp(l, x, a, b, nm)?;
    Ok((lhs, rhs))
}

/// The p → 0 degeneration of R*_{(l)/0}: returns the scaled skew function
/// p^{α l} R*_{(l)/0}([t^{1/2}(p^{−α}x)^±, p^{−α}t^{−1/2}c, p^{α}t^{1/2}/d]; a, p^β b)
/// at real 0 < p < 1.
#[allow(clippy::too_many_arguments)]
pub fn skew_limit_scaled(l: u32, x: C64, c: C64, d: C64, a: C64, b: C64, q: C64, t: C64, p: f64, alpha: f64, beta: f64) -> EResult {
    let nm = Nomes::new(q, t, C64::new(p, 0.0));
    let st = t.sqrt();
    let s = p.powf(alpha);
    let vs = [st * x / s, st * s / x, c / (s * st), s * st / d];
    Ok(skew_interp(l, 0, &vs, a, b * p.powf(beta), &nm)? * s.powi(l as i32))
}

/// The p → 0 limit value (−a t^{−1/2})^l q^{n(λ′)} c_λ(q,t) P_λ[x + (d−c)/(1−t)]
/// for λ = (l), with P_λ from the Macdonald module.
pub fn skew_limit_value(l: u32, x: C64, c: C64, d: C64, a: C64, q: C64, t: C64) -> EResult {
    let lam = row(l);
    let params = crate::field::bind(&[("q", q), ("t", t)]);
    let pl = crate::macdonald::numeric_p(crate::macdonald::Family::Macdonald, &lam, &params)
        .map_err(|_| CoeffError::Pole)?;
    let pk: Vec<C64> = (0..=l as i32)
        .map(|k| x.powi(k) + (d.powi(k) - c.powi(k)) / (1.0 - t.powi(k)))
        .collect();
    let hook = crate::closedform::mac_hooks(&lam, q, t).0;
    Ok((-a / t.sqrt()).powi(l as i32) * q.powi(lam.n_stat_conjugate() as i32) * hook * pl.eval_power_sums(&pk))
}

// ---------------------------------------------------------------------------
// Bipartition versions
// ---------------------------------------------------------------------------

/// R*_𝛌(z;a,b;t;p,q) = R*_{λ⁽¹⁾}(z;a,b;q,t;p) R*_{λ⁽²⁾}(z;a,b;p,t;q).
pub fn bi_interp(lam: &Bipartition, z: C64, a: C64, b: C64, nm: &Nomes) -> EResult {
    let (l1, l2) = (single_row(&lam.first)?, single_row(&lam.second)?);
    Ok(bc1_interp(l1, z, a, b, nm)? * bc1_interp(l2, z, a, b, &nm.swapped())?)
}

/// Skew function of a bipartition, slot by slot.
pub fn bi_skew_interp(lam: &Bipartition, nu: &Bipartition, vs: &[C64], a: C64, b: C64, nm: &Nomes) -> EResult {
    let (l1, l2) = (single_row(&lam.first)?, single_row(&lam.second)?);
    let (n1, n2) = (single_row(&nu.first)?, single_row(&nu.second)?);
    Ok(skew_interp(l1, n1, vs, a, b, nm)? * skew_interp(l2, n2, vs, a, b, &nm.swapped())?)
}

// ---------------------------------------------------------------------------
// Elliptic integrals at one variable
// ---------------------------------------------------------------------------

/// Parameters (t, t₁..t₆; p, q) of the elliptic Selberg-type integrals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipticParams {
    pub t: C64,
    pub ts: [C64; 6],
    pub p: C64,
    pub q: C64,
}

impl EllipticParams {
    pub fn nomes(&self) -> Nomes {
        Nomes::new(self.q, self.t, self.p)
    }

    /// Relative defect of t^{2n−2} t₁⋯t₆ = pq.
    pub fn balancing_defect(&self, n: usize) -> f64 {
        let lhs = self.t.powi(2 * n as i32 - 2) * self.ts.iter().product::<C64>();
        let pq = self.p * self.q;
        (lhs - pq).norm() / pq.norm()
    }

    pub fn check_balancing(&self, n: usize) -> Result<(), EllipticError> {
        let d = self.balancing_defect(n);
        if d > 1e-12 {
            return Err(EllipticError::Balancing(d));
        }
        Ok(())
    }

    /// Random balanced parameters at n = 1: |t_r| ∈ [0.3, 0.5], |q| ∈ [0.2, 0.3],
    /// p = t₁⋯t₆/q, t with |t| ∈ [0.2, 0.5].
    pub fn sample<R: Rng>(rng: &mut R) -> EllipticParams {
        let mut polar = |lo: f64, hi: f64| C64::from_polar(rng.gen_range(lo..hi), rng.gen_range(-PI..PI));
        let ts = [polar(0.3, 0.5), polar(0.3, 0.5), polar(0.3, 0.5), polar(0.3, 0.5), polar(0.3, 0.5), polar(0.3, 0.5)];
        let q = polar(0.2, 0.3);
        let t = polar(0.2, 0.5);
        let p = ts.iter().product::<C64>() / q;
        EllipticParams { t, ts, p, q }
    }

    /// The same parameters with the last one replaced so that n = 1 balancing holds.
    pub fn rebalanced(mut self) -> EllipticParams {
        let rest: C64 = self.ts[..5].iter().product();
        self.ts[5] = self.p * self.q / rest;
        self
    }
}

/// Largest defect of θ(pz;p) = −z^{−1}θ(z;p) and Γ(z)Γ(pq/z) = 1 at the
/// given points.
pub fn guard_defect(zs: &[C64], p: C64, q: C64) -> Result<f64, EllipticError> {
    let mut worst: f64 = 0.0;
    for &z in zs {
        let th = theta(z, p)?;
        let d1 = (theta(p * z, p)? + th / z).norm() / th.norm().max(1e-300);
        let d2 = (ell_gamma(z, p, q)? * ell_gamma(p * q / z, p, q)? - 1.0).norm();
        worst = worst.max(d1).max(d2);
    }
    Ok(worst)
}

/// ∏_r Γ(t_r z^±) / Γ(z^{±2}), using 1/(Γ(x)Γ(1/x)) = θ(x;p)θ(1/x;q).
pub fn selberg_weight(z: C64, ep: &EllipticParams) -> EResult {
    let (p, q) = (ep.p, ep.q);
    let mut v = theta(z * z, p)? * theta(one() / (z * z), q)?;
    for &tr in &ep.ts {
        v *= ell_gamma(tr * z, p, q)? * ell_gamma(tr / z, p, q)?;
    }
    Ok(v)
}

/// Elliptic AFLT integrand at n = 1 (without κ₁): the two skew interpolation
/// functions times the Selberg weight.
pub fn eaflt_integrand(z: C64, lam: &Bipartition, mu: &Bipartition, ep: &EllipticParams) -> EResult {
    let nm = ep.nomes();
    let st = ep.t.sqrt();
    let [t1, t2, t3, t4, t5, t6] = ep.ts;
    let zero = Bipartition::default();
    let rl = bi_skew_interp(lam, &zero, &[st * z, st / z], st * t1, st * t2, &nm)?;
    let rm = bi_skew_interp(mu, &zero, &[st * z, st / z, t4 / st, t5 / st], t3 * t4 * t5 / st, st * t6, &nm)?;
    Ok(rl * rm * selberg_weight(z, ep)?)
}

/// Integrand R*_𝛌(z;t₁,t₂) R*_𝛍(z;t₃,t₆) × weight of the generalised
/// elliptic Selberg integral at n = 1.
pub fn kadell_integrand(z: C64, lam: &Bipartition, mu: &Bipartition, ep: &EllipticParams) -> EResult {
    let nm = ep.nomes();
    let [t1, t2, t3, _, _, t6] = ep.ts;
    Ok(bi_interp(lam, z, t1, t2, &nm)? * bi_interp(mu, z, t3, t6, &nm)? * selberg_weight(z, ep)?)
}

/// Closed form of the generalised elliptic Selberg integral at n = 1.
pub fn kadell_rhs(lam: &Bipartition, mu: &Bipartition, ep: &EllipticParams) -> EResult {
    let nm = ep.nomes();
    let (t, p, q) = (ep.t, ep.p, ep.q);
    let [t1, t2, t3, t4, t5, t6] = ep.ts;
    let zeta = (t1 * t2).sqrt();
    let zeta2 = (t3 * t6).sqrt();
    let spec = q.powi(single_row(&lam.first)? as i32) * p.powi(single_row(&lam.second)? as i32);
    Ok(elliptic_selberg_rhs(1, t, &ep.ts, p, q)?
        * bi_delta0(t1 / t2, &[t1 * t4, t1 * t5], t, p, q, lam)?
        * bi_delta0(t3 / t6, &[t3 * t4, t3 * t5], t, p, q, mu)?
        * bi_interp(lam, t3 / zeta2, t1 * zeta2, t2 * zeta2, &nm)?
        * bi_interp(mu, t1 * spec / zeta, t3 * zeta, t6 * zeta, &nm)?)
}

/// κ₁ times 2πi: (p;p)_∞(q;q)_∞Γ(t)/2, to be multiplied by the circle mean.
fn kappa1_mean(ep: &EllipticParams) -> EResult {
    Ok(qpoch_inf(ep.p, ep.p)? * qpoch_inf(ep.q, ep.q)? * ell_gamma(ep.t, ep.p, ep.q)? / 2.0)
}

/// Poles of an n = 1 integrand that accumulate at zero: those of Γ(t_r/z)
/// and those of the interpolation functions in the t₂ (𝛌) and t₆ (𝛍) slots
/// not cancelled by zeros of Γ(t₂/z), Γ(t₆/z). Poles closer to zero than
/// `floor` are omitted.
pub fn inner_poles(lam: &Bipartition, mu: &Bipartition, ep: &EllipticParams, floor: f64) -> Result<Vec<C64>, EllipticError> {
    let (p, q) = (ep.p, ep.q);
    let mut out = Vec::new();
    for &tr in &ep.ts {
        let mut pi = tr;
        while pi.norm() > floor {
            let mut w = pi;
            while w.norm() > floor {
                out.push(w);
                w *= q;
            }
            pi *= p;
        }
    }
    let slots = [
        (ep.ts[1], single_row(&lam.first)?, single_row(&lam.second)?),
        (ep.ts[5], single_row(&mu.first)?, single_row(&mu.second)?),
    ];
    for (base, m1, m2) in slots {
        for (m, x, y) in [(m1, p, q), (m2, q, p)] {
            // z = base·x^{k−1}·y^{−1−i}, k ≥ 1, 0 ≤ i < m.
            for i in 0..m as i32 {
                let mut w = base * y.powi(-1 - i);
                while w.norm() > floor {
                    out.push(w);
                    w *= x;
                }
            }
        }
        // Both slots have a pole at base·p^{−1−a}q^{−1−b}; one simple zero of
        // Γ(base/z) leaves a simple pole.
        for a in 0..m2 as i32 {
            for b in 0..m1 as i32 {
                out.push(base * p.powi(-1 - a) * q.powi(-1 - b));
            }
        }
    }
    Ok(out)
}

/// Circle mean of f on |z| = 1 corrected to the contour that separates the
/// inner poles from their reciprocals: for each inner pole w outside the
/// circle, adds 2 Res_{z=w} f(z)/z (the reflected pole 1/w contributes the
/// same amount by z ↦ 1/z symmetry).
pub fn separated_contour_mean(
    f: &(dyn Fn(C64) -> EResult + Sync),
    inner: &[C64],
    margin: f64,
    points: usize,
) -> EResult {
    let mut nearest = f64::INFINITY;
    for &w in inner {
        let d = (w.norm().ln()).abs();
        nearest = nearest.min(d);
    }
    if nearest < (1.0 + margin).ln() {
        return Err(EllipticError::Contour(nearest.exp() - 1.0));
    }
    let err = std::sync::Mutex::new(None);
    let g = |z: &[C64]| -> C64 {
        match f(z[0]) {
            Ok(v) => v,
            Err(e) => {
                *err.lock().unwrap() = Some(e);
                C64::new(0.0, 0.0)
            }
        }
    };
    let mut total = torus_integral(1, 1.0, points, &g)?;
    let all: Vec<C64> = inner.iter().flat_map(|&w| [w, one() / w]).collect();
    for &w in inner.iter().filter(|w| w.norm() > 1.0) {
        let gap = all
            .iter()
            .filter(|&&u| (u - w).norm() > 1e-12 * w.norm())
            .map(|&u| (u - w).norm())
            .fold(w.norm(), f64::min);
        let r = 0.3 * gap;
        let h = |z: &[C64]| -> C64 {
            let x = w + (z[0] * r);
            g(&[x]) * (x - w) / x
        };
        total += 2.0 * torus_integral(1, 1.0, 64, &h)?;
    }
    if let Some(e) = err.into_inner().unwrap() {
        return Err(e);
    }
    Ok(total)
}

/// Trapezoid node count for a pole-free annulus of log-width `gap` around the
/// circle, targeting 1e−15.
fn node_count(gap: f64, points: usize) -> usize {
    let need = (15.0 * std::f64::consts::LN_10 / gap).ceil() as usize;
    need.clamp(points, 8192)
}

fn pole_gap(inner: &[C64]) -> f64 {
    inner.iter().map(|w| w.norm().ln().abs()).fold(f64::INFINITY, f64::min)
}

/// Contour-validity margin: a pole within this relative distance of the
/// circle aborts the evaluation.
pub const CONTOUR_MARGIN: f64 = 0.05;

/// κ₁ ∮ over the separating contour of an n = 1 integrand with the pole
/// structure of (𝛌, 𝛍).
pub fn elliptic_integral_n1(
    f: &(dyn Fn(C64) -> EResult + Sync),
    lam: &Bipartition,
    mu: &Bipartition,
    ep: &EllipticParams,
    points: usize,
) -> EResult {
    ep.check_balancing(1)?;
    let inner = inner_poles(lam, mu, ep, 1e-3)?;
    let n = node_count(pole_gap(&inner), points);
    Ok(kappa1_mean(ep)? * separated_contour_mean(f, &inner, CONTOUR_MARGIN, n)?)
}

/// Left-hand side of the elliptic AFLT integral at one variable.
pub fn eaflt_lhs_n1(lam: &Bipartition, mu: &Bipartition, ep: &EllipticParams, points: usize) -> EResult {
    elliptic_integral_n1(&|z| eaflt_integrand(z, lam, mu, ep), lam, mu, ep, points)
}

/// Left-hand side of the generalised elliptic Selberg integral at one variable.
pub fn kadell_lhs_n1(lam: &Bipartition, mu: &Bipartition, ep: &EllipticParams, points: usize) -> EResult {
    elliptic_integral_n1(&|z| kadell_integrand(z, lam, mu, ep), lam, mu, ep, points)
}

/// Right-hand side of the elliptic AFLT integral at one variable.
pub fn eaflt_rhs_n1(lam: &Bipartition, mu: &Bipartition, ep: &EllipticParams) -> EResult {
    ep.check_balancing(1)?;
    Ok(eaflt_rhs(1, lam, mu, ep.t, &ep.ts, ep.p, ep.q)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cx(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    fn nomes(rng: &mut ChaCha8Rng) -> Nomes {
        let mut polar = |lo: f64, hi: f64| C64::from_polar(rng.gen_range(lo..hi), rng.gen_range(-PI..PI));
        Nomes::new(polar(0.2, 0.3), polar(0.3, 0.6), polar(0.1, 0.3))
    }

    fn generic(rng: &mut ChaCha8Rng) -> C64 {
        C64::from_polar(rng.gen_range(0.5..1.5), rng.gen_range(-PI..PI))
    }

    fn bip(a: u32, b: u32) -> Bipartition {
        Bipartition::new(row(a), row(b))
    }

    #[test]
    fn interpolation_examples() {
        let nm = Nomes::new(cx(0.3, 0.1), cx(0.4, 0.0), cx(0.2, -0.05));
        let (a, b, z) = (cx(0.7, 0.2), cx(0.9, -0.3), cx(1.1, 0.4));
        assert_eq!(bc1_interp(0, z, a, b, &nm).unwrap(), one());
        assert_eq!(bc1_interp(1, a, a, b, &nm).unwrap(), C64::new(0.0, 0.0));
        for m in 0..4 {
            for lam in 0..m {
                let v = bc1_interp(m, a * nm.q.powi(lam as i32), a, b, &nm).unwrap();
                assert!(v.norm() < 1e-14, "m={m} λ={lam}: {v}");
            }
            let cauchy_b = nm.p * nm.q / a;
            let r = bc1_interp(m, z, a, cauchy_b, &nm).unwrap();
            let f = bc1_interp_cauchy(m, z, a, cauchy_b, &nm).unwrap();
            assert!(rel(r, f) < 1e-10);
        }
    }

    #[test]
    fn binomial_normalisation_and_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let nm = nomes(&mut rng);
            let (a, b) = (generic(&mut rng), generic(&mut rng));
            for l in 0..4 {
                let v = elliptic_binomial(&row(l), &Partition::empty(), a, b, &nm).unwrap();
                assert!(rel(v, one()) < 1e-10, "l={l}: {v}");
                for m in l + 1..5 {
                    assert_eq!(elliptic_binomial(&row(l), &row(m), a, b, &nm).unwrap().norm(), 0.0);
                }
            }
            for (l, m) in [(1, 1), (2, 1), (3, 2)] {
                let s = a.sqrt();
                let x = elliptic_binomial_branch(l, m, a, b, s, &nm).unwrap();
                let y = elliptic_binomial_branch(l, m, a, b, -s, &nm).unwrap();
                assert!(rel(x, y) < 1e-10);
            }
        }
        let nm = Nomes::new(cx(0.3, 0.0), cx(0.4, 0.0), cx(0.1, 0.0));
        assert!(matches!(
            elliptic_binomial(&Partition::of(&[1, 1]), &Partition::empty(), one(), one(), &nm),
            Err(EllipticError::Scope(_))
        ));
    }

    #[test]
    fn jackson_summation() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..5 {
            let nm = nomes(&mut rng);
            let (a, b, c, d) = (generic(&mut rng), generic(&mut rng), generic(&mut rng), generic(&mut rng));
            for (l, nu) in [(0, 0), (1, 1), (2, 2), (1, 0), (2, 0), (2, 1), (3, 1)] {
                let (lhs, rhs) = jackson_sides(l, nu, a, b, c, d, &nm).unwrap();
                assert!(rel(lhs, rhs) < 1e-10, "λ={l} ν={nu}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn evaluation_symmetry_and_connection() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..5 {
            let nm = nomes(&mut rng);
            let (v, a, b, x, a2) = (generic(&mut rng), generic(&mut rng), generic(&mut rng), generic(&mut rng), generic(&mut rng));
            for (l, m) in [(0, 1), (1, 1), (2, 1), (1, 3), (2, 2)] {
                let (lhs, rhs) = evaluation_symmetry_sides(l, m, v, a, b, &nm).unwrap();
                assert!(rel(lhs, rhs) < 1e-10, "({l},{m}): {lhs} vs {rhs}");
            }
            for l in 0..4 {
                let (lhs, rhs) = connection_sides(l, x, a, a2, b, &nm).unwrap();
                assert!(rel(lhs, rhs) < 1e-10, "l={l}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn skew_functions() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..5 {
            let nm = nomes(&mut rng);
            let vs: Vec<C64> = (0..4).map(|_| generic(&mut rng)).collect();
            let (a, b, x) = (generic(&mut rng), generic(&mut rng), generic(&mut rng));
            for (l, nu) in [(0, 0), (1, 1), (1, 0), (2, 0), (2, 1), (3, 1)] {
                let sum = skew_interp(l, nu, &vs[..2], a, b, &nm).unwrap();
                let pair = skew_interp_pair(l, nu, vs[0], vs[1], a, b, &nm).unwrap();
                assert!(rel(sum, pair) < 1e-10, "pair ({l},{nu})");
                let four = skew_interp(l, nu, &vs, a, b, &nm).unwrap();
                let branched = skew_interp_branched(l, nu, &vs[..2], &vs[2..], a, b, &nm).unwrap();
                assert!(rel(four, branched) < 1e-10, "branching ({l},{nu}): {four} vs {branched}");
                let mut perm = vs.clone();
                perm.swap(0, 3);
                perm.swap(1, 2);
                assert!(rel(skew_interp(l, nu, &perm, a, b, &nm).unwrap(), four) < 1e-10);
            }
            for l in 0..3 {
                let (lhs, rhs) = interpolation_skew_sides(l, x, a, b, &nm).unwrap();
                assert!(rel(lhs, rhs) < 1e-10);
            }
        }
        let nm = Nomes::new(cx(0.3, 0.0), cx(0.4, 0.0), cx(0.1, 0.0));
        assert!(matches!(skew_interp(1, 0, &[one()], one(), one(), &nm), Err(EllipticError::Arguments(1))));
    }

    #[test]
    fn skew_limit_trend() {
        let (x, c, d, a, b) = (cx(0.8, 0.3), cx(0.5, -0.2), cx(0.7, 0.1), cx(0.9, 0.2), cx(0.6, -0.4));
        let (q, t) = (cx(0.3, 0.1), cx(0.4, -0.1));
        let target = skew_limit_value(1, x, c, d, a, q, t).unwrap();
        let errs: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&p| rel(skew_limit_scaled(1, x, c, d, a, b, q, t, p, 0.25, 0.5).unwrap(), target))
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
        let deep = skew_limit_scaled(1, x, c, d, a, b, q, t, 1e-16, 0.25, 0.5).unwrap();
        assert!(rel(deep, target) < 1e-3);
    }

    #[test]
    fn guards_on_sampled_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..5 {
            let ep = EllipticParams::sample(&mut rng);
            assert!(ep.balancing_defect(1) < 1e-12);
            let zs: Vec<C64> = ep.ts.iter().copied().chain([generic(&mut rng), ep.t]).collect();
            assert!(guard_defect(&zs, ep.p, ep.q).unwrap() < 1e-10);
        }
    }

    #[test]
    fn elliptic_beta_integral() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let zero = Bipartition::default();
        for _ in 0..4 {
            let ep = EllipticParams::sample(&mut rng);
            let lhs = eaflt_lhs_n1(&zero, &zero, &ep, 128).unwrap();
            let rhs = elliptic_selberg_rhs(1, ep.t, &ep.ts, ep.p, ep.q).unwrap();
            assert!(rel(lhs, rhs) < 1e-8, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn kadell_type_integral() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let cases = [(bip(1, 0), bip(0, 0)), (bip(0, 0), bip(1, 0)), (bip(1, 0), bip(1, 0)), (bip(2, 0), bip(0, 1)), (bip(1, 1), bip(1, 0))];
        for (lam, mu) in cases {
            let ep = EllipticParams::sample(&mut rng);
            let lhs = kadell_lhs_n1(&lam, &mu, &ep, 128).unwrap();
            let rhs = kadell_rhs(&lam, &mu, &ep).unwrap();
            assert!(rel(lhs, rhs) < 1e-7, "{lam} {mu}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn elliptic_aflt_integral() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let cases = [(bip(1, 0), bip(0, 0)), (bip(0, 0), bip(1, 0)), (bip(1, 0), bip(1, 0)), (bip(0, 1), bip(1, 0)), (bip(1, 1), bip(0, 1))];
        for (lam, mu) in cases {
            let ep = EllipticParams::sample(&mut rng);
            let lhs = eaflt_lhs_n1(&lam, &mu, &ep, 128).unwrap();
            let rhs = eaflt_rhs_n1(&lam, &mu, &ep).unwrap();
            assert!(rel(lhs, rhs) < 1e-7, "{lam} {mu}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn printed_final_factor_fails() {
        // Denominator parameter t^{n−2}t₂t₃t₄/t₅ instead of t^{n−2}t₃t₄t₅/t₆.
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let ep = EllipticParams::sample(&mut rng);
        let (lam, mu) = (bip(1, 0), bip(1, 0));
        let [t1, t2, t3, t4, t5, t6] = ep.ts;
        let (t, p, q) = (ep.t, ep.p, ep.q);
        let bottom: Vec<C64> = crate::closedform::bi_spectral(&lam, 1, t, p, q).iter().map(|&s| t1 * t3 * t4 * t5 * s).collect();
        let ours = bi_delta0(t3 * t4 * t5 / (t * t6), &bottom, t, p, q, &mu).unwrap();
        let printed = bi_delta0(t2 * t3 * t4 / (t * t5), &bottom, t, p, q, &mu).unwrap();
        let rhs = eaflt_rhs_n1(&lam, &mu, &ep).unwrap();
        let lhs = eaflt_lhs_n1(&lam, &mu, &ep, 128).unwrap();
        assert!(rel(lhs, rhs) < 1e-7);
        assert!(rel(lhs, rhs * ours / printed) > 1e-3);
    }

    #[test]
    fn kadell_case_of_the_aflt_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let zero = Bipartition::default();
        for lam in [bip(1, 0), bip(2, 0), bip(1, 1), bip(0, 2)] {
            let ep = EllipticParams::sample(&mut rng);
            let x = eaflt_rhs_n1(&lam, &zero, &ep).unwrap();
            let [t1, t2, ..] = ep.ts;
            let skew_factor = bi_delta0(t1 / t2, &[ep.t], ep.t, ep.p, ep.q, &lam).unwrap();
            let y = skew_factor * kadell_rhs(&lam, &zero, &ep).unwrap();
            assert!(rel(x, y) < 1e-10, "{lam}: {x} vs {y}");
        }
    }
}
