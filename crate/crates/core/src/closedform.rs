//! Closed-form right-hand sides of the Selberg-type evaluations.
//!
//! Γ-products are accumulated as a single log-sum through [`GammaProduct`],
//! which also tracks poles of the numerator and denominator separately so that
//! a 1/Γ at a nonpositive integer yields an exact zero.

use num_complex::Complex64 as C64;

use num_traits::{Signed, ToPrimitive};

use crate::coeffs::{ln_gamma, CResult, CoeffError};
use crate::field::FieldElement;
use crate::partitions::{Bipartition, Partition};

/// Running product ∏Γ(a_i)/∏Γ(b_j) with explicit pole bookkeeping.
#[derive(Clone, Debug, Default)]
pub struct GammaProduct {
    log: C64,
    factor: C64,
    num_poles: u32,
    den_poles: u32,
}

impl GammaProduct {
    pub fn new() -> GammaProduct {
        GammaProduct { log: C64::new(0.0, 0.0), factor: C64::new(1.0, 0.0), num_poles: 0, den_poles: 0 }
    }

    pub fn num(&mut self, z: C64) -> &mut Self {
        match ln_gamma(z) {
            Ok(l) => self.log += l,
            Err(_) => self.num_poles += 1,
        }
        self
    }

    pub fn den(&mut self, z: C64) -> &mut Self {
        match ln_gamma(z) {
            Ok(l) => self.log -= l,
            Err(_) => self.den_poles += 1,
        }
        self
    }

    /// Multiplies by an ordinary complex factor; an exact zero is counted
    /// like a pole of a denominator Γ.
    pub fn times(&mut self, c: C64) -> &mut Self {
        if c == C64::new(0.0, 0.0) {
            self.den_poles += 1;
        } else {
            self.factor *= c;
        }
        self
    }

    pub fn over(&mut self, c: C64) -> &mut Self {
        if c == C64::new(0.0, 0.0) {
            self.num_poles += 1;
        } else {
            self.factor /= c;
        }
        self
    }

    /// Multiplies by (a)_n, where (a)_{−n} = 1/(a−n)_n.
    pub fn poch(&mut self, a: C64, n: i64) -> &mut Self {
        if n >= 0 {
            for j in 0..n {
                self.times(a + j as f64);
            }
        } else {
            for j in 1..=-n {
                self.over(a - j as f64);
            }
        }
        self
    }

    pub fn poch_over(&mut self, a: C64, n: i64) -> &mut Self {
        if n >= 0 {
            for j in 0..n {
                self.over(a + j as f64);
            }
        } else {
            for j in 1..=-n {
                self.times(a - j as f64);
            }
        }
        self
    }

    /// Multiplies by (a;γ)_λ = ∏_i (a − (i−1)γ)_{λ_i}.
    pub fn gpoch(&mut self, a: C64, gamma: C64, lam: &Partition) -> &mut Self {
        for (i, &li) in lam.parts().iter().enumerate() {
            self.poch(a - i as f64 * gamma, li as i64);
        }
        self
    }

    pub fn gpoch_over(&mut self, a: C64, gamma: C64, lam: &Partition) -> &mut Self {
        for (i, &li) in lam.parts().iter().enumerate() {
            self.poch_over(a - i as f64 * gamma, li as i64);
        }
        self
    }

    pub fn value(&self) -> CResult {
        if self.num_poles > self.den_poles {
            return Err(CoeffError::Pole);
        }
        if self.den_poles > self.num_poles {
            return Ok(C64::new(0.0, 0.0));
        }
        if self.num_poles > 0 {
            // Γ(−n)/Γ(−m) needs a limit the caller must resolve.
            return Err(CoeffError::Pole);
        }
        Ok(self.factor * self.log.exp())
    }
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// (b)_n for integer n ≥ 0.
fn rising(b: C64, n: u32) -> C64 {
    (0..n).map(|i| b + i as f64).product()
}

/// Classical Selberg integral S_k(α, β; γ).
pub fn selberg_rhs(k: usize, alpha: C64, beta: C64, gamma: C64) -> CResult {
    let mut g = GammaProduct::new();
    for i in 1..=k {
        let i = i as f64;
        g.num(beta + (i - 1.0) * gamma)
            .num(alpha + (i - 1.0) * gamma)
            .num(1.0 + i * gamma)
            .den(alpha + beta + (2.0 * k as f64 - i - 1.0) * gamma)
            .den(1.0 + gamma);
    }
    g.value()
}

/// P^{(1/γ)}_λ[z] from the product formula, padded to k ≥ l(λ) rows.
pub fn jack_z(lam: &Partition, z: C64, gamma: C64, k: usize) -> C64 {
    assert!(k >= lam.len(), "padding shorter than the partition");
    let l = lam.padded(k);
    let mut v = c(1.0);
    for (i, &li) in l.iter().enumerate() {
        let i = i as f64;
        v *= rising(z * gamma - i * gamma, li) / rising(k as f64 * gamma - i * gamma, li);
    }
    for i in 0..k {
        for j in i + 1..k {
            let d = l[i] - l[j];
            let e = (j - i) as f64;
            v *= rising((e + 1.0) * gamma, d) / rising(e * gamma, d);
        }
    }
    v
}

/// Right-hand side of the AFLT integral (not normalised by S_k), with
/// padding m ≥ l(μ) for the μ-product.
pub fn aflt_rhs(k: usize, lam: &Partition, mu: &Partition, m: usize, alpha: C64, beta: C64, gamma: C64) -> CResult {
    if lam.len() > k {
        return Ok(c(0.0));
    }
    assert!(m >= mu.len(), "padding shorter than μ");
    let kf = k as f64;
    let mf = m as f64;
    let mut g = GammaProduct::new();
    g.times(jack_z(lam, c(kf), gamma, k.max(lam.len())))
        .times(jack_z(mu, kf + beta / gamma - 1.0, gamma, mu.len().max(1)));
    for i in 1..=k {
        let li = lam.part(i) as f64;
        let fi = i as f64;
        g.num(beta + (fi - 1.0) * gamma)
            .num(alpha + (kf - fi) * gamma + li)
            .num(1.0 + fi * gamma)
            .den(alpha + beta + (2.0 * kf - mf - fi - 1.0) * gamma + li)
            .den(1.0 + gamma);
        for j in 1..=m {
            let s = alpha + beta + li + mu.part(j) as f64;
            let fj = j as f64;
            g.num(s + (2.0 * kf - fi - fj - 1.0) * gamma).den(s + (2.0 * kf - fi - fj) * gamma);
        }
    }
    g.value()
}

/// Convention for k_{n+1} in the rank-n evaluations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    Zero,
    OneMinusBeta,
    OneMinusBetaOverGamma,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParamError {
    #[error("expected {0} values, got {1}")]
    Length(usize, usize),
    #[error("k must be nondecreasing: {0:?}")]
    Ordering(Vec<usize>),
    #[error("condition violated: {0}")]
    Condition(String),
}

/// Parameters of the rank-n Selberg integral: k₁..k_n, α₁..α_n, β and γ.
/// β₁ = … = β_{n−1} = 1 and β_n = β.
#[derive(Clone, Debug)]
pub struct AnParams {
    pub ks: Vec<usize>,
    pub alphas: Vec<C64>,
    pub beta: C64,
    pub gamma: C64,
}

impl AnParams {
    pub fn new(ks: &[usize], alphas: &[C64], beta: C64, gamma: C64) -> Result<AnParams, ParamError> {
        if ks.is_empty() || ks.len() != alphas.len() {
            return Err(ParamError::Length(ks.len().max(1), alphas.len()));
        }
        if ks.windows(2).any(|w| w[0] > w[1]) {
            return Err(ParamError::Ordering(ks.to_vec()));
        }
        Ok(AnParams { ks: ks.to_vec(), alphas: alphas.to_vec(), beta, gamma })
    }

    pub fn n(&self) -> usize {
        self.ks.len()
    }

    /// k_r for 0 ≤ r ≤ n+1; k₀ = 0 and k_{n+1} follows `b`.
    pub fn k(&self, r: usize, b: Boundary) -> C64 {
        let n = self.n();
        if r == 0 {
            c(0.0)
        } else if r <= n {
            c(self.ks[r - 1] as f64)
        } else {
            match b {
                Boundary::Zero => c(0.0),
                Boundary::OneMinusBeta => 1.0 - self.beta,
                Boundary::OneMinusBetaOverGamma => 1.0 - self.beta / self.gamma,
            }
        }
    }

    /// Integer k_r with k₀ = k_{n+1} = 0.
    fn kz(&self, r: usize) -> i64 {
        if r == 0 || r > self.n() {
            0
        } else {
            self.ks[r - 1] as i64
        }
    }

    pub fn beta_r(&self, r: usize) -> C64 {
        if r == self.n() {
            self.beta
        } else {
            c(1.0)
        }
    }

    /// α_r + … + α_s (zero when r > s).
    pub fn alpha_sum(&self, r: usize, s: usize) -> C64 {
        (r..=s).map(|i| self.alphas[i - 1]).sum()
    }

    /// A_r = α_r + … + α_n + (k_r − k_{r−1} + r)γ with k_{n+1} = 1 − β/γ.
    pub fn a(&self, r: usize) -> C64 {
        let b = Boundary::OneMinusBetaOverGamma;
        self.alpha_sum(r, self.n()) + (self.k(r, b) - self.k(r - 1, b) + r as f64) * self.gamma
    }

    pub fn a_rs(&self, r: usize, s: usize) -> C64 {
        self.a(r) - self.a(s)
    }

    pub fn with_gamma(&self, gamma: C64) -> AnParams {
        AnParams { gamma, ..self.clone() }
    }

    /// Convergence conditions of the real integral.
    pub fn check_conditions(&self) -> Result<(), ParamError> {
        let (n, g) = (self.n(), self.gamma);
        let kn = self.ks[n - 1] as f64;
        let fail = |m: String| Err(ParamError::Condition(m));
        if self.beta.re <= 0.0 {
            return fail("Re β > 0".into());
        }
        if n > 1 && kn > 0.0 && g.re.abs() >= 1.0 / kn {
            return fail(format!("|Re γ| < 1/k_n = {}", 1.0 / kn));
        }
        if (self.beta + (kn - 1.0) * g).re <= 0.0 {
            return fail("Re(β + (k_n − 1)γ) > 0".into());
        }
        for r in 1..=n {
            for s in r..=n {
                for i in 1..=(self.kz(r) - self.kz(r - 1)) {
                    if (self.alpha_sum(r, s) + (r as f64 - s as f64 + i as f64 - 1.0) * g).re <= 0.0 {
                        return fail(format!("Re(α_{r}+…+α_{s} + ({r}−{s}+{i}−1)γ) > 0"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Conditions of the γ = 1 contour integrals: Re(α_r + … + α_s) > s − r.
    pub fn check_conv(&self) -> Result<(), ParamError> {
        let n = self.n();
        for r in 1..=n {
            for s in r..=n {
                if self.alpha_sum(r, s).re <= (s - r) as f64 {
                    return Err(ParamError::Condition(format!("Re(α_{r}+…+α_{s}) > {}", s - r)));
                }
            }
        }
        Ok(())
    }
}

fn check_paddings(lams: &[Partition], ells: &[usize], n: usize) {
    assert_eq!(lams.len(), n + 1, "need n+1 partitions");
    assert_eq!(ells.len(), n + 1, "need n+1 paddings");
    for (l, &e) in lams.iter().zip(ells) {
        assert!(e >= l.len(), "padding shorter than partition {l}");
    }
}

fn sign(k: i64) -> f64 {
    if (k * (k - 1) / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The rank-n Selberg integral (k₀ = k_{n+1} = 0). For n = 1 this is the
/// integral over the ordered simplex, i.e. S_k/k!.
pub fn an_selberg_rhs(p: &AnParams) -> CResult {
    let (n, g) = (p.n(), p.gamma);
    let mut gp = GammaProduct::new();
    for r in 1..=n {
        for i in 1..=p.kz(r) {
            let fi = i as f64;
            gp.num(p.beta_r(r) + (fi - p.kz(r + 1) as f64 - 1.0) * g).num(fi * g).den(g);
        }
        for s in r..=n {
            let a = p.alpha_sum(r, s);
            let d = r as f64 - s as f64;
            let shift = (p.kz(s) - p.kz(s + 1)) as f64;
            for i in 1..=(p.kz(r) - p.kz(r - 1)) {
                let fi = i as f64;
                gp.num(a + (d + fi - 1.0) * g).den(a + p.beta_r(s) + (shift + d + fi - 2.0) * g);
            }
        }
    }
    gp.value()
}

/// Normalisation of the γ = 1 contour integral, k₀ = k_{n+1} = 0 form.
/// The γ field of `p` is ignored.
pub fn an_one_rhs(p: &AnParams) -> CResult {
    let n = p.n();
    let mut gp = GammaProduct::new();
    for r in 1..=n {
        gp.times(c(sign(p.kz(r))));
        for i in 1..=p.kz(r) {
            gp.num(c(i as f64 + 1.0)).den(p.kz(r + 1) as f64 - p.beta_r(r) + 2.0 - i as f64);
        }
        for s in r..=n {
            let a = p.alpha_sum(r, s);
            let d = r as f64 - s as f64;
            let shift = (p.kz(s) - p.kz(s + 1)) as f64;
            for i in 1..=(p.kz(r) - p.kz(r - 1)) {
                let fi = i as f64;
                gp.num(a + d + fi - 1.0).den(a + p.beta_r(s) + shift + d + fi - 2.0);
            }
        }
    }
    gp.value()
}

/// The same normalisation written with k_{n+1} = 1 − β and A_{r,s}.
pub fn an_one_rhs_alt(p: &AnParams) -> CResult {
    let n = p.n();
    let u = p.with_gamma(c(1.0));
    let k = |r| u.k(r, Boundary::OneMinusBeta);
    let mut gp = GammaProduct::new();
    for r in 1..=n {
        gp.times(c(sign(p.kz(r))));
        for i in 1..=p.kz(r) {
            gp.num(c(i as f64 + 1.0)).den(k(r + 1) - i as f64 + 1.0);
        }
        for s in r + 1..=n + 1 {
            let ars = u.a_rs(r, s);
            for i in 1..=(p.kz(r) - p.kz(r - 1)) {
                let fi = i as f64;
                gp.num(ars + k(s) - k(s - 1) - fi + 1.0).den(ars - fi + 1.0);
            }
        }
    }
    gp.value()
}

/// Average of P_λ[t⁽¹⁾] P_μ[t⁽ⁿ⁾ + β/γ − 1] over the rank-n Selberg density,
/// with paddings ℓ ≥ l(λ) and m ≥ l(μ).
pub fn an_aflt_rhs(p: &AnParams, lam: &Partition, mu: &Partition, ell: usize, m: usize) -> CResult {
    let (n, g) = (p.n(), p.gamma);
    let k1 = p.kz(1);
    let kn = p.kz(n) as f64;
    if lam.len() as i64 > k1 {
        return Ok(c(0.0));
    }
    assert!(ell >= lam.len() && m >= mu.len(), "padding shorter than partition");
    let mut gp = GammaProduct::new();
    gp.times(jack_z(lam, c(k1 as f64), g, lam.len()))
        .times(jack_z(mu, kn + p.beta / g - 1.0, g, mu.len()));
    let k1 = k1 as f64;
    for r in 1..=n {
        let fr = r as f64;
        let a = p.alpha_sum(1, r);
        let md = if r == n { m as f64 } else { 0.0 };
        let shift = (p.kz(r) - p.kz(r + 1)) as f64;
        for i in 1..=ell {
            let (li, fi) = (lam.part(i) as i64, i as f64);
            gp.poch(a + (k1 - fr - fi + 1.0) * g, li)
                .poch_over(a + p.beta_r(r) + (k1 + shift - fr - md - fi) * g, li);
        }
        let b = p.alpha_sum(r, n) + p.beta;
        let ld = if r == 1 { ell as f64 } else { 0.0 };
        let step = (p.kz(r) - p.kz(r - 1)) as f64;
        let nf = n as f64;
        for j in 1..=m {
            let (mj, fj) = (mu.part(j) as i64, j as f64);
            gp.poch(b + (kn + fr - nf - fj - 1.0) * g, mj)
                .poch_over(b + (step + kn + fr - nf - ld - fj - 1.0) * g, mj);
        }
    }
    let a = p.alpha_sum(1, n) + p.beta;
    let base = k1 + kn - n as f64;
    for i in 1..=ell {
        for j in 1..=m {
            let e = (lam.part(i) + mu.part(j)) as i64;
            let d = (i + j) as f64;
            gp.poch(a + (base - d) * g, e).poch_over(a + (base - d + 1.0) * g, e);
        }
    }
    gp.value()
}

/// Parameters of the companion integral: β_{n−1} + β_n = γ + 1, the other
/// β_r equal to 1, k₁ ≤ … ≤ k_{n−1} and k_n free.
#[derive(Clone, Debug)]
pub struct AltParams {
    pub ks: Vec<usize>,
    pub alphas: Vec<C64>,
    pub beta_pair: (C64, C64),
    pub gamma: C64,
}

impl AltParams {
    pub fn new(ks: &[usize], alphas: &[C64], beta_pair: (C64, C64), gamma: C64) -> Result<AltParams, ParamError> {
        if ks.len() < 2 || ks.len() != alphas.len() {
            return Err(ParamError::Length(ks.len().max(2), alphas.len()));
        }
        if ks[..ks.len() - 1].windows(2).any(|w| w[0] > w[1]) {
            return Err(ParamError::Ordering(ks.to_vec()));
        }
        Ok(AltParams { ks: ks.to_vec(), alphas: alphas.to_vec(), beta_pair, gamma })
    }

    pub fn n(&self) -> usize {
        self.ks.len()
    }

    fn kz(&self, r: usize) -> i64 {
        if r == 0 || r > self.n() {
            0
        } else {
            self.ks[r - 1] as i64
        }
    }

    /// β_r for 0 ≤ r ≤ n.
    pub fn beta_r(&self, r: usize) -> C64 {
        let n = self.n();
        if r == n {
            self.beta_pair.1
        } else if r + 1 == n {
            self.beta_pair.0
        } else {
            c(1.0)
        }
    }

    pub fn alpha_sum(&self, r: usize, s: usize) -> C64 {
        (r..=s).map(|i| self.alphas[i - 1]).sum()
    }

    pub fn check_conditions(&self) -> Result<(), ParamError> {
        let (n, g) = (self.n(), self.gamma);
        let fail = |m: String| Err(ParamError::Condition(m));
        let (b1, b2) = self.beta_pair;
        if (b1 + b2 - g - 1.0).norm() > 1e-12 {
            return fail("β_{n−1} + β_n = γ + 1".into());
        }
        let (kp, kn) = (self.kz(n - 1), self.kz(n));
        for i in 1..=kp.min(kn) {
            let x = b1 + (i - kn - 1) as f64 * g;
            if x.im.abs() < 1e-14 && (x.re - x.re.round()).abs() < 1e-12 {
                return fail(format!("β_{{n−1}} + ({i}−k_n−1)γ must not be an integer"));
            }
        }
        let kmax = kp.max(kn) as f64;
        if kmax > 0.0 && g.re <= -1.0 / kmax {
            return fail("Re γ > −1/max(k_{n−1}, k_n)".into());
        }
        for r in 1..=n {
            for i in 1..=self.kz(r) {
                if (self.beta_r(r) + (i - self.kz(r + 1) - 1) as f64 * g).re <= 0.0 {
                    return fail(format!("Re(β_{r} + ({i}−k_{}−1)γ) > 0", r + 1));
                }
            }
        }
        for r in 1..=n {
            for s in r..=n {
                let top = if s < n {
                    self.kz(r) - self.kz(r - 1)
                } else if r < n {
                    kn.min(self.kz(r) - self.kz(r - 1))
                } else {
                    kn
                };
                for i in 1..=top {
                    if (self.alpha_sum(r, s) + (r as f64 - s as f64 + i as f64 - 1.0) * g).re <= 0.0 {
                        return fail(format!("Re(α_{r}+…+α_{s} + ({r}−{s}+{i}−1)γ) > 0"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Average of P_λ(t⁽¹⁾) P_μ(t⁽ⁿ⁾) for the companion integral.
pub fn an_alt_rhs(p: &AltParams, lam: &Partition, mu: &Partition) -> CResult {
    let (n, g) = (p.n(), p.gamma);
    let (k1, kn) = (p.kz(1), p.kz(n));
    if lam.len() as i64 > k1 || mu.len() as i64 > kn {
        return Ok(c(0.0));
    }
    let (k1f, knf, nf) = (k1 as f64, kn as f64, n as f64);
    let mut gp = GammaProduct::new();
    gp.times(jack_z(lam, c(k1f), g, lam.len())).times(jack_z(mu, c(knf), g, mu.len()));
    for r in 1..n {
        let (a, fr) = (p.alpha_sum(1, r), r as f64);
        let shift = (p.kz(r) - p.kz(r + 1)) as f64;
        gp.gpoch(a + (k1f - fr) * g, g, lam)
            .gpoch_over(a + p.beta_r(r) + (k1f + shift - fr - 1.0) * g, g, lam);
    }
    for r in 2..=n {
        let (a, fr) = (p.alpha_sum(r, n), r as f64);
        let step = (p.kz(r) - p.kz(r - 1)) as f64;
        gp.gpoch(a + (knf + fr - nf - 1.0) * g, g, mu)
            .gpoch_over(1.0 + a - p.beta_r(r - 1) + (step + knf + fr - nf - 1.0) * g, g, mu);
    }
    let a = p.alpha_sum(1, n);
    for i in 1..=k1 {
        for j in 1..=kn {
            let e = (lam.part(i as usize) + mu.part(j as usize)) as i64;
            let d = k1f + knf - nf - (i + j) as f64;
            gp.poch(a + (d + 1.0) * g, e).poch_over(a + (d + 2.0) * g, e);
        }
    }
    gp.value()
}

/// Normalisation of the companion integral. With `alternative` the final
/// Γ-product is taken in its second form; both agree.
pub fn an_alt_norm(p: &AltParams, alternative: bool) -> CResult {
    let (n, g) = (p.n(), p.gamma);
    let kn = p.kz(n);
    let mut gp = GammaProduct::new();
    for r in 1..=n {
        for i in 1..=p.kz(r) {
            let fi = i as f64;
            gp.num(p.beta_r(r) + (fi - p.kz(r + 1) as f64 - 1.0) * g).num(fi * g).den(g);
        }
    }
    for r in 1..n {
        for s in r..n {
            let a = p.alpha_sum(r, s);
            let d = r as f64 - s as f64;
            let shift = (p.kz(s) - p.kz(s + 1)) as f64;
            for i in 1..=(p.kz(r) - p.kz(r - 1)) {
                let fi = i as f64;
                gp.num(a + (d + fi - 1.0) * g).den(a + p.beta_r(s) + (shift + d + fi - 2.0) * g);
            }
        }
    }
    let nf = n as f64;
    if alternative {
        for r in 1..n {
            let (a, d) = (p.alpha_sum(r, n), r as f64 - nf);
            for i in 1..=(p.kz(r) - p.kz(r - 1)) {
                let fi = i as f64;
                gp.num(a + (d + fi - 1.0) * g).den(a + (kn as f64 + d + fi - 1.0) * g);
            }
        }
        let an = p.alphas[n - 1];
        let step = (kn - p.kz(n - 1)) as f64;
        for i in 1..=kn {
            let fi = i as f64;
            gp.num(an + (fi - 1.0) * g).den(an + p.beta_r(n) + (step + fi - 2.0) * g);
        }
    } else {
        for r in 1..=n {
            let (a, d) = (p.alpha_sum(r, n), r as f64 - nf);
            let step = (p.kz(r) - p.kz(r - 1)) as f64;
            for i in 1..=kn {
                let fi = i as f64;
                gp.num(a + (d + fi - 1.0) * g).den(1.0 + a - p.beta_r(r - 1) + (step + d + fi - 1.0) * g);
            }
        }
    }
    gp.value()
}

/// Schur average with n+1 partitions at γ = 1, in the k_{n+1} = 1 − β
/// convention, with paddings ℓ_r ≥ l(λ⁽ʳ⁾).
pub fn nplusone_rhs(p: &AnParams, lams: &[Partition], ells: &[usize]) -> CResult {
    let n = p.n();
    check_paddings(lams, ells, n);
    let u = p.with_gamma(c(1.0));
    let k = |r| u.k(r, Boundary::OneMinusBeta);
    let mut gp = GammaProduct::new();
    for r in 0..=n {
        let l = &lams[r];
        for i in 1..=ells[r] {
            for j in i + 1..=ells[r] {
                let d = (j - i) as f64;
                gp.times(c(l.part(i) as f64 - l.part(j) as f64 + d)).over(c(d));
            }
        }
    }
    for r in 1..=n + 1 {
        for s in 1..=n + 1 {
            let ars = u.a_rs(r, s);
            for i in 1..=ells[r - 1] {
                let (li, fi) = (lams[r - 1].part(i) as i64, i as f64);
                gp.poch(ars - k(s - 1) + k(s) - fi + 1.0, li)
                    .poch_over(ars + ells[s - 1] as f64 - fi + 1.0, li);
            }
        }
        for s in r + 1..=n + 1 {
            let ars = u.a_rs(r, s);
            for i in 1..=ells[r - 1] {
                for j in 1..=ells[s - 1] {
                    let d = j as f64 - i as f64;
                    let diff = lams[r - 1].part(i) as f64 - lams[s - 1].part(j) as f64;
                    gp.times(ars + diff + d).over(ars + d);
                }
            }
        }
    }
    gp.value()
}

fn eps(r: usize, n: usize) -> f64 {
    if r == n + 1 {
        -1.0
    } else {
        1.0
    }
}

/// The γ = 1 average with s_{λ⁽ⁿ⁺¹⁾}[t⁽ⁿ⁾ + β − 1] in the last slot.
pub fn gamma_one_rhs(p: &AnParams, lams: &[Partition], ells: &[usize]) -> CResult {
    let n = p.n();
    check_paddings(lams, ells, n);
    let u = p.with_gamma(c(1.0));
    let k = |r| u.k(r, Boundary::OneMinusBeta);
    let one = c(1.0);
    let mut gp = GammaProduct::new();
    for r in 1..=n {
        gp.times(jack_z(&lams[r - 1], k(r) - k(r - 1), one, lams[r - 1].len()));
    }
    gp.times(jack_z(&lams[n], k(n) + p.beta - 1.0, one, lams[n].len()));
    for r in 1..=n + 1 {
        let er = eps(r, n);
        for s in 1..=n + 1 {
            if s == r {
                continue;
            }
            let es = eps(s, n);
            let ars = u.a_rs(r, s);
            for i in 1..=ells[r - 1] {
                let (li, fi) = (lams[r - 1].part(i) as i64, i as f64);
                gp.poch(er * (ars - k(s - 1) + k(s)) - fi + 1.0, li)
                    .poch_over(er * (ars + es * ells[s - 1] as f64) - fi + 1.0, li);
            }
        }
        for s in r + 1..=n + 1 {
            let es = eps(s, n);
            let ars = u.a_rs(r, s);
            for i in 1..=ells[r - 1] {
                for j in 1..=ells[s - 1] {
                    let e = lams[r - 1].part(i) as i64 - es as i64 * lams[s - 1].part(j) as i64;
                    let (fi, fj) = (i as f64, j as f64);
                    gp.poch(ars - fi + es * fj + 1.0, e).poch_over(ars - fi + es * (fj - 1.0) + 1.0, e);
                }
            }
        }
    }
    gp.value()
}

/// The function R^{k}_{λ⁽¹⁾..λ⁽ⁿ⁺¹⁾}(α, β; γ), with paddings ℓ_r ≥ l(λ⁽ʳ⁾)
/// and ℓ₁ ≤ k₁.
pub fn r_function(p: &AnParams, lams: &[Partition], ells: &[usize]) -> CResult {
    let (n, g) = (p.n(), p.gamma);
    check_paddings(lams, ells, n);
    assert!(ells[0] <= p.ks[0], "ℓ₁ must not exceed k₁");
    let b = Boundary::OneMinusBetaOverGamma;
    let k = |r| p.k(r, b);
    let ell = |r: usize| ells[r - 1] as f64;
    let lam = |r: usize| &lams[r - 1];
    let mut gp = GammaProduct::new();
    for r in 1..=n {
        gp.times(jack_z(lam(r), k(r) - k(r - 1), g, lam(r).len()));
    }
    gp.times(jack_z(lam(n + 1), k(n) + p.beta / g - 1.0, g, lam(n + 1).len()));
    for r in 1..=n + 1 {
        for s in r + 1..=n + 1 {
            let (es, ars) = (eps(s, n), p.a_rs(r, s));
            gp.gpoch(-es * ars - es * (k(r - 1) - k(r)) * g, g, lam(s))
                .gpoch_over(-es * ars + es * ell(r) * g, g, lam(s));
        }
    }
    for r in 1..=n {
        for s in r + 1..=n {
            let ars = p.a_rs(r, s);
            gp.gpoch(ars - (k(s - 1) - k(s)) * g, g, lam(r))
                .gpoch_over(1.0 + ars + (ell(s) - 1.0) * g, g, lam(r));
            for i in 1..=ells[r - 1] {
                for j in 1..=ells[s - 1] {
                    let e = lam(r).part(i) as i64 - lam(s).part(j) as i64;
                    let d = j as f64 - i as f64;
                    gp.poch(1.0 + ars + d * g, e).poch_over(1.0 + ars + (d - 1.0) * g, e);
                }
            }
        }
        let ar = p.a_rs(r, n + 1);
        gp.gpoch(ar - (k(n) - k(n + 1)) * g, g, lam(r))
            .gpoch_over(ar - ell(n + 1) * g, g, lam(r));
        for i in 1..=ells[r - 1] {
            for j in 1..=ells[n] {
                let e = (lam(r).part(i) + lam(n + 1).part(j)) as i64;
                let d = (i + j) as f64;
                gp.poch(ar - (d - 1.0) * g, e).poch_over(ar - (d - 2.0) * g, e);
            }
        }
    }
    gp.value()
}

/// Right-hand side of the recursion for R: R at (k − 1, α₁ + γ, β + γ) times
/// the ratio of (·;γ)_λ factors. Requires l(λ⁽¹⁾) < k₁ and all k_r ≥ 1.
pub fn r_recursion_rhs(p: &AnParams, lams: &[Partition], ells: &[usize]) -> CResult {
    let (n, g) = (p.n(), p.gamma);
    assert!(p.ks.iter().all(|&k| k >= 1) && lams[0].len() < p.ks[0], "recursion needs l(λ⁽¹⁾) < k₁ and k_r ≥ 1");
    let mut alphas = p.alphas.clone();
    alphas[0] += g;
    let ks: Vec<usize> = p.ks.iter().map(|k| k - 1).collect();
    let shifted = AnParams { ks, alphas, beta: p.beta + g, gamma: g };
    let mut ells = ells.to_vec();
    ells[0] = ells[0].min(shifted.ks[0]);
    let mut gp = GammaProduct::new();
    gp.times(r_function(&shifted, lams, &ells)?);
    let k1 = p.ks[0] as f64;
    for s in 1..=n + 1 {
        let (es, a1s) = (eps(s, n), p.a_rs(1, s));
        gp.gpoch(-es * a1s + es * k1 * g, g, &lams[s - 1])
            .gpoch_over(-es * a1s + es * (k1 - 1.0) * g, g, &lams[s - 1]);
    }
    gp.value()
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HyperError {
    #[error("series does not terminate")]
    NonTerminating,
    #[error("lower parameter hits a pole before the series terminates")]
    Pole,
}

fn nonpositive_integer(a: C64) -> Option<u64> {
    let r = a.re.round();
    (a.im.abs() < 1e-12 && (a.re - r).abs() < 1e-12 && r <= 0.0).then(|| (-r) as u64)
}

/// Terminating pF_q(upper; lower; z).
pub fn pfq(upper: &[C64], lower: &[C64], z: C64) -> Result<C64, HyperError> {
    let top = upper.iter().filter_map(|&a| nonpositive_integer(a)).min().ok_or(HyperError::NonTerminating)?;
    let (mut term, mut sum) = (c(1.0), c(1.0));
    for j in 0..top {
        let jf = j as f64;
        let mut den = c(jf + 1.0);
        for &b in lower {
            den *= b + jf;
        }
        if den.norm() == 0.0 {
            return Err(HyperError::Pole);
        }
        term *= upper.iter().map(|&a| a + jf).product::<C64>() * z / den;
        sum += term;
    }
    Ok(sum)
}

/// Terminating pF_q at exact field inputs; the termination order is read
/// off the rational upper parameters.
pub fn pfq_exact(upper: &[FieldElement], lower: &[FieldElement], z: &FieldElement) -> Result<FieldElement, HyperError> {
    let top = upper
        .iter()
        .filter_map(|a| a.as_rational())
        .filter(|r| r.is_integer() && !r.is_positive())
        .map(|r| (-r.to_integer()).to_u64().unwrap())
        .min()
        .ok_or(HyperError::NonTerminating)?;
    let one = FieldElement::one();
    let (mut term, mut sum) = (one.clone(), one.clone());
    for j in 0..top {
        let jf = FieldElement::from_int(j as i64);
        let mut den = &jf + &one;
        for b in lower {
            den = den * (b + &jf);
        }
        if den.is_zero() {
            return Err(HyperError::Pole);
        }
        let num: FieldElement = upper.iter().map(|a| a + &jf).product();
        term = term * num * z / den;
        sum = sum + &term;
    }
    Ok(sum)
}

/// Terminating ₂φ₁(q^{−r}, b; c; q, z).
pub fn phi21(r: u32, b: C64, cc: C64, q: C64, z: C64) -> Result<C64, HyperError> {
    let a = q.powi(-(r as i32));
    let (mut term, mut sum) = (c(1.0), c(1.0));
    for j in 0..r as i32 {
        let qj = q.powi(j);
        let den = (1.0 - cc * qj) * (1.0 - q * qj);
        if den.norm() == 0.0 {
            return Err(HyperError::Pole);
        }
        term *= (1.0 - a * qj) * (1.0 - b * qj) * z / den;
        sum += term;
    }
    Ok(sum)
}

pub fn phi21_exact(r: u32, b: &FieldElement, cc: &FieldElement, q: &FieldElement, z: &FieldElement) -> Result<FieldElement, HyperError> {
    let one = FieldElement::one();
    let a = q.pow(-(r as i64));
    let (mut term, mut sum) = (one.clone(), one.clone());
    for j in 0..r as i64 {
        let qj = q.pow(j);
        let den = (&one - cc * &qj) * (&one - q * &qj);
        if den.is_zero() {
            return Err(HyperError::Pole);
        }
        term = term * (&one - &a * &qj) * (&one - b * &qj) * z / den;
        sum = sum + &term;
    }
    Ok(sum)
}

/// The k = 1ⁿ average of ∏_r P_{(u_r)}[t_r − t_{r−1}] · P_μ[t_n + β/γ − 1]
/// at parameters α_r − u_r, as a product of terminating ₃F₂ series.
pub fn guess_three_f_two(alphas: &[C64], beta: C64, gamma: C64, us: &[u32], mu: &Partition) -> Result<C64, HyperError> {
    let n = alphas.len();
    assert_eq!(us.len(), n, "one row length per alphabet");
    let g = gamma;
    let asum = |r: usize| -> C64 { alphas[..r].iter().sum() };
    let mut gp = GammaProduct::new();
    let total = asum(n) + beta;
    gp.times(jack_z(mu, beta / g, g, mu.len()))
        .gpoch(total - n as f64 * g, g, mu)
        .gpoch_over(total - (n as f64 - 1.0) * g, g, mu);
    let mut ur = 0i64;
    for r in 1..=n {
        ur += us[r - 1] as i64;
        let a = asum(r);
        let br = if r == n { beta } else { c(1.0) };
        let delta = if r == n { 1.0 } else { 0.0 };
        let fr = r as f64;
        gp.poch(1.0 - a + (fr - 1.0) * g, ur).poch_over(1.0 - a - br + (fr - delta) * g, ur);
    }
    for r in 1..n {
        let a = asum(r);
        let u = us[r] as f64;
        let fr = r as f64;
        let f = pfq(&[-g, a - (fr - 1.0) * g, c(-u)], &[1.0 - g - u, 1.0 + a - fr * g], c(1.0))?;
        gp.times(f);
    }
    gp.value().map_err(|_| HyperError::Pole)
}

/// Companion average ⟨P_{(u₁)}[t₁] P_{(u₂)}[t₂ − t₁] P_{(u₃)}[t₂]⟩ at n = 2,
/// k = (1,1), β₁ + β₂ = γ + 1, as a terminating ₄F₃ series.
pub fn companion_four_f_three(alpha: (C64, C64), beta: (C64, C64), gamma: C64, u: [u32; 3]) -> Result<C64, HyperError> {
    let ((a1, a2), (b1, b2), g) = (alpha, beta, gamma);
    let [u1, u2, u3] = u.map(|x| x as i64);
    let s23 = (u2 + u3) as f64;
    let mut gp = GammaProduct::new();
    gp.poch(a1, u1)
        .poch(a2, u2 + u3)
        .poch(a1 + a2 - g, u1 + u2 + u3)
        .poch_over(a1 + b1 - g, u1)
        .poch_over(a2 + b2 - g, u2 + u3)
        .poch_over(a1 + a2, u1 + u2 + u3);
    let f = pfq(
        &[-g, a1 + u1 as f64, -a2 + b1 - s23, c(-(u2 as f64))],
        &[1.0 - g - u2 as f64, a1 + b1 - g + u1 as f64, 1.0 - a2 - s23],
        c(1.0),
    )?;
    gp.times(f);
    gp.value().map_err(|_| HyperError::Pole)
}

/// The γ = 1 value of the same companion average (piecewise in u₂).
pub fn companion_gamma_one(alpha: (C64, C64), beta: (C64, C64), u: [u32; 3]) -> CResult {
    let ((a1, a2), (b1, b2)) = (alpha, beta);
    let [u1, u2, u3] = u.map(|x| x as i64);
    let mut gp = GammaProduct::new();
    if u2 == 0 {
        gp.poch(a1, u1)
            .poch(a2, u3)
            .times(a1 + a2 - 1.0)
            .poch_over(a1 + b1 - 1.0, u1)
            .poch_over(a2 + b2 - 1.0, u3)
            .over(a1 + a2 - 1.0 + (u1 + u3) as f64);
    } else {
        gp.poch(a1, u1)
            .poch(a2, u2 + u3 - 1)
            .times((a1 + a2 - 1.0) * (b1 - 1.0))
            .poch_over(a1 + b1 - 1.0, u1 + 1)
            .poch_over(a2 + b2 - 1.0, u2 + u3);
    }
    gp.value()
}

// ---------------------------------------------------------------------------
// Macdonald-type evaluations
// ---------------------------------------------------------------------------

fn qinf(b: C64, q: C64) -> CResult {
    crate::coeffs::qpoch_inf(b, q)
}

/// (u;q,t)_λ = ∏_i (u t^{1−i};q)_{λ_i}.
pub fn qt_poch_num(u: C64, q: C64, t: C64, lam: &Partition) -> C64 {
    let mut v = c(1.0);
    for (i, &l) in lam.parts().iter().enumerate() {
        let mut x = u * t.powi(-(i as i32));
        for _ in 0..l {
            v *= 1.0 - x;
            x *= q;
        }
    }
    v
}

/// (c_λ(q,t), c'_λ(q,t)) as hook products.
pub fn mac_hooks(lam: &Partition, q: C64, t: C64) -> (C64, C64) {
    let (mut h, mut hp) = (c(1.0), c(1.0));
    for (i, j) in lam.cells() {
        let (a, l, _, _) = lam.arm_leg(i, j);
        h *= 1.0 - q.powi(a as i32) * t.powi(l as i32 + 1);
        hp *= 1.0 - q.powi(a as i32 + 1) * t.powi(l as i32);
    }
    (h, hp)
}

/// P_λ[(1−u)/(1−t)] = t^{n(λ)} (u;q,t)_λ / c_λ(q,t).
pub fn mac_principal(lam: &Partition, u: C64, q: C64, t: C64) -> C64 {
    t.powi(lam.n_stat() as i32) * qt_poch_num(u, q, t, lam) / mac_hooks(lam, q, t).0
}

/// Q_λ[(1−u)/(1−t)].
pub fn mac_principal_q(lam: &Partition, u: C64, q: C64, t: C64) -> C64 {
    let (h, hp) = mac_hooks(lam, q, t);
    mac_principal(lam, u, q, t) * h / hp
}

fn push_inf(g: &mut GammaProduct, num: &[C64], den: &[C64], q: C64) -> Result<(), CoeffError> {
    for &x in num {
        g.times(qinf(x, q)?);
    }
    for &x in den {
        g.over(qinf(x, q)?);
    }
    Ok(())
}

/// Right-hand side of the Macdonald-polynomial AFLT integral over 𝕋ⁿ with
/// weight ∏(a/z_i, qz_i/a;q)_∞/(b/z_i, z_i;q)_∞; `m` ≥ l(μ) is the padding.
#[allow(clippy::too_many_arguments)]
pub fn mac_aflt_rhs(n: usize, lam: &Partition, mu: &Partition, m: usize, a: C64, b: C64, q: C64, t: C64) -> CResult {
    assert!(lam.len() <= n && mu.len() <= m, "padding shorter than the partition");
    let (lp, mp) = (lam.padded(n), mu.padded(m));
    let tp = |e: i64| t.powi(e as i32);
    let qp = |e: i64| q.powi(e as i32);
    let mut g = GammaProduct::new();
    g.times(b.powi(lam.size() as i32) * t.powi(mu.size() as i32))
        .times(mac_principal(lam, tp(n as i64), q, t))
        .times(mac_principal(mu, b * tp(n as i64 - 1), q, t));
    for i in 1..=n as i64 {
        let li = lp[i as usize - 1] as i64;
        push_inf(
            &mut g,
            &[t, a * tp(n as i64 - m as i64 - i) * qp(li), a * tp(1 - i) / b, q * tp(i - 1) * b / a],
            &[q, tp(i), b * tp(i - 1), a * tp(1 - i) * qp(li) / b],
            q,
        )?;
        for j in 1..=m as i64 {
            let e = qp(li + mp[j as usize - 1] as i64);
            push_inf(&mut g, &[a * tp(n as i64 - i - j + 1) * e], &[a * tp(n as i64 - i - j) * e], q)?;
        }
    }
    g.value()
}

/// The same evaluation after replacing λ by its complement in (Nⁿ) and a by
/// aq^{−N}: right-hand side for the integrand P_λ(z^{−1}) P_μ[z+(t−b)/(1−t)].
#[allow(clippy::too_many_arguments)]
pub fn mac_complement_rhs(n: usize, lam: &Partition, mu: &Partition, m: usize, a: C64, b: C64, q: C64, t: C64) -> CResult {
    assert!(lam.len() <= n && mu.len() <= m, "padding shorter than the partition");
    let (lp, mp) = (lam.padded(n), mu.padded(m));
    let tp = |e: i64| t.powi(e as i32);
    let qp = |e: i64| q.powi(e as i32);
    let (nl, nm) = (lam.size() as i32, mu.size() as i32);
    let mut g = GammaProduct::new();
    g.times(b.powi(-nl) * t.powi(nm - (n as i32 - 1) * nl))
        .times(mac_principal(lam, tp(n as i64), q, t))
        .times(mac_principal(mu, b * tp(n as i64 - 1), q, t));
    for i in 1..=n as i64 {
        let li = lp[i as usize - 1] as i64;
        push_inf(
            &mut g,
            &[t, a * tp(i - m as i64 - 1) * qp(-li), a * tp(i - n as i64) / b, q * tp(i - 1) * b / a],
            &[q, tp(i), b * tp(i - 1), a * tp(i - n as i64) * qp(-li) / b],
            q,
        )?;
        for j in 1..=m as i64 {
            let e = qp(mp[j as usize - 1] as i64 - li);
            push_inf(&mut g, &[a * tp(i - j) * e], &[a * tp(i - j - 1) * e], q)?;
        }
    }
    g.value()
}

/// Right-hand side of the scalar-product form
/// ⟨P_λ ∏(az_i;q)_∞/(bz_i;q)_∞, Q_μ[z+(t−b)/(1−t)] ∏(qz_i/a;q)_∞/(z_i;q)_∞⟩′_n.
#[allow(clippy::too_many_arguments)]
pub fn mac_corollary_rhs(n: usize, lam: &Partition, mu: &Partition, m: usize, a: C64, b: C64, q: C64, t: C64) -> CResult {
    assert!(lam.len() <= n && mu.len() <= m, "padding shorter than the partition");
    let (lp, mp) = (lam.padded(n), mu.padded(m));
    let tp = |e: i64| t.powi(e as i32);
    let mut g = GammaProduct::new();
    g.times(t.powi((1 - n as i32) * mu.size() as i32))
        .times(mac_principal(lam, tp(n as i64), q, t))
        .times(mac_principal_q(mu, b * tp(n as i64 - 1), q, t))
        .times(qt_poch_num(q * tp(m as i64) / a, q, t, lam))
        .over(qt_poch_num(b * q * tp(n as i64 - 1) / a, q, t, lam));
    for i in 1..=n as i64 {
        push_inf(&mut g, &[t, a * tp(i - 1), q * tp(i - 1) * b / a], &[q, tp(i), b * tp(i - 1)], q)?;
        for j in 1..=m as i64 {
            let d = lp[i as usize - 1] as i64 - mp[j as usize - 1] as i64;
            g.times(crate::coeffs::qpoch_num(q * tp(j - i) / a, q, d)?)
                .over(crate::coeffs::qpoch_num(q * tp(j - i + 1) / a, q, d)?);
        }
    }
    g.value()
}

/// ⟨P_λ, Q_λ⟩′_n = (tⁿ;q,t)_λ/(qt^{n−1};q,t)_λ ∏_i (t, qt^{i−1};q)_∞/(q, t^i;q)_∞.
pub fn macdonald_norm(n: usize, lam: &Partition, q: C64, t: C64) -> CResult {
    let mut g = GammaProduct::new();
    g.times(qt_poch_num(t.powi(n as i32), q, t, lam))
        .over(qt_poch_num(q * t.powi(n as i32 - 1), q, t, lam));
    for i in 1..=n as i32 {
        push_inf(&mut g, &[t, q * t.powi(i - 1)], &[q, t.powi(i)], q)?;
    }
    g.value()
}

// ---------------------------------------------------------------------------
// Elliptic evaluations
// ---------------------------------------------------------------------------

/// Δ⁰ for a bipartition: the first component with nomes (q,t;p), the second
/// with (p,t;q).
pub fn bi_delta0(a: C64, bs: &[C64], t: C64, p: C64, q: C64, lam: &Bipartition) -> CResult {
    Ok(crate::coeffs::delta0(a, bs, q, t, p, &lam.first)? * crate::coeffs::delta0(a, bs, p, t, q, &lam.second)?)
}

/// Numeric spectral vector (q^{λ⁽¹⁾_i} p^{λ⁽²⁾_i} t^{n−i})_i.
pub fn bi_spectral(lam: &Bipartition, n: usize, t: C64, p: C64, q: C64) -> Vec<C64> {
    (1..=n)
        .map(|i| q.powi(lam.first.part(i) as i32) * p.powi(lam.second.part(i) as i32) * t.powi((n - i) as i32))
        .collect()
}

/// Elliptic Selberg product ∏_i Γ(t^i) ∏_{r<s} Γ(t^{i−1} t_r t_s).
pub fn elliptic_selberg_rhs(n: usize, t: C64, ts: &[C64; 6], p: C64, q: C64) -> CResult {
    let mut v = c(1.0);
    for i in 1..=n as i32 {
        v *= crate::coeffs::ell_gamma(t.powi(i), p, q)?;
        for r in 0..6 {
            for s in r + 1..6 {
                v *= crate::coeffs::ell_gamma(t.powi(i - 1) * ts[r] * ts[s], p, q)?;
            }
        }
    }
    Ok(v)
}

/// Right-hand side of the elliptic AFLT integral with n integration variables.
pub fn eaflt_rhs(n: usize, lam: &Bipartition, mu: &Bipartition, t: C64, ts: &[C64; 6], p: C64, q: C64) -> CResult {
    let [t1, t2, t3, t4, t5, t6] = *ts;
    let tn = |e: i32| t.powi(e);
    let n = n as i32;
    let spec = bi_spectral(lam, n as usize, t, p, q);
    let w = tn(n - 2) * t3 * t4 * t5 / t6;
    let top: Vec<C64> = spec.iter().map(|&s| tn(n - 2) * t1 * t3 * t4 * t5 * s).collect();
    let bottom: Vec<C64> = spec.iter().map(|&s| tn(n - 1) * t1 * t3 * t4 * t5 * s).collect();
    let lam_args: Vec<C64> = [t3, t4, t5, t6].iter().map(|&x| tn(n - 1) * t1 * x).chain([tn(n)]).collect();
    let den = bi_delta0(w, &bottom, t, p, q, mu)?;
    if den.norm() < 1e-300 {
        return Err(CoeffError::Pole);
    }
    Ok(elliptic_selberg_rhs(n as usize, t, ts, p, q)?
        * bi_delta0(tn(n - 1) * t1 / t2, &lam_args, t, p, q, lam)?
        * bi_delta0(w, &[tn(n - 1) * t3 * t4, tn(n - 1) * t3 * t5, tn(n - 1) * t4 * t5], t, p, q, mu)?
        * bi_delta0(w, &top, t, p, q, mu)?
        / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::gamma as gamma_fn;
    use crate::field::{bind, var};
    use crate::macdonald::jack_binomial_spec;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn selberg_examples() {
        let (a, b) = (c(1.3), c(0.7));
        let beta = gamma_fn(a).unwrap() * gamma_fn(b).unwrap() / gamma_fn(a + b).unwrap();
        assert!(close(selberg_rhs(1, a, b, c(0.4)).unwrap(), beta, 1e-13));
        assert!(close(selberg_rhs(2, c(1.0), c(1.0), c(1.0)).unwrap(), c(1.0 / 6.0), 1e-13));
        assert!(close(selberg_rhs(2, a, b, c(0.0)).unwrap(), beta * beta, 1e-13));
    }

    #[test]
    fn jack_z_matches_exact_product() {
        let (gv, zv) = (C64::new(0.8, 0.3), C64::new(-1.7, 0.4));
        let pt = bind(&[("gamma", gv), ("z", zv)]);
        for lam in crate::partitions::enumerate(4, 4) {
            let k = lam.len().max(1);
            let exact = jack_binomial_spec(&lam, &var("z"), k).eval_complex(&pt).unwrap();
            assert!(close(jack_z(&lam, zv, gv, k + 1), exact, 1e-12), "{lam}");
        }
    }

    #[test]
    fn aflt_reductions() {
        let (a, b, g) = (c(1.4), c(0.9), c(0.6));
        let e = Partition::empty();
        for k in 1..=3 {
            assert!(close(aflt_rhs(k, &e, &e, 0, a, b, g).unwrap(), selberg_rhs(k, a, b, g).unwrap(), 1e-12));
        }
        let want = gamma_fn(b).unwrap() * gamma_fn(a + 1.0).unwrap() / gamma_fn(a + b + 1.0).unwrap();
        assert!(close(aflt_rhs(1, &Partition::of(&[1]), &e, 0, a, b, g).unwrap(), want, 1e-12));
        let mu = Partition::of(&[1]);
        for k in 1..=3 {
            let lam = Partition::of(&[2]);
            let x = aflt_rhs(k, &lam, &mu, 1, a, b, g).unwrap();
            let y = aflt_rhs(k, &lam, &mu, 3, a, b, g).unwrap();
            assert!(close(x, y, 1e-12));
        }
        assert_eq!(aflt_rhs(1, &Partition::of(&[1, 1]), &e, 0, a, b, g).unwrap(), c(0.0));
    }

    #[test]
    fn gamma_product_poles() {
        let mut g = GammaProduct::new();
        g.num(c(1.5)).den(c(-2.0));
        assert_eq!(g.value().unwrap(), c(0.0));
        let mut g = GammaProduct::new();
        g.num(c(0.0));
        assert!(g.value().is_err());
    }

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::complexschur::{staircase, ComplexAn};

    fn p(parts: &[u32]) -> Partition {
        Partition::of(parts)
    }

    fn cx(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> C64 {
        C64::new(rng.gen_range(lo..hi), rng.gen_range(-0.5..0.5))
    }

    #[test]
    fn an_selberg_rank_one_is_ordered_selberg() {
        let (a, b, g) = (c(1.3), c(0.8), c(0.45));
        for k in 1..=3usize {
            let pr = AnParams::new(&[k], &[a], b, g).unwrap();
            let fact: f64 = (1..=k).map(|i| i as f64).product();
            assert!(close(an_selberg_rhs(&pr).unwrap() * fact, selberg_rhs(k, a, b, g).unwrap(), 1e-12));
        }
    }

    #[test]
    fn an_aflt_rank_one_matches_aflt() {
        let (a, b, g) = (c(1.6), c(1.1), c(0.7));
        let shapes = [p(&[]), p(&[1]), p(&[2, 1]), p(&[1, 1])];
        for k in 1..=3usize {
            let pr = AnParams::new(&[k], &[a], b, g).unwrap();
            for lam in &shapes {
                for mu in &shapes {
                    let want = aflt_rhs(k, lam, mu, mu.len() + 1, a, b, g).unwrap();
                    let norm = selberg_rhs(k, a, b, g).unwrap();
                    let got = an_aflt_rhs(&pr, lam, mu, lam.len().max(k.min(2)), mu.len() + 2).unwrap() * norm;
                    assert!(close(got, want, 1e-11) || (want.norm() < 1e-14 && got.norm() < 1e-14), "{k} {lam} {mu}");
                }
            }
        }
    }

    #[test]
    fn an_aflt_padding_independent() {
        let pr = AnParams::new(&[2, 3], &[c(1.2), c(0.9)], c(0.8), c(0.3)).unwrap();
        let (lam, mu) = (p(&[2, 1]), p(&[1]));
        let x = an_aflt_rhs(&pr, &lam, &mu, 2, 1).unwrap();
        for (l, m) in [(3, 1), (2, 3), (4, 2)] {
            assert!(close(an_aflt_rhs(&pr, &lam, &mu, l, m).unwrap(), x, 1e-12));
        }
        assert_eq!(an_aflt_rhs(&pr, &p(&[1, 1, 1]), &mu, 3, 1).unwrap(), c(0.0));
    }

    #[test]
    fn an_one_forms_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for ks in [vec![1], vec![2], vec![1, 1], vec![1, 2], vec![2, 3], vec![1, 1, 2], vec![1, 2, 3]] {
            for _ in 0..4 {
                let alphas: Vec<C64> = ks.iter().map(|_| cx(&mut rng, 2.5, 4.0)).collect();
                let pr = AnParams::new(&ks, &alphas, cx(&mut rng, 0.3, 2.0), c(1.0)).unwrap();
                let (x, y) = (an_one_rhs(&pr).unwrap(), an_one_rhs_alt(&pr).unwrap());
                assert!(close(x, y, 1e-11), "{ks:?}: {x} vs {y}");
            }
        }
    }

    fn complex_closed(pr: &AnParams, lams: &[Partition]) -> C64 {
        let k1 = pr.ks[0];
        let ca = ComplexAn {
            ks: pr.ks.clone(),
            z: staircase(&lams[0], k1),
            lams: lams[1..].to_vec(),
            alphas: pr.alphas.clone(),
            beta: pr.beta,
        };
        ca.closed().unwrap()
    }

    #[test]
    fn nplusone_is_ratio_of_complex_evaluations() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let small = [p(&[]), p(&[1]), p(&[2]), p(&[1, 1])];
        for ks in [vec![1], vec![2], vec![1, 2], vec![2, 2], vec![1, 2, 3]] {
            let n = ks.len();
            for round in 0..6 {
                let alphas: Vec<C64> = ks.iter().map(|_| cx(&mut rng, 2.5, 4.0)).collect();
                let pr = AnParams::new(&ks, &alphas, cx(&mut rng, 0.3, 2.0), c(1.0)).unwrap();
                let mut lams: Vec<Partition> = (0..=n).map(|_| small[rng.gen_range(0..small.len())].clone()).collect();
                if lams[0].len() > ks[0] {
                    lams[0] = p(&[round as u32 % 2 + 1]);
                }
                let mut ells: Vec<usize> =
                    (1..=n).map(|r| (ks[r - 1] - if r > 1 { ks[r - 2] } else { 0 }).max(lams[r - 1].len())).collect();
                ells.push(lams[n].len() + 1);
                let zero: Vec<Partition> = (0..=n).map(|_| Partition::empty()).collect();
                let ratio = complex_closed(&pr, &lams) / complex_closed(&pr, &zero);
                let rhs = nplusone_rhs(&pr, &lams, &ells).unwrap();
                assert!((ratio - rhs).norm() <= 1e-8 * rhs.norm().max(1.0), "{ks:?} {lams:?}: {ratio} vs {rhs}");
                assert!(close(complex_closed(&pr, &zero), an_one_rhs(&pr).unwrap(), 1e-10));
            }
        }
    }

    #[test]
    fn nplusone_padding_reduction_and_vanishing() {
        let pr = AnParams::new(&[1, 3], &[c(2.7), c(3.1)], c(0.6), c(1.0)).unwrap();
        let lams = vec![p(&[2]), p(&[1, 1]), p(&[2, 1])];
        let x = nplusone_rhs(&pr, &lams, &[1, 2, 2]).unwrap();
        assert!(close(nplusone_rhs(&pr, &lams, &[3, 4, 5]).unwrap(), x, 1e-12));
        let long = vec![p(&[1]), p(&[1, 1, 1]), p(&[])];
        assert_eq!(nplusone_rhs(&pr, &long, &[1, 3, 0]).unwrap(), c(0.0));
        let zero_first = AnParams::new(&[0, 1, 3], &[c(1.9), c(2.7), c(3.1)], c(0.6), c(1.0)).unwrap();
        let lams0 = vec![p(&[]), p(&[1]), p(&[1, 1]), p(&[2, 1])];
        let reduced = AnParams::new(&[1, 3], &[c(2.7), c(3.1)], c(0.6), c(1.0)).unwrap();
        let a = nplusone_rhs(&zero_first, &lams0, &[0, 1, 2, 2]).unwrap();
        let b = nplusone_rhs(&reduced, &lams0[1..], &[1, 2, 2]).unwrap();
        assert!(close(a, b, 1e-12), "{a} vs {b}");
    }

    #[test]
    fn gamma_one_is_dual_of_nplusone() {
        let pr = AnParams::new(&[1, 2], &[c(2.4), C64::new(3.3, 0.2)], C64::new(0.7, -0.1), c(1.0)).unwrap();
        for nu in [p(&[]), p(&[1]), p(&[2]), p(&[2, 1]), p(&[1, 1, 1])] {
            let a = vec![p(&[1]), p(&[1]), nu.clone()];
            let b = vec![p(&[1]), p(&[1]), nu.conjugate()];
            let x = nplusone_rhs(&pr, &a, &[1, 1, nu.len()]).unwrap();
            let y = gamma_one_rhs(&pr, &b, &[1, 1, nu.conjugate().len() + 1]).unwrap();
            let sign = if nu.size() % 2 == 0 { 1.0 } else { -1.0 };
            assert!(close(x, y * sign, 1e-11), "{nu}: {x} vs {y}");
        }
    }

    fn random_r_case(rng: &mut ChaCha8Rng, gamma: C64) -> (AnParams, Vec<Partition>, Vec<usize>) {
        let shapes = [p(&[]), p(&[1]), p(&[2]), p(&[1, 1]), p(&[2, 1])];
        let ks = [vec![1, 1], vec![1, 2], vec![2, 2], vec![2, 3], vec![1, 2, 2]][rng.gen_range(0..5)].clone();
        let n = ks.len();
        let alphas: Vec<C64> = ks.iter().map(|_| cx(rng, 1.5, 3.0)).collect();
        let pr = AnParams::new(&ks, &alphas, cx(rng, 0.5, 1.5), gamma).unwrap();
        let mut lams: Vec<Partition> = (0..=n).map(|_| shapes[rng.gen_range(0..shapes.len())].clone()).collect();
        while lams[0].len() >= ks[0] && !lams[0].is_empty() {
            lams[0] = p(&[lams[0].part(1)]);
            if ks[0] == 1 {
                lams[0] = Partition::empty();
            }
        }
        let ells: Vec<usize> = lams.iter().enumerate().map(|(r, l)| if r == 0 { l.len() } else { l.len() + rng.gen_range(0..2) }).collect();
        (pr, lams, ells)
    }

    #[test]
    fn r_function_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let g = cx(&mut rng, 0.3, 0.9);
            let (pr, lams, ells) = random_r_case(&mut rng, g);
            let x = r_function(&pr, &lams, &ells).unwrap();
            let y = r_recursion_rhs(&pr, &lams, &ells).unwrap();
            assert!(close(x, y, 1e-10), "{:?} {lams:?}: {x} vs {y}", pr.ks);
            let wider: Vec<usize> = ells.iter().enumerate().map(|(r, &e)| if r == 0 { e } else { e + 1 }).collect();
            assert!(close(r_function(&pr, &lams, &wider).unwrap(), x, 1e-11));
            let one = pr.with_gamma(c(1.0));
            let g1 = r_function(&one, &lams, &ells).unwrap();
            let want = gamma_one_rhs(&one, &lams, &ells).unwrap();
            assert!(close(g1, want, 1e-10) || (g1.norm() < 1e-13 && want.norm() < 1e-13), "{g1} vs {want}");
        }
    }

    #[test]
    fn r_function_reduces_to_an_aflt() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for ks in [vec![1, 1], vec![2, 3], vec![1, 2, 2]] {
            let n = ks.len();
            let alphas: Vec<C64> = ks.iter().map(|_| cx(&mut rng, 1.5, 3.0)).collect();
            let pr = AnParams::new(&ks, &alphas, cx(&mut rng, 0.5, 1.5), c(0.4)).unwrap();
            for (lam, mu) in [(p(&[1]), p(&[])), (p(&[2]), p(&[1])), (p(&[1, 1]), p(&[2, 1]))] {
                if lam.len() > ks[0] {
                    continue;
                }
                let mut lams = vec![lam.clone()];
                lams.extend((1..n).map(|_| Partition::empty()));
                lams.push(mu.clone());
                let mut ells = vec![lam.len()];
                ells.extend((1..n).map(|_| 0));
                ells.push(mu.len());
                let r = r_function(&pr, &lams, &ells).unwrap();
                let a = an_aflt_rhs(&pr, &lam, &mu, lam.len(), mu.len()).unwrap();
                assert!(close(r, a, 1e-11), "{ks:?} {lam} {mu}: {r} vs {a}");
            }
        }
    }

    #[test]
    fn companion_forms() {
        let g = c(0.35);
        let b1 = C64::new(0.8, 0.1);
        let pr = AltParams::new(&[1, 2, 2], &[c(1.4), c(1.1), c(1.7)], (b1, g + 1.0 - b1), g).unwrap();
        pr.check_conditions().unwrap();
        assert!(close(an_alt_norm(&pr, false).unwrap(), an_alt_norm(&pr, true).unwrap(), 1e-12));
        for ks in [vec![1, 1], vec![1, 2], vec![2, 3]] {
            let alphas = [c(1.6), c(1.3)];
            let alt = AltParams::new(&ks, &alphas, (c(1.0), g), g).unwrap();
            let an = AnParams::new(&ks, &alphas, g, g).unwrap();
            assert!(close(an_alt_norm(&alt, false).unwrap(), an_selberg_rhs(&an).unwrap(), 1e-12));
            for (lam, mu) in [(p(&[1]), p(&[])), (p(&[1]), p(&[1])), (p(&[2]), p(&[1]))] {
                let x = an_alt_rhs(&alt, &lam, &mu).unwrap();
                let y = an_aflt_rhs(&an, &lam, &mu, lam.len(), mu.len()).unwrap();
                assert!(close(x, y, 1e-10), "{ks:?} {lam} {mu}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn hypergeometric_basics() {
        assert_eq!(pfq(&[c(0.0), c(1.3)], &[c(0.4)], c(0.7)).unwrap(), c(1.0));
        assert!(pfq(&[c(0.5)], &[c(1.5)], c(0.2)).is_err());
        // Chu–Vandermonde: ₂F₁(−n, b; c; 1) = (c−b)_n/(c)_n.
        let (b, cc) = (C64::new(0.3, 0.2), c(1.7));
        let want = rising(cc - b, 3) / rising(cc, 3);
        assert!(close(pfq(&[c(-3.0), b], &[cc], c(1.0)).unwrap(), want, 1e-13));
        for u in 1..4 {
            let a = c(1.9);
            let f = pfq(&[c(-1.0), a, c(-(u as f64))], &[c(-(u as f64)), a], c(1.0)).unwrap();
            assert!(f.norm() < 1e-14);
        }
        let (x, y) = (var("x"), var("y"));
        let ex = pfq_exact(&[FieldElement::from_int(-2), x.clone()], &[y.clone()], &FieldElement::from_ratio(1, 3)).unwrap();
        let pt = bind(&[("x", c(0.4)), ("y", c(2.2))]);
        let num = pfq(&[c(-2.0), c(0.4)], &[c(2.2)], c(1.0 / 3.0)).unwrap();
        assert!(close(ex.eval_complex(&pt).unwrap(), num, 1e-13));
    }

    #[test]
    fn single_row_difference_as_phi21() {
        use crate::macdonald::{numeric_p, Family};
        let (qv, tv) = (C64::new(0.3, 0.1), C64::new(0.55, -0.2));
        let (x, y) = (C64::new(0.7, 0.2), C64::new(-0.4, 0.3));
        let params = bind(&[("q", qv), ("t", tv)]);
        for r in 0..=4u32 {
            let f = numeric_p(Family::Macdonald, &p(&[r]), &params).unwrap();
            let pk: Vec<C64> = (0..=r).map(|k| x.powi(k as i32) - y.powi(k as i32)).collect();
            let lhs = f.eval_power_sums(&pk);
            let rhs = x.powi(r as i32) * phi21(r, 1.0 / tv, qv.powi(1 - r as i32) / tv, qv, y * qv / x).unwrap();
            assert!(close(lhs, rhs, 1e-11), "r={r}: {lhs} vs {rhs}");
        }
        let (q, t) = (var("q"), var("t"));
        let z = var("z");
        let e = phi21_exact(2, &t.inv().unwrap(), &(q.pow(-1) * t.inv().unwrap()), &q, &z).unwrap();
        let pt = bind(&[("q", qv), ("t", tv), ("z", c(0.3))]);
        let n = phi21(2, 1.0 / tv, 1.0 / (qv * tv), qv, c(0.3)).unwrap();
        assert!(close(e.eval_complex(&pt).unwrap(), n, 1e-12));
    }

    #[test]
    fn guess_display_at_gamma_one_is_delta() {
        let alphas = [c(2.3), c(1.8)];
        for u2 in 0..3u32 {
            let v = guess_three_f_two(&alphas, c(1.4), c(1.0), &[1, u2], &p(&[1])).unwrap();
            if u2 > 0 {
                assert!(v.norm() < 1e-13);
            } else {
                assert!(v.norm() > 1e-3);
            }
        }
    }

    #[test]
    fn companion_gamma_one_limit() {
        let (a, b1) = ((c(1.7), c(2.2)), c(0.6));
        let b = (b1, c(2.0) - b1);
        for u in [[0, 0, 0], [1, 0, 2], [2, 1, 0], [1, 2, 1], [0, 3, 2]] {
            let x = companion_four_f_three(a, b, c(1.0), u).unwrap();
            let y = companion_gamma_one(a, b, u).unwrap();
            assert!(close(x, y, 1e-12), "{u:?}: {x} vs {y}");
        }
    }

    fn mac_parts() -> Vec<Partition> {
        vec![Partition::empty(), Partition::of(&[1]), Partition::of(&[2]), Partition::of(&[2, 1])]
    }

    #[test]
    fn macdonald_forms_are_padding_independent() {
        let (q, t) = (c(0.3), c(0.4));
        let (a, b) = (C64::new(0.7, 0.4), C64::new(0.35, -0.3));
        for n in [1, 2, 3] {
            for lam in mac_parts().iter().filter(|l| l.len() <= n) {
                for mu in mac_parts() {
                    let m = mu.len();
                    let x = mac_aflt_rhs(n, lam, &mu, m, a, b, q, t).unwrap();
                    let y = mac_aflt_rhs(n, lam, &mu, m + 2, a, b, q, t).unwrap();
                    assert!(close(x, y, 1e-12), "{lam} {mu}");
                    let x = mac_corollary_rhs(n, lam, &mu, m, a, b, q, t).unwrap();
                    let y = mac_corollary_rhs(n, lam, &mu, m + 1, a, b, q, t).unwrap();
                    assert!(close(x, y, 1e-12), "{lam} {mu}");
                }
            }
        }
    }

    #[test]
    fn macdonald_complement_is_independent_of_the_rectangle() {
        let (q, t) = (c(0.3), c(0.4));
        let (a, b) = (C64::new(0.7, 0.4), C64::new(0.35, -0.3));
        for n in [1, 2] {
            for lam in mac_parts().iter().filter(|l| l.len() <= n) {
                for mu in mac_parts() {
                    let m = mu.len();
                    let want = mac_complement_rhs(n, lam, &mu, m, a, b, q, t).unwrap();
                    for big_n in [lam.part(1), lam.part(1) + 1] {
                        let hat = lam.complement(n, big_n).unwrap();
                        let shifted = a * q.powi(-(big_n as i32));
                        let scale = (-a).powi((n as u32 * big_n) as i32) * q.powi(-((n as u32 * big_n * (big_n + 1) / 2) as i32));
                        let got = mac_aflt_rhs(n, &hat, &mu, m, shifted, b, q, t).unwrap() / scale;
                        assert!(close(got, want, 1e-10), "n={n} {lam} {mu} N={big_n}: {got} vs {want}");
                    }
                }
            }
        }
    }

    #[test]
    fn scalar_product_form_reduces_to_the_norm() {
        let (q, t) = (c(0.3), c(0.4));
        for n in [1, 2] {
            for lam in mac_parts().iter().filter(|l| l.len() <= n) {
                let norm = macdonald_norm(n, lam, q, t).unwrap();
                for a in [q, t] {
                    let v = mac_corollary_rhs(n, lam, lam, lam.len(), a, t, q, t).unwrap();
                    assert!(close(v, norm, 1e-10), "n={n} {lam} a={a}");
                }
            }
        }
    }

    #[test]
    fn macdonald_principal_specialisation_matches_symbolic() {
        let (q, t, u) = (C64::new(0.3, 0.1), c(0.4), C64::new(0.6, -0.2));
        let params = bind(&[("q", q), ("t", t)]);
        for lam in mac_parts() {
            let pl = crate::macdonald::numeric_p(crate::macdonald::Family::Macdonald, &lam, &params).unwrap();
            let pk: Vec<C64> = (0..=lam.size() as i32).map(|k| (1.0 - u.powi(k)) / (1.0 - t.powi(k))).collect();
            assert!(close(mac_principal(&lam, u, q, t), pl.eval_power_sums(&pk), 1e-12), "{lam}");
        }
    }

    fn elliptic_sample(seed: u64) -> (C64, [C64; 6], C64, C64) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut polar = |lo: f64, hi: f64| C64::from_polar(rng.gen_range(lo..hi), rng.gen_range(-3.0..3.0));
        let t = polar(0.3, 0.6);
        let ts = [polar(0.3, 0.6), polar(0.3, 0.6), polar(0.3, 0.6), polar(0.3, 0.6), polar(0.3, 0.6), polar(0.3, 0.6)];
        (t, ts, polar(0.05, 0.3), polar(0.05, 0.3))
    }

    #[test]
    fn elliptic_aflt_reductions_and_symmetry() {
        let zero = Bipartition::default();
        let one_row = |a: u32, b: u32| {
            let r = |m: u32| if m == 0 { Partition::empty() } else { Partition::of(&[m]) };
            Bipartition::new(r(a), r(b))
        };
        for seed in 0..4 {
            let (t, mut ts, p, q) = elliptic_sample(seed);
            for n in [1, 2] {
                let v = eaflt_rhs(n, &zero, &zero, t, &ts, p, q).unwrap();
                assert!(close(v, elliptic_selberg_rhs(n, t, &ts, p, q).unwrap(), 1e-12));
            }
            // Hua–Kadell case t₄t₅ = t, balancing through t₆.
            ts[4] = t / ts[3];
            ts[5] = p * q / (ts[..5].iter().product::<C64>());
            for (lam, mu) in [(one_row(1, 0), one_row(0, 0)), (one_row(1, 0), one_row(2, 0)), (one_row(0, 1), one_row(1, 1))] {
                let x = eaflt_rhs(1, &lam, &mu, t, &ts, p, q).unwrap();
                let swapped = [ts[2], ts[5], ts[0], ts[3], ts[4], ts[1]];
                let y = eaflt_rhs(1, &mu, &lam, t, &swapped, p, q).unwrap();
                assert!(close(x, y, 1e-10), "{lam} {mu}: {x} vs {y}");
            }
        }
    }
}
