//! Complex Schur functions S⁽ⁿ⁾(x; z) = det(x_i^{z_j})/Δ(x) on the slit
//! plane and the γ = 1 contour-integral evaluations built from them.
//!
//! Contour integrals through the origin are evaluated primarily by their
//! exact residue and recursion forms; sector quadrature is kept as an
//! independent smoke test.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::coeffs::{gamma, rgamma};
use crate::partitions::{subpartitions, Partition};
use crate::quadrature::{sector_integral_k, QuadError, SectorContour, SectorValue};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SchurError {
    #[error("point {0} is zero or on the branch cut")]
    OffDomain(C64),
    #[error("coincident points where distinct ones are required")]
    Coincident,
    #[error("argument lengths differ")]
    Length,
    #[error("condition violated: {0}")]
    Condition(String),
    #[error("pole in a Γ factor")]
    Pole,
    #[error(transparent)]
    Quad(#[from] QuadError),
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn zero() -> C64 {
    c(0.0)
}

fn sign(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn binom2(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn in_slit_plane(x: C64) -> bool {
    !(x.im == 0.0 && x.re <= 0.0)
}

/// Principal-branch power x^z = exp(z log x).
pub fn cpow(x: C64, z: C64) -> C64 {
    if z == zero() {
        return c(1.0);
    }
    (z * x.ln()).exp()
}

/// Distance from x to the cut (−∞, 0].
fn cut_distance(x: C64) -> f64 {
    if x.re >= 0.0 {
        x.norm()
    } else {
        x.im.abs()
    }
}

/// S⁽ⁿ⁾(x; z), with a confluent divided-difference evaluation when points
/// cluster.
pub fn complex_schur(x: &[C64], z: &[C64]) -> Result<C64, SchurError> {
    if x.len() != z.len() {
        return Err(SchurError::Length);
    }
    if let Some(&bad) = x.iter().find(|&&v| !in_slit_plane(v)) {
        return Err(SchurError::OffDomain(bad));
    }
    let n = x.len();
    if n == 0 {
        return Ok(c(1.0));
    }
    let scale = x.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut gap = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            gap = gap.min((x[i] - x[j]).norm());
        }
    }
    if gap > 1e-4 * scale {
        let m = DMatrix::from_fn(n, n, |i, j| cpow(x[i], z[j]));
        let mut vdm = c(1.0);
        for i in 0..n {
            for j in i + 1..n {
                vdm *= x[i] - x[j];
            }
        }
        return Ok(m.determinant() / vdm);
    }
    Ok(confluent(x, z))
}

/// det(f_j[x_1..x_i]) with f_j = x^{z_j}; rows are nested divided differences.
fn confluent(x: &[C64], z: &[C64]) -> C64 {
    let n = x.len();
    let mut order = vec![0usize];
    let mut rest: Vec<usize> = (1..n).collect();
    while !rest.is_empty() {
        let last = x[*order.last().unwrap()];
        let (pos, _) = rest
            .iter()
            .enumerate()
            .min_by(|a, b| (x[*a.1] - last).norm().total_cmp(&(x[*b.1] - last).norm()))
            .unwrap();
        order.push(rest.remove(pos));
    }
    let pts: Vec<C64> = order.iter().map(|&i| x[i]).collect();
    let m = DMatrix::from_fn(n, n, |i, j| divided_difference(&pts[..=i], z[j]));
    m.determinant() * sign(binom2(n))
}

fn divided_difference(pts: &[C64], z: C64) -> C64 {
    let m = pts.len();
    if m == 1 {
        return cpow(pts[0], z);
    }
    let centre = pts.iter().sum::<C64>() / m as f64;
    let spread = pts.iter().map(|p| (p - centre).norm()).fold(0.0, f64::max);
    if spread <= 0.25 * cut_distance(centre) {
        return taylor_divided_difference(pts, centre, z);
    }
    let hi = divided_difference(&pts[1..], z);
    let lo = divided_difference(&pts[..m - 1], z);
    (hi - lo) / (pts[m - 1] - pts[0])
}

/// f[x_1..x_m] = Σ_k f^{(k)}(c)/k! · h_{k−m+1}(x − c).
fn taylor_divided_difference(pts: &[C64], centre: C64, z: C64) -> C64 {
    let m = pts.len();
    let d: Vec<C64> = pts.iter().map(|p| p - centre).collect();
    let mut coeff = cpow(centre, z);
    let mut h = vec![c(1.0)];
    let mut sum = zero();
    let mut small = 0;
    for k in 0..600usize {
        if k + 1 >= m {
            let j = k + 1 - m;
            while h.len() <= j {
                h.push(complete_homogeneous(&d, h.len()));
            }
            let term = coeff * h[j];
            sum += term;
            if term.norm() <= 1e-18 * sum.norm() {
                small += 1;
                if small == 3 {
                    break;
                }
            } else {
                small = 0;
            }
        }
        coeff *= (z - k as f64) / ((k + 1) as f64 * centre);
    }
    sum
}

fn complete_homogeneous(d: &[C64], j: usize) -> C64 {
    let mut row = vec![zero(); j + 1];
    row[0] = c(1.0);
    for v in d {
        for e in 1..=j {
            row[e] = row[e] + v * row[e - 1];
        }
    }
    row[j]
}

/// S⁽ⁿ⁾([n]; z) = ∏_{i<j} (z_i − z_j)/(j − i).
pub fn complex_schur_ones(z: &[C64]) -> C64 {
    let mut v = c(1.0);
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            v *= (z[i] - z[j]) / (j - i) as f64;
        }
    }
    v
}

/// Staircase exponents (λ_1+n−1, …, λ_n) padded to n entries.
pub fn staircase(lam: &Partition, n: usize) -> Vec<C64> {
    lam.padded(n).iter().enumerate().map(|(i, &l)| c((l as usize + n - 1 - i) as f64)).collect()
}

/// All m-subsets of {0, …, n−1} in lexicographic order.
pub fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut cur = vec![];
    fn rec(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < m - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    rec(0, n, m, &mut cur, &mut out);
    out
}

fn complement(n: usize, set: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !set.contains(i)).collect()
}

fn cross_product(y: &[C64], inside: &[usize], outside: &[usize]) -> C64 {
    let mut v = c(1.0);
    for &i in inside {
        for &j in outside {
            v *= y[i] - y[j];
        }
    }
    v
}

fn pick(y: &[C64], idx: &[usize]) -> Vec<C64> {
    idx.iter().map(|&i| y[i]).collect()
}

fn check_distinct(y: &[C64]) -> Result<(), SchurError> {
    let scale = y.iter().map(|v| v.norm()).fold(1e-300, f64::max);
    for i in 0..y.len() {
        for j in i + 1..y.len() {
            if (y[i] - y[j]).norm() < 1e-12 * scale {
                return Err(SchurError::Coincident);
            }
        }
    }
    Ok(())
}

/// Laplace-type expansion of S⁽ⁿ⁾(x; z) over m-subsets of the points.
pub fn split_expansion(x: &[C64], z: &[C64], m: usize) -> Result<C64, SchurError> {
    let n = x.len();
    if z.len() != n || m > n {
        return Err(SchurError::Length);
    }
    check_distinct(x)?;
    let mut total = zero();
    for set in subsets(n, m) {
        let rest = complement(n, &set);
        let a = complex_schur(&pick(x, &set), &z[..m])?;
        let b = complex_schur(&pick(x, &rest), &z[m..])?;
        total += a * b / cross_product(x, &set, &rest);
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Schur functions of plethystic alphabets
// ---------------------------------------------------------------------------

/// Power sums p_1..p_d of the alphabet Σ plus − Σ minus + w.
pub fn power_sums(plus: &[C64], minus: &[C64], w: C64, d: usize) -> Vec<C64> {
    (1..=d)
        .map(|k| {
            let k = k as u32;
            plus.iter().map(|v| v.powu(k)).sum::<C64>() - minus.iter().map(|v| v.powu(k)).sum::<C64>() + w
        })
        .collect()
}

/// h_0..h_d from power sums p_1..p_d by Newton's identities.
fn h_from_p(p: &[C64], d: usize) -> Vec<C64> {
    let mut h = vec![c(1.0)];
    for m in 1..=d {
        let s: C64 = (1..=m).map(|r| p[r - 1] * h[m - r]).sum();
        h.push(s / m as f64);
    }
    h
}

/// s_{λ/μ} by Jacobi–Trudi from the power sums of the alphabet.
pub fn skew_schur_from_p(lam: &Partition, mu: &Partition, p: &[C64]) -> C64 {
    if !lam.contains(mu) {
        return zero();
    }
    let l = lam.len();
    if l == 0 {
        return c(1.0);
    }
    let d = lam.part(1) as usize + l - 1;
    assert!(p.len() >= d, "not enough power sums");
    let h = h_from_p(p, d);
    let m = DMatrix::from_fn(l, l, |i, j| {
        let e = lam.part(i + 1) as i64 - mu.part(j + 1) as i64 - i as i64 + j as i64;
        if e < 0 {
            zero()
        } else {
            h[e as usize]
        }
    });
    m.determinant()
}

/// s_λ[w] for a scalar w, by the content product.
pub fn schur_scalar(lam: &Partition, w: C64) -> C64 {
    let mut v = c(1.0);
    for (i, j) in lam.cells() {
        let (a, l, _, _) = lam.arm_leg(i, j);
        v *= (w + j as f64 - i as f64) / (a + l + 1) as f64;
    }
    v
}

/// s_{λ/μ}[w] for a scalar w.
pub fn skew_schur_scalar(lam: &Partition, mu: &Partition, w: C64) -> C64 {
    let d = lam.size().max(1) as usize;
    skew_schur_from_p(lam, mu, &vec![w; d])
}

// ---------------------------------------------------------------------------
// The sector-contour integral of a complex Schur function
// ---------------------------------------------------------------------------

/// Exact residue evaluation of
/// (1/k!(2πi)^k) ∮ S⁽ᵏ⁾(x;z) s_λ[y−x] Δ²(x) ∏(x_i−y_j)^{−1} dx.
pub fn thm_schur_residue_oracle(k: usize, y: &[C64], z: &[C64], lam: &Partition) -> Result<C64, SchurError> {
    if z.len() != k {
        return Err(SchurError::Length);
    }
    let l = y.len();
    if k > l {
        return Ok(zero());
    }
    check_distinct(y)?;
    let mut total = zero();
    for set in subsets(l, k) {
        let rest = complement(l, &set);
        let s = complex_schur(&pick(y, &set), z)?;
        let sl = crate::symfunc::schur_eval(lam, &pick(y, &rest));
        total += s * sl / cross_product(y, &set, &rest);
    }
    Ok(total * sign(binom2(k)))
}

/// Closed form of the same integral: ±S⁽ˡ⁾(y; (z, λ + staircase)) or zero.
pub fn thm_schur_closed(k: usize, y: &[C64], z: &[C64], lam: &Partition) -> Result<C64, SchurError> {
    let l = y.len();
    if k > l || lam.len() > l - k {
        return Ok(zero());
    }
    let mut exps = z.to_vec();
    exps.extend(staircase(lam, l - k));
    Ok(complex_schur(y, &exps)? * sign(binom2(k)))
}

/// Residue oracle at y = (1, …, 1). The points are spread over h·(roots of
/// unity) around 1, so the error of the symmetric function is a series in
/// u = h^ℓ, which is removed by extrapolating u → 0 from three step sizes.
pub fn thm_schur_residue_at_ones(k: usize, l: usize, z: &[C64], lam: &Partition) -> Result<C64, SchurError> {
    let at = |h: f64| {
        let y: Vec<C64> =
            (0..l).map(|j| 1.0 + C64::from_polar(h, 2.0 * std::f64::consts::PI * (j as f64 + 0.3) / l as f64)).collect();
        thm_schur_residue_oracle(k, &y, z, lam)
    };
    let hs: [f64; 3] = [0.1, 0.05, 0.025];
    let us: Vec<f64> = hs.iter().map(|h| h.powi(l.max(1) as i32)).collect();
    let mut v = vec![at(hs[0])?, at(hs[1])?, at(hs[2])?];
    for level in 1..3 {
        for i in (level..3).rev() {
            v[i] = (v[i] * us[i - level] - v[i - 1] * us[i]) / (us[i - level] - us[i]);
        }
    }
    Ok(v[2])
}

/// Direct sector-contour quadrature of the same integral (smoke test).
pub fn thm_schur_contour(
    k: usize,
    y: &[C64],
    z: &[C64],
    lam: &Partition,
    contour: &SectorContour,
) -> Result<SectorValue, SchurError> {
    if y.iter().any(|v| v.norm() >= contour.radius || v.arg().abs() >= contour.theta) {
        return Err(SchurError::Condition("points must lie inside the sector".into()));
    }
    let d = lam.size().max(1) as usize;
    let f = |x: &[C64]| {
        let s = complex_schur(x, z).unwrap_or(zero());
        let sl = skew_schur_from_p(lam, &Partition::empty(), &power_sums(y, x, zero(), d));
        let mut v = s * sl;
        for i in 0..k {
            for j in i + 1..k {
                v *= (x[i] - x[j]).powu(2);
            }
            for yj in y {
                v /= x[i] - yj;
            }
        }
        v
    };
    let mut v = sector_integral_k(k, &f, contour)?;
    v.value /= factorial(k);
    v.eps0_sensitivity /= factorial(k);
    Ok(v)
}

// ---------------------------------------------------------------------------
// Beta-type integrals
// ---------------------------------------------------------------------------

/// Γ(α)/(Γ(1−β)Γ(α+β)), the value of (1/2πi)∮ x^{α−1}(x−1)^{β−1} dx.
pub fn beta_closed(alpha: C64, beta: C64) -> Result<C64, SchurError> {
    Ok(gamma(alpha).map_err(|_| SchurError::Pole)? * rgamma(1.0 - beta) * rgamma(alpha + beta))
}

pub fn beta_contour(alpha: C64, beta: C64, contour: &SectorContour) -> Result<SectorValue, SchurError> {
    if alpha.re <= 0.0 {
        return Err(SchurError::Condition(format!("Re(α) = {} must be positive", alpha.re)));
    }
    if contour.radius <= 1.0 {
        return Err(SchurError::Condition("the contour must enclose 1".into()));
    }
    let f = |x: &[C64]| cpow(x[0], alpha - 1.0) * cpow(x[0] - 1.0, beta - 1.0);
    Ok(sector_integral_k(1, &f, contour)?)
}

fn check_z(z: &[C64]) -> Result<(), SchurError> {
    if let Some(v) = z.iter().find(|v| v.re <= -1.0) {
        return Err(SchurError::Condition(format!("Re(z) = {} must exceed −1", v.re)));
    }
    Ok(())
}

/// Expansion of
/// (1/(2πi)^k) ∮ S⁽ᵏ⁾(x;z) s_λ[1−β−x] Δ²(x) ∏(x_i−1)^{β−1} dx
/// as a finite sum of determinants of beta integrals, after dualising λ.
pub fn beta_schur_expansion(z: &[C64], beta: C64, lam: &Partition) -> Result<C64, SchurError> {
    check_z(z)?;
    let k = z.len();
    let dual = lam.conjugate();
    let mut total = zero();
    for mu in subpartitions(&dual) {
        if mu.len() > k {
            continue;
        }
        let skew = skew_schur_scalar(&dual, &mu, beta - 1.0);
        if skew == zero() {
            continue;
        }
        let mut entries = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                let a = z[i] + (mu.part(j + 1) as usize + k - 1 - j) as f64 + 1.0;
                entries.push(beta_closed(a, beta)?);
            }
        }
        let det = if k == 0 { c(1.0) } else { DMatrix::from_row_slice(k, k, &entries).determinant() };
        total += skew * det;
    }
    Ok(total * factorial(k) * sign(lam.size() as usize))
}

/// The closed product form of the same integral.
pub fn beta_schur_rhs(z: &[C64], beta: C64, lam: &Partition) -> Result<C64, SchurError> {
    check_z(z)?;
    let k = z.len();
    let kf = k as f64;
    let mut v = complex_schur_ones(z) * schur_scalar(lam, 1.0 - beta - kf) * sign(binom2(k));
    for (i, zi) in z.iter().enumerate() {
        let i1 = (i + 1) as f64;
        v *= factorial(i + 1) * gamma(zi + 1.0).map_err(|_| SchurError::Pole)? * rgamma(2.0 - i1 - beta) * rgamma(zi + beta + kf);
        for (j, &lj) in lam.parts().iter().enumerate() {
            let j1 = (j + 1) as f64;
            v *= (zi - lj as f64 + beta + kf + j1 - 1.0) / (zi + beta + kf + j1 - 1.0);
        }
    }
    Ok(v)
}

/// Direct k-fold sector quadrature of the same integral.
pub fn beta_schur_contour(z: &[C64], beta: C64, lam: &Partition, contour: &SectorContour) -> Result<SectorValue, SchurError> {
    check_z(z)?;
    let k = z.len();
    let d = lam.size().max(1) as usize;
    let f = |x: &[C64]| {
        let s = complex_schur(x, z).unwrap_or(zero());
        let sl = skew_schur_from_p(lam, &Partition::empty(), &power_sums(&[], x, 1.0 - beta, d));
        let mut v = s * sl;
        for i in 0..k {
            for j in i + 1..k {
                v *= (x[i] - x[j]).powu(2);
            }
            v *= cpow(x[i] - 1.0, beta - 1.0);
        }
        v
    };
    Ok(sector_integral_k(k, &f, contour)?)
}

/// The evaluation paths of a beta-Schur integral.
#[derive(Clone, Debug)]
pub struct BetaSchurPaths {
    pub expansion: C64,
    pub closed: C64,
    pub contour: Option<SectorValue>,
}

impl BetaSchurPaths {
    /// Largest relative difference between the exact paths.
    pub fn exact_rel_diff(&self) -> f64 {
        rel_diff(self.expansion, self.closed)
    }
}

pub fn rel_diff(a: C64, b: C64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

pub fn beta_schur_check(
    z: &[C64],
    beta: C64,
    lam: &Partition,
    contour: Option<&SectorContour>,
) -> Result<BetaSchurPaths, SchurError> {
    Ok(BetaSchurPaths {
        expansion: beta_schur_expansion(z, beta, lam)?,
        closed: beta_schur_rhs(z, beta, lam)?,
        contour: match contour {
            Some(c) => Some(beta_schur_contour(z, beta, lam, c)?),
            None => None,
        },
    })
}

// ---------------------------------------------------------------------------
// The complex Aₙ integral with a leading complex Schur function
// ---------------------------------------------------------------------------

/// Data of the integral
/// I(S⁽ᵏ¹⁾(t⁽¹⁾; z) ∏_{r≥2} s_{λ⁽ʳ⁾}[t⁽ʳ⁾ − t⁽ʳ⁻¹⁾]; α, β) with t⁽ⁿ⁺¹⁾ = 1−β.
#[derive(Clone, Debug)]
pub struct ComplexAn {
    pub ks: Vec<usize>,
    pub z: Vec<C64>,
    /// λ⁽²⁾, …, λ⁽ⁿ⁺¹⁾.
    pub lams: Vec<Partition>,
    pub alphas: Vec<C64>,
    pub beta: C64,
}

impl ComplexAn {
    pub fn n(&self) -> usize {
        self.ks.len()
    }

    fn validate(&self) -> Result<(), SchurError> {
        let n = self.n();
        if n == 0 || self.alphas.len() != n || self.lams.len() != n || self.z.len() != self.ks[0] {
            return Err(SchurError::Length);
        }
        Ok(())
    }

    /// The convergence conditions on z and the λ⁽ʳ⁾.
    pub fn check_conditions(&self) -> Result<(), SchurError> {
        self.validate()?;
        let n = self.n();
        for s in 1..=n {
            let a: C64 = self.alphas[..s].iter().sum();
            for zi in &self.z {
                if (zi + a).re <= (s - 1) as f64 {
                    return Err(SchurError::Condition(format!("Re(z + α_1 + … + α_{s}) ≤ {}", s - 1)));
                }
            }
        }
        for r in 2..=n {
            let d = self.ks[r - 1] as i64 - self.ks[r - 2] as i64;
            if d <= 0 {
                continue;
            }
            let part = self.lams[r - 2].part(d as usize) as f64;
            for s in r..=n {
                let a: C64 = self.alphas[r - 1..s].iter().sum();
                if (a + part).re <= (s - r) as f64 {
                    return Err(SchurError::Condition(format!("condition at r={r}, s={s}")));
                }
            }
        }
        Ok(())
    }

    /// Left-hand side by integrating out t⁽¹⁾, t⁽²⁾, … one alphabet at a time
    /// with the residue evaluation, ending in the beta-Schur expansion.
    pub fn recursive(&self) -> Result<C64, SchurError> {
        self.validate()?;
        let shifted: Vec<C64> = self.z.iter().map(|v| v + self.alphas[0] - 1.0).collect();
        if self.n() == 1 {
            return beta_schur_expansion(&shifted, self.beta, &self.lams[0]);
        }
        let (k1, k2) = (self.ks[0], self.ks[1]);
        let lam2 = &self.lams[0];
        if k2 < k1 || lam2.len() > k2 - k1 {
            return Ok(zero());
        }
        let mut z2 = shifted;
        z2.extend(staircase(lam2, k2 - k1));
        let inner = ComplexAn {
            ks: self.ks[1..].to_vec(),
            z: z2,
            lams: self.lams[1..].to_vec(),
            alphas: self.alphas[1..].to_vec(),
            beta: self.beta,
        };
        Ok(inner.recursive()? * factorial(k1) * sign(binom2(k1)))
    }

    /// k_r with k_0 = 0 and k_{n+1} = 1 − β.
    fn k(&self, r: usize) -> C64 {
        let n = self.n();
        if r == 0 {
            zero()
        } else if r == n + 1 {
            1.0 - self.beta
        } else {
            c(self.ks[r - 1] as f64)
        }
    }

    /// A_r = α_r + … + α_n + k_r − k_{r−1} + r.
    pub fn a(&self, r: usize) -> C64 {
        let tail: C64 = self.alphas[r - 1..].iter().sum();
        tail + self.k(r) - self.k(r - 1) + r as f64
    }

    /// λ⁽ʳ⁾_i, with λ⁽¹⁾_i := z_i − k_1 + i.
    fn part(&self, r: usize, i: usize) -> C64 {
        if r == 1 {
            self.z[i - 1] - self.ks[0] as f64 + i as f64
        } else {
            c(self.lams[r - 2].part(i) as f64)
        }
    }

    /// The closed product form.
    pub fn closed(&self) -> Result<C64, SchurError> {
        self.validate()?;
        let n = self.n();
        let kint = |r: usize| -> i64 {
            if r == 0 {
                0
            } else {
                self.ks[r - 1] as i64
            }
        };
        let rows = |r: usize| (kint(r) - kint(r - 1)).max(0) as usize;
        let mut v = complex_schur_ones(&self.z);
        for r in 1..=n {
            v *= sign(binom2(self.ks[r - 1])) * schur_scalar(&self.lams[r - 1], self.k(r + 1) - self.k(r));
            for i in 1..=self.ks[r - 1] {
                v *= factorial(i) * rgamma(self.k(r + 1) - i as f64 + 1.0);
            }
        }
        for r in 1..=n {
            for s in r + 1..=n {
                let ars = self.a(r) - self.a(s);
                for i in 1..=rows(r) {
                    for j in 1..=rows(s) {
                        v *= self.part(r, i) - self.part(s, j) + ars + (j as f64 - i as f64);
                    }
                }
            }
        }
        let last = &self.lams[n - 1];
        for r in 1..=n {
            let ar = self.a(r);
            let arn = ar - self.a(n + 1);
            for i in 1..=rows(r) {
                let li = self.part(r, i);
                let fi = i as f64;
                v *= gamma(li + ar - fi - n as f64).map_err(|_| SchurError::Pole)? * rgamma(li + arn - fi + 1.0);
                for (j, &lj) in last.parts().iter().enumerate() {
                    let fj = (j + 1) as f64;
                    v *= (li - lj as f64 + arn + fj - fi) / (li + arn + fj - fi);
                }
            }
        }
        Ok(v)
    }
}
