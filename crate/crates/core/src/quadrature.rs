//! Numerical left-hand sides: Gauss–Jacobi rules, simplex and chain
//! domains, sector contours around the origin, and torus integrals.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::coeffs::gamma;
use crate::macdonald::{numeric_p, Family};
use crate::partitions::Partition;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadError {
    #[error("invalid quadrature parameters: {0}")]
    Invalid(String),
    #[error("refinements disagree: {0:e} relative")]
    NotConverged(f64),
    #[error("integrand evaluation failed: {0}")]
    Integrand(String),
}

/// Nodes and weights of a one-dimensional rule.
#[derive(Clone, Debug)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss–Jacobi rule for ∫_{−1}^{1} (1−s)^a (1+s)^b f(s) ds via Golub–Welsch.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<Rule, QuadError> {
    if n == 0 || a <= -1.0 || b <= -1.0 {
        return Err(QuadError::Invalid(format!("n={n}, a={a}, b={b}")));
    }
    let ab = a + b;
    let mut j = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let k = i as f64;
        let s = 2.0 * k + ab;
        j[(i, i)] = if i == 0 { (b - a) / (ab + 2.0) } else { (b * b - a * a) / (s * (s + 2.0)) };
        if i + 1 < n {
            let k = k + 1.0;
            let s = 2.0 * k + ab;
            let off = if i == 0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))
            } else {
                4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            j[(i, i + 1)] = off.sqrt();
            j[(i + 1, i)] = off.sqrt();
        }
    }
    let mu0 = 2f64.powf(ab + 1.0) * g(a + 1.0) * g(b + 1.0) / g(ab + 2.0);
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], mu0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    for p in &mut pairs {
        p.1 *= mu0 / total;
    }
    Ok(Rule { nodes: pairs.iter().map(|p| p.0).collect(), weights: pairs.iter().map(|p| p.1).collect() })
}

fn g(x: f64) -> f64 {
    gamma(C64::new(x, 0.0)).expect("positive argument").re
}

pub fn gauss_legendre(n: usize) -> Rule {
    gauss_jacobi(n, 0.0, 0.0).expect("valid Legendre order")
}

type RuleKey = (usize, u64, u64);

/// Rule for ∫_0^1 x^p (1−x)^q f(x) dx, cached by (n, p, q).
pub fn jacobi01(n: usize, p: f64, q: f64) -> Result<Arc<Rule>, QuadError> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<Rule>>>> = OnceLock::new();
    let key = (n, p.to_bits(), q.to_bits());
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.lock().unwrap().get(&key) {
        return Ok(r.clone());
    }
    let r = gauss_jacobi(n, q, p)?;
    let scale = 0.5f64.powf(p + q + 1.0);
    let rule = Arc::new(Rule {
        nodes: r.nodes.iter().map(|s| 0.5 * (1.0 + s)).collect(),
        weights: r.weights.iter().map(|w| w * scale).collect(),
    });
    cache.lock().unwrap().insert(key, rule.clone());
    Ok(rule)
}

const GRADING_LEVELS: usize = 12;

/// Composite rule for ∫_0^1 x^p (1−x)^q f(x) dx on panels graded
/// geometrically towards x = 1, with Jacobi weights on the two end panels.
pub fn graded01(n: usize, p: f64, q: f64, levels: usize) -> Result<(Vec<f64>, Vec<f64>), QuadError> {
    let mut edges = vec![0.0];
    for j in 1..=levels {
        edges.push(1.0 - 0.5f64.powi(j as i32));
    }
    edges.push(1.0);
    let (mut nodes, mut weights) = (Vec::new(), Vec::new());
    let last = edges.len() - 2;
    for j in 0..=last {
        let (lo, hi) = (edges[j], edges[j + 1]);
        let h = hi - lo;
        // Jacobi weight in the local variable s ∈ (0,1), x = lo + h s.
        let (lp, lq) = (if j == 0 { p } else { 0.0 }, if j == last { q } else { 0.0 });
        let r = jacobi01(n, lp, lq)?;
        let scale = h.powf(1.0 + lp + lq);
        for (s, w) in r.nodes.iter().zip(&r.weights) {
            let x = lo + h * s;
            let mut extra = 1.0;
            if j != 0 {
                extra *= x.powf(p);
            }
            if j != last {
                extra *= (1.0 - x).powf(q);
            }
            nodes.push(x);
            weights.push(w * scale * extra);
        }
    }
    Ok((nodes, weights))
}

/// Tensor-product Gauss rule on the cube (0,1)^d for a smooth integrand.
pub fn cube(d: usize, n: usize, f: &(dyn Fn(&[f64]) -> C64 + Sync)) -> C64 {
    let r = gauss_legendre(n);
    let nodes: Vec<f64> = r.nodes.iter().map(|s| 0.5 * (1.0 + s)).collect();
    let weights: Vec<f64> = r.weights.iter().map(|w| 0.5 * w).collect();
    tensor(&vec![(nodes, weights); d], f)
}

/// Σ over the tensor grid of per-axis (nodes, weights). Partial sums are
/// added in index order, so the result does not depend on the thread count.
pub fn tensor(axes: &[(Vec<f64>, Vec<f64>)], f: &(dyn Fn(&[f64]) -> C64 + Sync)) -> C64 {
    let d = axes.len();
    if d == 0 {
        return f(&[]);
    }
    let (n0, w0) = &axes[0];
    (0..n0.len())
        .into_par_iter()
        .map(|i0| {
            let mut idx = vec![0usize; d];
            idx[0] = i0;
            let mut x = vec![0.0; d];
            let mut acc = C64::new(0.0, 0.0);
            loop {
                let mut w = w0[i0];
                x[0] = n0[i0];
                for a in 1..d {
                    x[a] = axes[a].0[idx[a]];
                    w *= axes[a].1[idx[a]];
                }
                acc += f(&x) * w;
                let mut a = d - 1;
                loop {
                    if a == 0 {
                        return acc;
                    }
                    idx[a] += 1;
                    if idx[a] < axes[a].0.len() {
                        break;
                    }
                    idx[a] = 0;
                    a -= 1;
                }
            }
        })
        .collect::<Vec<C64>>()
        .into_iter()
        .sum()
}

/// Border of the sector |x| ≤ r, |arg x| ≤ θ, run counterclockwise, with
/// the radial segments cut off at ε₀.
#[derive(Clone, Copy, Debug)]
pub struct SectorContour {
    pub theta: f64,
    pub radius: f64,
    /// Gauss–Legendre nodes per radial panel and per arc panel.
    pub nodes: usize,
    pub arc_panels: usize,
    pub eps0: f64,
}

impl Default for SectorContour {
    fn default() -> Self {
        SectorContour { theta: 2.0, radius: 2.0, nodes: 20, arc_panels: 12, eps0: 1e-14 }
    }
}

/// Discretised contour: points x, weights w with ∮ f dx ≈ Σ w f(x).
/// `tail` flags the points on radial panels below 10³·ε₀.
#[derive(Clone, Debug)]
pub struct ContourNodes {
    pub points: Vec<C64>,
    pub weights: Vec<C64>,
    pub tail: Vec<bool>,
}

impl SectorContour {
    pub fn validate(&self) -> Result<(), QuadError> {
        if !(self.theta > 0.0 && self.theta < PI && self.radius > 0.0 && self.eps0 > 0.0 && self.eps0 < self.radius)
            || self.nodes < 2
            || self.arc_panels == 0
        {
            return Err(QuadError::Invalid(format!("{self:?}")));
        }
        Ok(())
    }

    /// Radial panels are dyadic towards the origin, which resolves the
    /// algebraic singularity there.
    pub fn discretise(&self) -> Result<ContourNodes, QuadError> {
        self.validate()?;
        let gl = gauss_legendre(self.nodes);
        let mut out = ContourNodes { points: vec![], weights: vec![], tail: vec![] };
        let mut edges = vec![self.radius];
        while *edges.last().unwrap() > self.eps0 {
            let next = (edges.last().unwrap() * 0.5).max(self.eps0);
            edges.push(next);
        }
        for (dir, sign) in [(C64::from_polar(1.0, -self.theta), 1.0), (C64::from_polar(1.0, self.theta), -1.0)] {
            for w in edges.windows(2) {
                let (hi, lo) = (w[0], w[1]);
                let tail = hi <= 1e3 * self.eps0;
                for (s, wt) in gl.nodes.iter().zip(&gl.weights) {
                    let rho = lo + 0.5 * (hi - lo) * (1.0 + s);
                    out.points.push(dir * rho);
                    out.weights.push(dir * (sign * 0.5 * (hi - lo) * wt));
                    out.tail.push(tail);
                }
            }
        }
        let h = 2.0 * self.theta / self.arc_panels as f64;
        for p in 0..self.arc_panels {
            let a = -self.theta + h * p as f64;
            for (s, wt) in gl.nodes.iter().zip(&gl.weights) {
                let phi = a + 0.5 * h * (1.0 + s);
                let x = C64::from_polar(self.radius, phi);
                out.points.push(x);
                out.weights.push(C64::i() * x * (0.5 * h * wt));
                out.tail.push(false);
            }
        }
        Ok(out)
    }
}

/// Value of a contour integral with the contribution of the innermost
/// panels, which measures sensitivity to the cutoff ε₀.
#[derive(Clone, Copy, Debug)]
pub struct SectorValue {
    pub value: C64,
    pub eps0_sensitivity: f64,
}

/// (1/2πi) ∮_{C_{θ,r}} f(x) dx.
pub fn sector_integral(f: &(dyn Fn(C64) -> C64 + Sync), contour: &SectorContour) -> Result<SectorValue, QuadError> {
    let nodes = contour.discretise()?;
    let scale = C64::new(0.0, 2.0 * PI).inv();
    let (value, tail) = (0..nodes.points.len())
        .into_par_iter()
        .map(|i| {
            let v = f(nodes.points[i]) * nodes.weights[i];
            (v, if nodes.tail[i] { v } else { C64::new(0.0, 0.0) })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((C64::new(0.0, 0.0), C64::new(0.0, 0.0)), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(SectorValue { value: value * scale, eps0_sensitivity: (tail * scale).norm() })
}

/// (1/2πi)^k ∮…∮ f(x₁,…,x_k) dx₁⋯dx_k over k copies of the same sector.
pub fn sector_integral_k(
    k: usize,
    f: &(dyn Fn(&[C64]) -> C64 + Sync),
    contour: &SectorContour,
) -> Result<SectorValue, QuadError> {
    let nodes = contour.discretise()?;
    let m = nodes.points.len();
    let scale = C64::new(0.0, 2.0 * PI).inv().powu(k as u32);
    if k == 0 {
        return Ok(SectorValue { value: f(&[]), eps0_sensitivity: 0.0 });
    }
    let (value, tail) = (0..m)
        .into_par_iter()
        .map(|i0| {
            let mut idx = vec![0usize; k];
            idx[0] = i0;
            let mut x = vec![C64::new(0.0, 0.0); k];
            let mut acc = C64::new(0.0, 0.0);
            let mut tail = C64::new(0.0, 0.0);
            loop {
                let mut w = C64::new(1.0, 0.0);
                let mut is_tail = false;
                for a in 0..k {
                    x[a] = nodes.points[idx[a]];
                    w *= nodes.weights[idx[a]];
                    is_tail |= nodes.tail[idx[a]];
                }
                let v = f(&x) * w;
                acc += v;
                if is_tail {
                    tail += v;
                }
                let mut a = k - 1;
                loop {
                    if a == 0 {
                        return (acc, tail);
                    }
                    idx[a] += 1;
                    if idx[a] < m {
                        break;
                    }
                    idx[a] = 0;
                    a -= 1;
                }
            }
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((C64::new(0.0, 0.0), C64::new(0.0, 0.0)), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(SectorValue { value: value * scale, eps0_sensitivity: (tail * scale).norm() })
}

/// ∮ f(z) ∏ dz_i/(2πi z_i) over the torus |z_i| = ρ by the trapezoid rule.
pub fn torus_integral(n: usize, rho: f64, points: usize, f: &(dyn Fn(&[C64]) -> C64 + Sync)) -> Result<C64, QuadError> {
    if points < 2 || rho <= 0.0 {
        return Err(QuadError::Invalid(format!("points={points}, rho={rho}")));
    }
    let circle: Vec<C64> = (0..points).map(|j| C64::from_polar(rho, 2.0 * PI * (j as f64 + 0.5) / points as f64)).collect();
    let w = 1.0 / points as f64;
    if n == 0 {
        return Ok(f(&[]));
    }
    let total: C64 = (0..points)
        .into_par_iter()
        .map(|i0| {
            let mut idx = vec![0usize; n];
            idx[0] = i0;
            let mut z = vec![C64::new(0.0, 0.0); n];
            let mut acc = C64::new(0.0, 0.0);
            loop {
                for a in 0..n {
                    z[a] = circle[idx[a]];
                }
                acc += f(&z);
                let mut a = n - 1;
                loop {
                    if a == 0 {
                        return acc;
                    }
                    idx[a] += 1;
                    if idx[a] < points {
                        break;
                    }
                    idx[a] = 0;
                    a -= 1;
                }
            }
        })
        .collect::<Vec<C64>>()
        .into_iter()
        .sum();
    Ok(total * w.powi(n as i32))
}

/// ∫ over 0 < v₁ < … < v_K < 1 of ∏ v_i^{a_i} (1−v_i)^{b_i} ∏_{i<j} (v_j − v_i)^{e_ij} f(v).
///
/// The substitution v_i = u_i u_{i+1} ⋯ u_K maps the simplex onto the unit
/// cube; the powers of u_l and the factors (1 − u_l) coming from adjacent
/// pairs and from the last variable become Gauss–Jacobi weights.
#[derive(Clone, Debug)]
pub struct OrderedSimplex {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub e: Vec<Vec<f64>>,
}

impl OrderedSimplex {
    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// Per-axis Jacobi exponents (p_l, q_l) for ∫ u^p (1−u)^q.
    pub fn axis_exponents(&self) -> Vec<(f64, f64)> {
        let k = self.dim();
        (0..k)
            .map(|l| {
                let mut p = l as f64;
                for j in 0..=l {
                    p += self.a[j];
                    for i in 0..j {
                        p += self.e[i][j];
                    }
                }
                let q = if l + 1 < k { self.e[l][l + 1] } else { self.b[l] };
                (p, q)
            })
            .collect()
    }

    /// True when a factor not absorbed by the axis weights is singular at a
    /// corner u_i = … = u_j = 1 of the cube.
    pub fn has_corner_singularity(&self) -> bool {
        let k = self.dim();
        (0..k.saturating_sub(1)).any(|i| self.b[i] < 0.0 || (i + 2..k).any(|j| self.e[i][j] < 0.0))
    }

    pub fn integrate(&self, points: usize, f: &(dyn Fn(&[f64]) -> C64 + Sync)) -> Result<C64, QuadError> {
        let k = self.dim();
        if k == 0 {
            return Ok(f(&[]));
        }
        let mut axes = Vec::with_capacity(k);
        let coupled = self.has_corner_singularity();
        for (p, q) in self.axis_exponents() {
            axes.push(if coupled {
                graded01(points.div_ceil(3).max(4), p, q, GRADING_LEVELS)?
            } else {
                let r = jacobi01(points, p, q)?;
                (r.nodes.clone(), r.weights.clone())
            });
        }
        let g = |u: &[f64]| -> C64 {
            let mut v = vec![0.0; k];
            let mut acc = 1.0;
            for l in (0..k).rev() {
                acc *= u[l];
                v[l] = acc;
            }
            let mut w = 1.0;
            for i in 0..k - 1 {
                if self.b[i] != 0.0 {
                    w *= (1.0 - v[i]).powf(self.b[i]);
                }
                let mut prod = u[i];
                for j in i + 2..k {
                    prod *= u[j - 1];
                    if self.e[i][j] != 0.0 {
                        w *= (1.0 - prod).powf(self.e[i][j]);
                    }
                }
            }
            f(&v) * w
        };
        Ok(tensor(&axes, &g))
    }
}

/// One region of a chain: fixed maps M_r, its weight, and the total orders
/// of the variables (level r, index i; both 1-based) that make it up.
#[derive(Clone, Debug)]
pub struct ChainRegion {
    pub maps: Vec<Vec<usize>>,
    pub weight: f64,
    pub orders: Vec<Vec<(usize, usize)>>,
}

#[derive(Clone, Debug)]
pub struct ChainDomain {
    pub ks: Vec<usize>,
    /// Whether the last map is the unconstrained M′_{n−1} of the β-deformed chain.
    pub companion: bool,
    pub regions: Vec<ChainRegion>,
}

fn nondecreasing(len: usize, upper: &dyn Fn(usize) -> usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, len: usize, lo: usize, upper: &dyn Fn(usize) -> usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i > len {
            out.push(cur.clone());
            return;
        }
        for m in lo..=upper(i) {
            cur.push(m);
            rec(i + 1, len, m, upper, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, len, 1, upper, &mut Vec::new(), &mut out);
    out
}

/// Strict order relations (smaller, larger) implied by fixed maps.
fn relations(ks: &[usize], maps: &[Vec<usize>]) -> Vec<((usize, usize), (usize, usize))> {
    let mut rel = Vec::new();
    for (r0, &k) in ks.iter().enumerate() {
        for i in 1..k {
            rel.push(((r0 + 1, i), (r0 + 1, i + 1)));
        }
    }
    for (r0, m) in maps.iter().enumerate() {
        let (r, next) = (r0 + 1, r0 + 2);
        for (i0, &mi) in m.iter().enumerate() {
            if mi > 1 {
                rel.push(((next, mi - 1), (r, i0 + 1)));
            }
            if mi <= ks[next - 1] {
                rel.push(((r, i0 + 1), (next, mi)));
            }
        }
    }
    rel
}

fn linear_extensions(ks: &[usize], rel: &[((usize, usize), (usize, usize))]) -> Vec<Vec<(usize, usize)>> {
    let vars: Vec<(usize, usize)> = ks.iter().enumerate().flat_map(|(r, &k)| (1..=k).map(move |i| (r + 1, i))).collect();
    let idx = |v: (usize, usize)| vars.iter().position(|&w| w == v).unwrap();
    let preds: Vec<Vec<usize>> = {
        let mut p = vec![Vec::new(); vars.len()];
        for &(a, b) in rel {
            p[idx(b)].push(idx(a));
        }
        p
    };
    fn rec(preds: &[Vec<usize>], used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] && preds[v].iter().all(|&p| used[p]) {
                used[v] = true;
                cur.push(v);
                rec(preds, used, cur, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&preds, &mut vec![false; vars.len()], &mut Vec::new(), &mut out);
    out.into_iter().map(|o| o.into_iter().map(|v| vars[v]).collect()).collect()
}

fn sine_ratio(num: f64, den: f64) -> Result<f64, QuadError> {
    let d = (PI * den).sin();
    if d.abs() < 1e-12 {
        return Err(QuadError::Invalid(format!("chain weight has a pole at sin({den}π) = 0")));
    }
    Ok((PI * num).sin() / d)
}

/// Weight of one map M_r between levels with k_r and k_{r+1} variables.
fn map_weight(m: &[usize], kr: usize, knext: usize, gamma: f64) -> Result<f64, QuadError> {
    let mut w = 1.0;
    for (i0, &mi) in m.iter().enumerate() {
        let base = (i0 + 1 + knext) as f64 - kr as f64;
        w *= if gamma == 0.0 {
            (base - mi as f64 + 1.0) / base
        } else {
            sine_ratio((base - mi as f64 + 1.0) * gamma, base * gamma)?
        };
    }
    Ok(w)
}

fn build_chain(ks: &[usize], companion: Option<f64>, gamma: f64) -> Result<ChainDomain, QuadError> {
    let n = ks.len();
    if n == 0 {
        return Err(QuadError::Invalid("empty chain".into()));
    }
    let ordered = if companion.is_some() { &ks[..n - 1] } else { ks };
    if ordered.windows(2).any(|w| w[0] > w[1]) {
        return Err(QuadError::Invalid(format!("k must be nondecreasing: {ks:?}")));
    }
    let mut choices: Vec<Vec<Vec<usize>>> = Vec::new();
    for r in 0..n.saturating_sub(1) {
        let (kr, knext) = (ks[r], ks[r + 1]);
        let last = companion.is_some() && r + 2 == n;
        let upper = move |i: usize| if last { knext + 1 } else { i + knext - kr };
        choices.push(nondecreasing(kr, &upper));
    }
    let mut regions = Vec::new();
    let mut pick = vec![0usize; choices.len()];
    loop {
        let maps: Vec<Vec<usize>> = pick.iter().enumerate().map(|(r, &j)| choices[r][j].clone()).collect();
        let mut weight = 1.0;
        for (r, m) in maps.iter().enumerate() {
            weight *= match companion {
                Some(beta) if r + 2 == n => {
                    let (kp, kn) = (ks[r] as f64, ks[r + 1] as f64);
                    let mut w = 1.0;
                    for (i0, &mi) in m.iter().enumerate() {
                        let base = i0 as f64 + 1.0 + kn - kp;
                        w *= sine_ratio(beta - (base - mi as f64 + 1.0) * gamma, beta - base * gamma)?;
                    }
                    w
                }
                _ => map_weight(m, ks[r], ks[r + 1], gamma)?,
            };
        }
        let orders = linear_extensions(ks, &relations(ks, &maps));
        regions.push(ChainRegion { maps, weight, orders });
        let mut r = choices.len();
        loop {
            if r == 0 {
                return Ok(ChainDomain { ks: ks.to_vec(), companion: companion.is_some(), regions });
            }
            r -= 1;
            pick[r] += 1;
            if pick[r] < choices[r].len() {
                break;
            }
            pick[r] = 0;
        }
    }
}

/// The chain C_γ^{k₁..k_n}[0,1]: all admissible map tuples with their sine
/// weights. For γ = 0 the weights take their limiting values.
pub fn enumerate_chain(ks: &[usize], gamma: f64) -> Result<ChainDomain, QuadError> {
    build_chain(ks, None, gamma)
}

/// The β-deformed chain, in which the last pair of levels is unordered and
/// the last map carries the β_{n−1}-dependent weight.
pub fn enumerate_companion_chain(ks: &[usize], beta: f64, gamma: f64) -> Result<ChainDomain, QuadError> {
    if ks.len() < 2 {
        return Err(QuadError::Invalid("the companion chain needs n ≥ 2".into()));
    }
    build_chain(ks, Some(beta), gamma)
}

impl ChainDomain {
    /// Indices of the regions whose interleaving constraints hold at t.
    pub fn regions_containing(&self, t: &[Vec<f64>]) -> Vec<usize> {
        let at = |r: usize, i: usize| -> Option<f64> {
            if i == 0 {
                Some(0.0)
            } else if i > self.ks[r - 1] {
                Some(1.0)
            } else {
                Some(t[r - 1][i - 1])
            }
        };
        self.regions
            .iter()
            .enumerate()
            .filter(|(_, reg)| {
                reg.maps.iter().enumerate().all(|(r0, m)| {
                    m.iter().enumerate().all(|(i0, &mi)| {
                        let x = t[r0][i0];
                        at(r0 + 2, mi - 1).unwrap() < x && x < at(r0 + 2, mi).unwrap()
                    })
                })
            })
            .map(|(j, _)| j)
            .collect()
    }

    /// Σ_regions weight × ∫_region ∏ t^{α_r−1}(1−t)^{β_r−1} |Δ|^{2γ} |Δ_cross|^{−γ} 𝒪.
    pub fn integrate(
        &self,
        alphas: &[f64],
        betas: &[f64],
        gamma: f64,
        points: usize,
        obs: &(dyn Fn(&[Vec<f64>]) -> C64 + Sync),
    ) -> Result<C64, QuadError> {
        let mut total = C64::new(0.0, 0.0);
        for reg in &self.regions {
            if reg.weight == 0.0 {
                continue;
            }
            for order in &reg.orders {
                let k = order.len();
                let mut e = vec![vec![0.0; k]; k];
                for i in 0..k {
                    for j in i + 1..k {
                        let (ri, rj) = (order[i].0, order[j].0);
                        e[i][j] = if ri == rj {
                            2.0 * gamma
                        } else if ri.abs_diff(rj) == 1 {
                            -gamma
                        } else {
                            0.0
                        };
                    }
                }
                let simplex = OrderedSimplex {
                    a: order.iter().map(|&(r, _)| alphas[r - 1] - 1.0).collect(),
                    b: order.iter().map(|&(r, _)| betas[r - 1] - 1.0).collect(),
                    e,
                };
                let f = |v: &[f64]| {
                    let mut t: Vec<Vec<f64>> = self.ks.iter().map(|&k| vec![0.0; k]).collect();
                    for (pos, &(r, i)) in order.iter().enumerate() {
                        t[r - 1][i - 1] = v[pos];
                    }
                    obs(&t)
                };
                total += simplex.integrate(points, &f)? * reg.weight;
            }
        }
        Ok(total)
    }
}

/// Points per dimension and the relative tolerance between two refinements.
#[derive(Clone, Copy, Debug)]
pub struct QuadSpec {
    pub points: usize,
    pub tol: f64,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec { points: 32, tol: 1e-4 }
    }
}

/// A quadrature value with the difference to the coarser refinement.
#[derive(Clone, Copy, Debug)]
pub struct QuadValue {
    pub value: C64,
    pub error: f64,
}

fn refine(spec: &QuadSpec, run: &dyn Fn(usize) -> Result<C64, QuadError>) -> Result<QuadValue, QuadError> {
    if spec.points < 2 {
        return Err(QuadError::Invalid(format!("points={}", spec.points)));
    }
    let coarse = run(spec.points)?;
    let fine = run(spec.points + spec.points / 2)?;
    let error = (fine - coarse).norm();
    let rel = error / fine.norm().max(1e-300);
    if rel > spec.tol {
        return Err(QuadError::NotConverged(rel));
    }
    Ok(QuadValue { value: fine, error })
}

/// The rank-n Selberg integral of 𝒪 over C_γ^{k}[0,1] (β₁..β_{n−1} = 1, β_n = β).
pub fn an_selberg_lhs(
    ks: &[usize],
    alphas: &[f64],
    beta: f64,
    gamma: f64,
    obs: &(dyn Fn(&[Vec<f64>]) -> C64 + Sync),
    spec: &QuadSpec,
) -> Result<QuadValue, QuadError> {
    let n = ks.len();
    if alphas.len() != n {
        return Err(QuadError::Invalid("one α per level".into()));
    }
    let chain = enumerate_chain(ks, gamma)?;
    let betas: Vec<f64> = (1..=n).map(|r| if r == n { beta } else { 1.0 }).collect();
    refine(spec, &|pts| chain.integrate(alphas, &betas, gamma, pts, obs))
}

/// The companion integral over the β-deformed chain, (β_{n−1}, β_n) given.
pub fn an_alt_lhs(
    ks: &[usize],
    alphas: &[f64],
    beta_pair: (f64, f64),
    gamma: f64,
    obs: &(dyn Fn(&[Vec<f64>]) -> C64 + Sync),
    spec: &QuadSpec,
) -> Result<QuadValue, QuadError> {
    let n = ks.len();
    if alphas.len() != n {
        return Err(QuadError::Invalid("one α per level".into()));
    }
    let chain = enumerate_companion_chain(ks, beta_pair.0, gamma)?;
    let betas: Vec<f64> = (1..=n)
        .map(|r| if r == n { beta_pair.1 } else if r + 1 == n { beta_pair.0 } else { 1.0 })
        .collect();
    refine(spec, &|pts| chain.integrate(alphas, &betas, gamma, pts, obs))
}

/// Power sums p_1..p_d of t₁..t_k plus the scalar `shift` (index 0 unused).
pub fn shifted_power_sums(t: &[f64], shift: f64, d: u32) -> Vec<C64> {
    (0..=d)
        .map(|j| C64::new(if j == 0 { 0.0 } else { t.iter().map(|x| x.powi(j as i32)).sum::<f64>() + shift }, 0.0))
        .collect()
}

/// Selberg–Jack integral ∫_{[0,1]^k} P_λ(t) P_μ[t + β/γ − 1] ∏ t^{α−1}(1−t)^{β−1} |Δ|^{2γ}.
pub fn aflt_lhs(
    k: usize,
    lam: &Partition,
    mu: &Partition,
    alpha: f64,
    beta: f64,
    gamma: f64,
    spec: &QuadSpec,
) -> Result<QuadValue, QuadError> {
    let bind = crate::field::bind(&[("gamma", C64::new(gamma, 0.0))]);
    let jack = |p: &Partition| {
        numeric_p(Family::Jack, p, &bind).map_err(|e| QuadError::Integrand(e.to_string()))
    };
    let (pl, pm) = (jack(lam)?, jack(mu)?);
    let (dl, dm) = (lam.size(), mu.size());
    let shift = beta / gamma - 1.0;
    let obs = |t: &[Vec<f64>]| {
        pl.eval_power_sums(&shifted_power_sums(&t[0], 0.0, dl)) * pm.eval_power_sums(&shifted_power_sums(&t[0], shift, dm))
    };
    let chain = enumerate_chain(&[k], gamma)?;
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    let v = refine(spec, &|pts| chain.integrate(&[alpha], &[beta], gamma, pts, &obs))?;
    Ok(QuadValue { value: v.value * fact, error: v.error * fact })
}

// ---------------------------------------------------------------------------
// Macdonald torus integrals
// ---------------------------------------------------------------------------

/// Numeric q-series parameters of a torus integral.
#[derive(Clone, Copy, Debug)]
pub struct TorusSpec {
    pub rho: f64,
    pub points: usize,
}

fn qinf(x: C64, q: C64) -> C64 {
    crate::coeffs::qpoch_inf(x, q).unwrap_or(C64::new(f64::NAN, f64::NAN))
}

/// ∏_{i<j} (z_i/z_j, z_j/z_i;q)_∞ / (tz_i/z_j, tz_j/z_i;q)_∞.
pub fn macdonald_cross_weight(z: &[C64], q: C64, t: C64) -> C64 {
    let mut v = C64::new(1.0, 0.0);
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let (u, w) = (z[i] / z[j], z[j] / z[i]);
            v *= qinf(u, q) * qinf(w, q) / (qinf(t * u, q) * qinf(t * w, q));
        }
    }
    v
}

fn macdonald_numeric(lam: &Partition, q: C64, t: C64) -> Result<crate::symfunc::NumericSym, QuadError> {
    let bind = crate::field::bind(&[("q", q), ("t", t)]);
    numeric_p(Family::Macdonald, lam, &bind).map_err(|e| QuadError::Integrand(e.to_string()))
}

/// p_k(z) + (t^k − b^k)/(1 − t^k) for k = 0..d (index 0 unused).
fn plethystic_sums(z: &[C64], t: C64, b: C64, d: u32) -> Vec<C64> {
    (0..=d as i32)
        .map(|k| {
            if k == 0 {
                C64::new(0.0, 0.0)
            } else {
                z.iter().map(|x| x.powi(k)).sum::<C64>() + (t.powi(k) - b.powi(k)) / (1.0 - t.powi(k))
            }
        })
        .collect()
}

fn finite(v: C64) -> Result<C64, QuadError> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(QuadError::Integrand("pole on the integration torus".into()))
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// (1/n!) ∮ P_λ(z) P_μ[z + (t−b)/(1−t)] ∏ (a/z_i, qz_i/a;q)_∞/(b/z_i, z_i;q)_∞
/// × cross weight, over |z_i| = ρ with |b| < ρ < 1.
#[allow(clippy::too_many_arguments)]
pub fn mac_aflt_lhs(
    n: usize,
    lam: &Partition,
    mu: &Partition,
    a: C64,
    b: C64,
    q: C64,
    t: C64,
    spec: &TorusSpec,
) -> Result<C64, QuadError> {
    if !(b.norm() < spec.rho && spec.rho < 1.0) {
        return Err(QuadError::Invalid(format!("radius {} outside (|b|, 1)", spec.rho)));
    }
    let (pl, pm) = (macdonald_numeric(lam, q, t)?, macdonald_numeric(mu, q, t)?);
    let f = |z: &[C64]| {
        let mut v = pl.eval(z) * pm.eval_power_sums(&plethystic_sums(z, t, b, mu.size())) * macdonald_cross_weight(z, q, t);
        for &x in z {
            v *= qinf(a / x, q) * qinf(q * x / a, q) / (qinf(b / x, q) * qinf(x, q));
        }
        v
    };
    finite(torus_integral(n, spec.rho, spec.points, &f)? / factorial(n))
}

/// ⟨P_λ ∏(az_i;q)_∞/(bz_i;q)_∞, Q_μ[z + (t−b)/(1−t)] ∏(qz_i/a;q)_∞/(z_i;q)_∞⟩′_n,
/// on |z_i| = ρ with 1 < ρ < 1/|b|.
#[allow(clippy::too_many_arguments)]
pub fn mac_corollary_lhs(
    n: usize,
    lam: &Partition,
    mu: &Partition,
    a: C64,
    b: C64,
    q: C64,
    t: C64,
    spec: &TorusSpec,
) -> Result<C64, QuadError> {
    if !(1.0 < spec.rho && spec.rho * b.norm() < 1.0) {
        return Err(QuadError::Invalid(format!("radius {} outside (1, 1/|b|)", spec.rho)));
    }
    let (pl, pm) = (macdonald_numeric(lam, q, t)?, macdonald_numeric(mu, q, t)?);
    let (c, cp) = crate::closedform::mac_hooks(mu, q, t);
    let bmu = c / cp;
    let f = |z: &[C64]| {
        let zi: Vec<C64> = z.iter().map(|x| x.inv()).collect();
        let mut v = pl.eval(z) * bmu * pm.eval_power_sums(&plethystic_sums(&zi, t, b, mu.size())) * macdonald_cross_weight(z, q, t);
        for (&x, &y) in z.iter().zip(&zi) {
            v *= qinf(a * x, q) / qinf(b * x, q) * qinf(q * y / a, q) / qinf(y, q);
        }
        v
    };
    finite(torus_integral(n, spec.rho, spec.points, &f)? / factorial(n))
}

/// ⟨P_λ, Q_μ⟩′_n on the unit torus.
pub fn macdonald_scalar_product(n: usize, lam: &Partition, mu: &Partition, q: C64, t: C64, points: usize) -> Result<C64, QuadError> {
    let (pl, pm) = (macdonald_numeric(lam, q, t)?, macdonald_numeric(mu, q, t)?);
    let (c, cp) = crate::closedform::mac_hooks(mu, q, t);
    let bmu = c / cp;
    let f = |z: &[C64]| {
        let zi: Vec<C64> = z.iter().map(|x| x.inv()).collect();
        pl.eval(z) * bmu * pm.eval(&zi) * macdonald_cross_weight(z, q, t)
    };
    finite(torus_integral(n, 1.0, points, &f)? / factorial(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{beta as beta_fn, rgamma};

    #[test]
    fn legendre_integrates_polynomials() {
        let r = gauss_legendre(6);
        for d in 0..12 {
            let s: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(d)).sum();
            let want = if d % 2 == 1 { 0.0 } else { 2.0 / (d as f64 + 1.0) };
            assert!((s - want).abs() < 1e-13, "degree {d}");
        }
    }

    #[test]
    fn jacobi_moments() {
        for &(p, q) in &[(0.5, -0.5), (-0.7, 1.3), (2.0, 0.0)] {
            let r = jacobi01(12, p, q).unwrap();
            for d in 0..10 {
                let s: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(d)).sum();
                let want = beta_fn(C64::new(p + 1.0 + d as f64, 0.0), C64::new(q + 1.0, 0.0)).unwrap().re;
                assert!((s - want).abs() < 1e-13 * want, "p={p} q={q} d={d}");
            }
        }
    }

    #[test]
    fn convergence_order_on_smooth_integrand() {
        let f = |x: f64| (3.0 * x).cos() / (1.0 + x * x);
        let exact: f64 = {
            let r = jacobi01(60, 0.0, 0.0).unwrap();
            r.nodes.iter().zip(&r.weights).map(|(x, w)| w * f(*x)).sum()
        };
        let mut prev = f64::INFINITY;
        for n in [2, 4, 8] {
            let r = jacobi01(n, 0.0, 0.0).unwrap();
            let s: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * f(*x)).sum();
            let err = (s - exact).abs();
            assert!(err * 10.0 < prev, "n={n}: {err} vs {prev}");
            prev = err;
        }
    }

    #[test]
    fn sector_residue_and_cauchy() {
        let c = SectorContour::default();
        let v = sector_integral(&|x| (x - 1.0).inv(), &c).unwrap();
        assert!((v.value - 1.0).norm() < 1e-12);
        let v = sector_integral(&|x| x * x + 3.0, &c).unwrap();
        assert!(v.value.norm() < 1e-12);
    }

    #[test]
    fn sector_beta_lemma() {
        let (a, b) = (C64::new(1.7, 0.0), C64::new(0.4, 0.2));
        let want = gamma(a).unwrap() * rgamma(1.0 - b) * rgamma(a + b);
        let v = sector_integral(&|x| x.powc(a - 1.0) * (x - 1.0).powc(b - 1.0), &SectorContour::default()).unwrap();
        assert!((v.value - want).norm() < 1e-10 * want.norm());
        assert!(v.eps0_sensitivity < 1e-15);
    }

    #[test]
    fn torus_basics() {
        let v = torus_integral(1, 0.7, 16, &|_| C64::new(1.0, 0.0)).unwrap();
        assert!((v - 1.0).norm() < 1e-15);
        let v = torus_integral(2, 1.0, 32, &|z| z[0] * z[1] * z[1] + z[0].inv()).unwrap();
        assert!(v.norm() < 1e-14);
        let v = torus_integral(2, 1.0, 32, &|z| (z[0] + z[1].inv()) * (z[0].inv() + z[1])).unwrap();
        assert!((v - 2.0).norm() < 1e-14);
    }

    use crate::closedform::{aflt_rhs, an_aflt_rhs, an_selberg_rhs, selberg_rhs, AnParams};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn one(_: &[Vec<f64>]) -> C64 {
        re(1.0)
    }

    #[test]
    fn chain_examples() {
        let c = enumerate_chain(&[2], 0.5).unwrap();
        assert_eq!(c.regions.len(), 1);
        assert_eq!(c.regions[0].orders, vec![vec![(1, 1), (1, 2)]]);
        let c = enumerate_chain(&[1, 1], 0.3).unwrap();
        assert_eq!(c.regions.len(), 1);
        assert!((c.regions[0].weight - 1.0).abs() < 1e-15);
        assert_eq!(c.regions[0].orders, vec![vec![(1, 1), (2, 1)]]);
        let g = 0.3;
        let c = enumerate_chain(&[1, 2], g).unwrap();
        let w: Vec<f64> = c.regions.iter().map(|r| r.weight).collect();
        assert_eq!(c.regions[0].maps, vec![vec![1]]);
        assert!((w[0] - 1.0).abs() < 1e-15);
        assert!((w[1] - (PI * g).sin() / (2.0 * PI * g).sin()).abs() < 1e-15);
        assert!(enumerate_chain(&[1, 2], 0.5).is_err());
        let c = enumerate_companion_chain(&[1, 1], 0.75, 0.5).unwrap();
        assert_eq!(c.regions.len(), 2);
        assert_eq!(c.regions[1].orders, vec![vec![(2, 1), (1, 1)]]);
    }

    #[test]
    fn chain_drops_empty_first_level() {
        for ks in [vec![1, 2], vec![2, 2, 3]] {
            let mut padded = vec![0];
            padded.extend(&ks);
            let (a, b) = (enumerate_chain(&padded, 0.2).unwrap(), enumerate_chain(&ks, 0.2).unwrap());
            let wa: Vec<f64> = a.regions.iter().map(|r| r.weight).collect();
            let wb: Vec<f64> = b.regions.iter().map(|r| r.weight).collect();
            assert_eq!(wa, wb);
        }
    }

    #[test]
    fn chain_weights_have_a_limit_at_zero() {
        for ks in [vec![1, 2], vec![2, 3], vec![1, 2, 3]] {
            let at0: Vec<f64> = enumerate_chain(&ks, 0.0).unwrap().regions.iter().map(|r| r.weight).collect();
            let mut prev = f64::INFINITY;
            for m in 2..7 {
                let g = 10f64.powi(-m);
                let w: Vec<f64> = enumerate_chain(&ks, g).unwrap().regions.iter().map(|r| r.weight).collect();
                let d = w.iter().zip(&at0).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
                assert!(d < prev.max(1e-14) && d < 10.0 * g, "{ks:?} at γ = {g}");
                prev = d;
            }
        }
    }

    fn sample_ordered(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
        let mut v: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn chain_regions_cover_the_domain(seed in 0u64..1000, which in 0usize..4) {
            let ks = [vec![1, 2], vec![2, 3], vec![1, 2, 2], vec![2, 2]][which].clone();
            let chain = enumerate_chain(&ks, 0.2).unwrap();
            let comp = enumerate_companion_chain(&ks, 0.7, 0.2).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut tested = 0;
            while tested < 20 {
                let t: Vec<Vec<f64>> = ks.iter().map(|&k| sample_ordered(&mut rng, k)).collect();
                let below = |r: usize| (1..=ks[r]).all(|i| t[r][i - 1] < t[r + 1][i + ks[r + 1] - ks[r] - 1]);
                let n = ks.len();
                if (0..n - 2).all(below) {
                    prop_assert_eq!(comp.regions_containing(&t).len(), 1);
                }
                if (0..n - 1).all(below) {
                    prop_assert_eq!(chain.regions_containing(&t).len(), 1);
                    tested += 1;
                }
            }
        }
    }

    #[test]
    fn simplex_examples() {
        let spec = QuadSpec { points: 12, tol: 1e-10 };
        let (a, b) = (1.7, 0.6);
        let v = an_selberg_lhs(&[1], &[a], b, 0.4, &one, &spec).unwrap();
        assert!((v.value - beta_fn(re(a), re(b)).unwrap()).norm() < 1e-10);
        let v = an_selberg_lhs(&[2], &[1.0], 1.0, 1.0, &one, &spec).unwrap();
        assert!((v.value * 2.0 - re(1.0 / 6.0)).norm() < 1e-8);
        let v = aflt_lhs(1, &Partition::of(&[1]), &Partition::empty(), a, b, 0.7, &spec).unwrap();
        assert!((v.value - beta_fn(re(a + 1.0), re(b)).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn aflt_lhs_matches_closed_form() {
        let spec = QuadSpec { points: 16, tol: 1e-8 };
        let (l, m) = (Partition::of(&[1]), Partition::of(&[1]));
        let v = aflt_lhs(2, &l, &m, 2.0, 2.0, 1.0, &spec).unwrap();
        let want = aflt_rhs(2, &l, &m, 1, re(2.0), re(2.0), re(1.0)).unwrap();
        assert!((v.value - want).norm() < 1e-8 * want.norm());
        let e = Partition::empty();
        let v = aflt_lhs(2, &e, &e, 1.3, 0.8, 0.6, &QuadSpec { points: 24, tol: 1e-6 }).unwrap();
        let want = selberg_rhs(2, re(1.3), re(0.8), re(0.6)).unwrap();
        assert!((v.value - want).norm() < 1e-6 * want.norm(), "{} vs {want}", v.value);
    }

    #[test]
    fn rank_two_chain_matches_selberg() {
        let spec = QuadSpec { points: 32, tol: 1e-4 };
        let v = an_selberg_lhs(&[1, 1], &[1.0, 1.0], 1.0, 0.5, &one, &spec).unwrap();
        let p = AnParams::new(&[1, 1], &[re(1.0), re(1.0)], re(1.0), re(0.5)).unwrap();
        let want = an_selberg_rhs(&p).unwrap();
        assert!((v.value - want).norm() < 1e-4 * want.norm(), "{} vs {want}", v.value);
        let g = 1.0 / 3.0;
        let v = an_selberg_lhs(&[1, 2], &[1.2, 1.5], 1.1, g, &one, &spec).unwrap();
        let p = AnParams::new(&[1, 2], &[re(1.2), re(1.5)], re(1.1), re(g)).unwrap();
        let want = an_selberg_rhs(&p).unwrap();
        assert!((v.value - want).norm() < 1e-4 * want.norm(), "{} vs {want}", v.value);
    }

    #[test]
    fn rank_two_jack_pair() {
        let g = 1.0 / 3.0;
        let (ks, al, b) = ([1usize, 2], [1.2, 1.5], 1.1);
        let bind = crate::field::bind(&[("gamma", re(g))]);
        let p = AnParams::new(&ks, &[re(al[0]), re(al[1])], re(b), re(g)).unwrap();
        let spec = QuadSpec { points: 32, tol: 1e-4 };
        let norm = an_selberg_lhs(&ks, &al, b, g, &one, &spec).unwrap().value;
        for (lam, mu) in [(Partition::of(&[1]), Partition::empty()), (Partition::of(&[1]), Partition::of(&[1])), (Partition::empty(), Partition::of(&[1]))] {
            let pl = numeric_p(Family::Jack, &lam, &bind).unwrap();
            let pm = numeric_p(Family::Jack, &mu, &bind).unwrap();
            let obs = |t: &[Vec<f64>]| {
                pl.eval_power_sums(&shifted_power_sums(&t[0], 0.0, lam.size()))
                    * pm.eval_power_sums(&shifted_power_sums(&t[1], b / g - 1.0, mu.size()))
            };
            let v = an_selberg_lhs(&ks, &al, b, g, &obs, &spec).unwrap().value / norm;
            let want = an_aflt_rhs(&p, &lam, &mu, lam.len(), mu.len()).unwrap();
            assert!((v - want).norm() < 1e-4 * want.norm(), "{lam} {mu}: {v} vs {want}");
        }
    }


    #[test]
    fn companion_chain_matches_closed_forms() {
        use crate::closedform::{an_alt_norm, an_alt_rhs, companion_four_f_three, AltParams};
        let (g, b1) = (0.5, 0.75);
        let (al, bp) = ([1.3, 1.6], (b1, g + 1.0 - b1));
        let p = AltParams::new(&[1, 1], &[re(al[0]), re(al[1])], (re(bp.0), re(bp.1)), re(g)).unwrap();
        p.check_conditions().unwrap();
        let spec = QuadSpec { points: 40, tol: 1e-4 };
        let norm = an_alt_lhs(&[1, 1], &al, bp, g, &one, &spec).unwrap().value;
        let want = an_alt_norm(&p, false).unwrap();
        assert!((norm - want).norm() < 1e-4 * want.norm(), "{norm} vs {want}");
        let obs = |t: &[Vec<f64>]| re(t[0][0] * t[1][0]);
        let v = an_alt_lhs(&[1, 1], &al, bp, g, &obs, &spec).unwrap().value / norm;
        let one_row = Partition::of(&[1]);
        let want = an_alt_rhs(&p, &one_row, &one_row).unwrap();
        assert!((v - want).norm() < 1e-4 * want.norm(), "{v} vs {want}");
        let bind = crate::field::bind(&[("gamma", re(g))]);
        let row = |u: u32| numeric_p(Family::Jack, &Partition::of(&[u]), &bind).unwrap();
        let u = [1u32, 1, 1];
        let (p1, p2, p3) = (row(u[0]), row(u[1]), row(u[2]));
        let obs = |t: &[Vec<f64>]| {
            let (x, y) = (t[0][0], t[1][0]);
            let diff: Vec<C64> = (0..=u[1]).map(|j| re(y.powi(j as i32) - x.powi(j as i32))).collect();
            p1.eval_power_sums(&shifted_power_sums(&t[0], 0.0, u[0]))
                * p2.eval_power_sums(&diff)
                * p3.eval_power_sums(&shifted_power_sums(&t[1], 0.0, u[2]))
        };
        let v = an_alt_lhs(&[1, 1], &al, bp, g, &obs, &spec).unwrap().value / norm;
        let want = companion_four_f_three((re(al[0]), re(al[1])), (re(bp.0), re(bp.1)), re(g), u).unwrap();
        assert!((v - want).norm() < 1e-4 * want.norm(), "{v} vs {want}");
    }


    #[test]
    fn graded_rule_moments() {
        let (p, q) = (0.3, -0.4);
        let (x, w) = graded01(8, p, q, GRADING_LEVELS).unwrap();
        for d in 0..5 {
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(d)).sum();
            let want = beta_fn(re(p + 1.0 + d as f64), re(q + 1.0)).unwrap().re;
            assert!((s - want).abs() < 1e-12 * want, "degree {d}");
        }
    }


    fn mac_cases(n: usize) -> Vec<(Partition, Partition)> {
        let parts = [Partition::empty(), Partition::of(&[1]), Partition::of(&[2])];
        let mut out = Vec::new();
        for l in &parts {
            for m in &parts {
                if l.len() <= n {
                    out.push((l.clone(), m.clone()));
                }
            }
        }
        out
    }

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn macdonald_aflt_on_torus() {
        use crate::closedform::mac_aflt_rhs;
        let (q, t) = (C64::new(0.3, 0.0), C64::new(0.4, 0.0));
        let (a, b) = (C64::new(0.7, 0.4), C64::new(0.35, -0.3));
        for (n, points, tol) in [(1, 256, 1e-7), (2, 128, 1e-5)] {
            let spec = TorusSpec { rho: (1.0 + b.norm()) / 2.0, points };
            for (lam, mu) in mac_cases(n) {
                let lhs = mac_aflt_lhs(n, &lam, &mu, a, b, q, t, &spec).unwrap();
                let rhs = mac_aflt_rhs(n, &lam, &mu, mu.len(), a, b, q, t).unwrap();
                assert!(rel(lhs, rhs) < tol, "n={n} {lam} {mu}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn torus_radius_independence() {
        let (q, t) = (C64::new(0.3, 0.0), C64::new(0.4, 0.0));
        let (a, b) = (C64::new(0.7, 0.4), C64::new(0.35, -0.3));
        let (lam, mu) = (Partition::of(&[1]), Partition::of(&[2]));
        for n in [1, 2] {
            let r1 = (1.0 + b.norm()) / 2.0;
            let r2 = (3.0 + b.norm()) / 4.0;
            let v1 = mac_aflt_lhs(n, &lam, &mu, a, b, q, t, &TorusSpec { rho: r1, points: 160 }).unwrap();
            let v2 = mac_aflt_lhs(n, &lam, &mu, a, b, q, t, &TorusSpec { rho: r2, points: 160 }).unwrap();
            assert!(rel(v1, v2) < 1e-9, "n={n}: {v1} vs {v2}");
        }
    }

    #[test]
    fn macdonald_orthogonality_on_torus() {
        use crate::closedform::macdonald_norm;
        let (q, t) = (C64::new(0.3, 0.0), C64::new(0.4, 0.0));
        let parts = [Partition::empty(), Partition::of(&[1]), Partition::of(&[2]), Partition::of(&[1, 1])];
        for n in [1, 2] {
            for lam in parts.iter().filter(|l| l.len() <= n) {
                for mu in parts.iter().filter(|l| l.len() <= n) {
                    let v = macdonald_scalar_product(n, lam, mu, q, t, 64).unwrap();
                    if lam == mu {
                        let want = macdonald_norm(n, lam, q, t).unwrap();
                        assert!(rel(v, want) < 1e-9, "n={n} {lam}: {v} vs {want}");
                    } else {
                        assert!(v.norm() < 1e-12, "n={n} {lam} {mu}: {v}");
                    }
                }
            }
        }
    }

    #[test]
    fn scalar_product_form_on_torus() {
        use crate::closedform::mac_corollary_rhs;
        let (q, t) = (C64::new(0.3, 0.0), C64::new(0.4, 0.0));
        let (a, b) = (C64::new(0.7, 0.4), C64::new(0.35, -0.3));
        for (n, points, tol) in [(1, 256, 1e-7), (2, 128, 1e-5)] {
            let spec = TorusSpec { rho: (1.0 + 1.0 / b.norm()) / 2.0, points };
            for (lam, mu) in mac_cases(n) {
                let lhs = mac_corollary_lhs(n, &lam, &mu, a, b, q, t, &spec).unwrap();
                let rhs = mac_corollary_rhs(n, &lam, &mu, mu.len() + 1, a, b, q, t).unwrap();
                assert!(rel(lhs, rhs) < tol, "n={n} {lam} {mu}: {lhs} vs {rhs}");
            }
        }
    }
}
