//! Exact scalar arithmetic.
//!
//! [`MPoly`] is a sparse polynomial with integer coefficients in globally
//! registered indeterminates; [`FieldElement`] is a reduced quotient of two
//! such polynomials, i.e. an element of the rational function field
//! ℚ(q, t, a, …). Quotients are kept in lowest terms (multivariate GCD over
//! ℤ), so structural equality is mathematical equality.
//!
//! Numerical evaluation goes through [`FieldElement::eval_complex`], which
//! flags poles instead of returning infinities.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;
use thiserror::Error;

pub type Rational = BigRational;
pub type C64 = Complex64;

/// Default relative threshold below which a denominator counts as zero.
pub const POLE_TOL: f64 = 1e-13;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes at the evaluation point")]
    Pole,
    #[error("indeterminate `{0}` is not bound")]
    Unbound(String),
}

// ---------------------------------------------------------------------------
// Indeterminate registry
// ---------------------------------------------------------------------------

fn registry() -> &'static RwLock<Vec<String>> {
    static REG: OnceLock<RwLock<Vec<String>>> = OnceLock::new();
    REG.get_or_init(|| {
        let names = ["q", "t", "a", "b", "c", "d", "p", "gamma", "beta"];
        RwLock::new(names.iter().map(|s| s.to_string()).collect())
    })
}

/// Handle to a registered indeterminate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub usize);

impl Var {
    pub fn new(name: &str) -> Var {
        {
            let reg = registry().read().unwrap();
            if let Some(i) = reg.iter().position(|n| n == name) {
                return Var(i);
            }
        }
        let mut reg = registry().write().unwrap();
        if let Some(i) = reg.iter().position(|n| n == name) {
            return Var(i);
        }
        reg.push(name.to_string());
        Var(reg.len() - 1)
    }

    pub fn name(&self) -> String {
        registry().read().unwrap()[self.0].clone()
    }

    pub fn fe(&self) -> FieldElement {
        FieldElement::from_poly(MPoly::var(*self))
    }
}

/// Shorthand for `Var::new(name).fe()`.
pub fn var(name: &str) -> FieldElement {
    Var::new(name).fe()
}

// ---------------------------------------------------------------------------
// Monomials
// ---------------------------------------------------------------------------

/// Dense exponent vector over the registry, trailing zeros trimmed.
/// The derived order is lexicographic with variable 0 most significant.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Mono(SmallVec<[u32; 6]>);

impl Mono {
    pub fn one() -> Mono {
        Mono(SmallVec::new())
    }

    pub fn var(v: Var, e: u32) -> Mono {
        if e == 0 {
            return Mono::one();
        }
        let mut s = SmallVec::from_elem(0, v.0 + 1);
        s[v.0] = e;
        Mono(s)
    }

    fn trim(mut self) -> Mono {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exp(&self, v: usize) -> u32 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let (long, short) = if self.0.len() >= o.0.len() { (self, o) } else { (o, self) };
        let mut s = long.0.clone();
        for (i, e) in short.0.iter().enumerate() {
            s[i] += e;
        }
        Mono(s)
    }

    pub fn div(&self, o: &Mono) -> Option<Mono> {
        if o.0.len() > self.0.len() {
            return None;
        }
        let mut s = self.0.clone();
        for (i, e) in o.0.iter().enumerate() {
            if s[i] < *e {
                return None;
            }
            s[i] -= e;
        }
        Some(Mono(s).trim())
    }

    pub fn pow(&self, k: u32) -> Mono {
        Mono(self.0.iter().map(|e| e * k).collect()).trim()
    }

    /// Highest variable index with nonzero exponent.
    pub fn max_var(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    /// Splits off the exponent of variable `v`, returning (rest, e).
    fn split(&self, v: usize) -> (Mono, u32) {
        let e = self.exp(v);
        if e == 0 {
            return (self.clone(), 0);
        }
        let mut s = self.0.clone();
        s[v] = 0;
        (Mono(s).trim(), e)
    }

    fn with(&self, v: usize, e: u32) -> Mono {
        if e == 0 {
            return self.clone();
        }
        let mut s = self.0.clone();
        if s.len() <= v {
            s.resize(v + 1, 0);
        }
        s[v] += e;
        Mono(s)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn from_exponents(e: &[u32]) -> Mono {
        Mono(SmallVec::from_slice(e)).trim()
    }
}

// ---------------------------------------------------------------------------
// Polynomials over ℤ
// ---------------------------------------------------------------------------

/// Sparse multivariate polynomial with integer coefficients. Terms are
/// sorted by decreasing monomial, and zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct MPoly {
    terms: Vec<(Mono, BigInt)>,
}

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly { terms: Vec::new() }
    }

    pub fn one() -> MPoly {
        MPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> MPoly {
        if c.is_zero() {
            MPoly::zero()
        } else {
            MPoly { terms: vec![(Mono::one(), c)] }
        }
    }

    pub fn var(v: Var) -> MPoly {
        MPoly { terms: vec![(Mono::var(v, 1), BigInt::one())] }
    }

    pub fn term(m: Mono, c: BigInt) -> MPoly {
        if c.is_zero() {
            MPoly::zero()
        } else {
            MPoly { terms: vec![(m, c)] }
        }
    }

    fn from_map(map: BTreeMap<Mono, BigInt>) -> MPoly {
        let terms = map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        MPoly { terms }
    }

    pub fn terms(&self) -> &[(Mono, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_const(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn const_value(&self) -> Option<BigInt> {
        if self.terms.is_empty() {
            Some(BigInt::zero())
        } else if self.is_const() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }

    pub fn lm(&self) -> &Mono {
        &self.terms[0].0
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms.iter().filter_map(|(m, _)| m.max_var()).max()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
    }

    pub fn int_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn neg(&self) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> MPoly {
        if k.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn div_int(&self, k: &BigInt) -> MPoly {
        if k.is_one() {
            return self.clone();
        }
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c / k)).collect() }
    }

    pub fn mul_mono(&self, m: &Mono, k: &BigInt) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(a, c)| (a.mul(m), c * k)).collect() }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.combine(o, true)
    }

    fn combine(&self, o: &MPoly, negate: bool) -> MPoly {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < o.terms.len() {
            let ord = if i == self.terms.len() {
                std::cmp::Ordering::Less
            } else if j == o.terms.len() {
                std::cmp::Ordering::Greater
            } else {
                self.terms[i].0.cmp(&o.terms[j].0)
            };
            match ord {
                std::cmp::Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let (m, c) = &o.terms[j];
                    out.push((m.clone(), if negate { -c } else { c.clone() }));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate {
                        &self.terms[i].1 - &o.terms[j].1
                    } else {
                        &self.terms[i].1 + &o.terms[j].1
                    };
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        MPoly { terms: out }
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        if self.is_zero() || o.is_zero() {
            return MPoly::zero();
        }
        if let Some(c) = self.const_value() {
            return o.scale(&c);
        }
        if let Some(c) = o.const_value() {
            return self.scale(&c);
        }
        let mut map: BTreeMap<Mono, BigInt> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m = ma.mul(mb);
                let e = map.entry(m).or_insert_with(BigInt::zero);
                *e += ca * cb;
            }
        }
        MPoly::from_map(map)
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut result = MPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &MPoly) -> Option<MPoly> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.const_value() {
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, a) in &self.terms {
                let (qq, r) = a.div_rem(&c);
                if !r.is_zero() {
                    return None;
                }
                terms.push((m.clone(), qq));
            }
            return Some(MPoly { terms });
        }
        let (dm, dc) = (d.lm().clone(), d.lc().clone());
        let mut rem = self.clone();
        let mut quot: Vec<(Mono, BigInt)> = Vec::new();
        while !rem.is_zero() {
            let m = rem.lm().div(&dm)?;
            let (c, r) = rem.lc().div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            rem = rem.sub(&d.mul_mono(&m, &c));
            quot.push((m, c));
        }
        Some(MPoly { terms: quot })
    }

    /// Coefficients with respect to variable `v` (index = degree).
    pub fn to_univariate(&self, v: usize) -> Vec<MPoly> {
        let d = self.degree_in(v) as usize;
        let mut maps: Vec<BTreeMap<Mono, BigInt>> = vec![BTreeMap::new(); d + 1];
        for (m, c) in &self.terms {
            let (rest, e) = m.split(v);
            maps[e as usize].insert(rest, c.clone());
        }
        maps.into_iter().map(MPoly::from_map).collect()
    }

    pub fn from_univariate(v: usize, coeffs: &[MPoly]) -> MPoly {
        let mut map = BTreeMap::new();
        for (e, c) in coeffs.iter().enumerate() {
            for (m, k) in &c.terms {
                map.insert(m.with(v, e as u32), k.clone());
            }
        }
        MPoly::from_map(map)
    }

    pub fn eval_complex(&self, vals: &[Option<C64>]) -> Result<(C64, f64), FieldError> {
        let mut sum = C64::new(0.0, 0.0);
        let mut scale = 0.0;
        for (m, c) in &self.terms {
            let mut term = C64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (i, e) in m.0.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let x = vals.get(i).copied().flatten().ok_or_else(|| FieldError::Unbound(Var(i).name()))?;
                term *= x.powu(*e);
            }
            scale += term.norm();
            sum += term;
        }
        Ok((sum, scale))
    }

    /// Value at an exact rational point.
    pub fn eval_rational(&self, vals: &HashMap<Var, Rational>) -> Result<Rational, FieldError> {
        let mut sum = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = Rational::from_integer(c.clone());
            for (i, e) in m.0.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let x = vals.get(&Var(i)).ok_or_else(|| FieldError::Unbound(Var(i).name()))?;
                term *= num_traits::pow(x.clone(), *e as usize);
            }
            sum += term;
        }
        Ok(sum)
    }

    fn normalize_sign(self) -> MPoly {
        if !self.is_zero() && self.lc().is_negative() {
            self.neg()
        } else {
            self
        }
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let reg = registry().read().unwrap();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !a.is_one() || m.is_one() {
                parts.push(a.to_string());
            }
            for (i, e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(reg[i].clone()),
                    _ => parts.push(format!("{}^{}", reg[i], e)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// GCD
// ---------------------------------------------------------------------------

/// Greatest common divisor over ℤ[vars], normalised to a positive leading
/// coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.clone().normalize_sign();
    }
    if b.is_zero() {
        return a.clone().normalize_sign();
    }
    let ca = a.int_content();
    let cb = b.int_content();
    let c = ca.gcd(&cb);
    if a.is_const() || b.is_const() {
        return MPoly::constant(c);
    }
    let pa = a.div_int(&ca);
    let pb = b.div_int(&cb);
    gcd_primitive(&pa, &pb).scale(&c)
}

// Both arguments have integer content 1; result has lc > 0.
fn gcd_primitive(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_const() || b.is_const() {
        return MPoly::one();
    }
    if a == b || *a == b.neg() {
        return a.clone().normalize_sign();
    }
    let v = a.max_var().max(b.max_var()).expect("nonconstant");
    let da = a.degree_in(v);
    let db = b.degree_in(v);
    if da == 0 {
        return gcd_primitive(a, &content_in(b, v));
    }
    if db == 0 {
        return gcd_primitive(&content_in(a, v), b);
    }
    let ua = a.to_univariate(v);
    let ub = b.to_univariate(v);
    let ca = content_of(&ua);
    let cb = content_of(&ub);
    let cg = gcd_primitive(&ca, &cb);
    let pa: Vec<MPoly> = ua.iter().map(|c| c.exact_div(&ca).unwrap()).collect();
    let pb: Vec<MPoly> = ub.iter().map(|c| c.exact_div(&cb).unwrap()).collect();

    // A cheap modular image bounds the degree of the gcd in `v`.
    if let Some(d) = modular_gcd_degree(&pa, &pb) {
        if d == 0 {
            return cg;
        }
        let (big, small) = if pa.len() >= pb.len() { (&pa, &pb) } else { (&pb, &pa) };
        if d as usize + 1 == small.len() {
            let bigp = MPoly::from_univariate(v, big);
            let smallp = MPoly::from_univariate(v, small);
            if bigp.exact_div(&smallp).is_some() {
                return smallp.mul(&cg).normalize_sign();
            }
        }
    }
    let h = if pa.len() >= pb.len() { subresultant(&pa, &pb) } else { subresultant(&pb, &pa) };
    let hp = primitive_part(&h);
    MPoly::from_univariate(v, &hp).mul(&cg).normalize_sign()
}

fn content_in(p: &MPoly, v: usize) -> MPoly {
    content_of(&p.to_univariate(v))
}

fn content_of(coeffs: &[MPoly]) -> MPoly {
    let mut nz = coeffs.iter().filter(|c| !c.is_zero());
    let mut g = match nz.next() {
        Some(c) => {
            let k = c.int_content();
            c.div_int(&k).normalize_sign()
        }
        None => return MPoly::zero(),
    };
    for c in nz {
        if g.is_one() {
            break;
        }
        let k = c.int_content();
        g = gcd_primitive(&g, &c.div_int(&k));
    }
    g
}

fn primitive_part(coeffs: &[MPoly]) -> Vec<MPoly> {
    let k = coeffs
        .iter()
        .fold(BigInt::zero(), |g, c| g.gcd(&c.int_content()));
    let scaled: Vec<MPoly> = coeffs.iter().map(|c| c.div_int(&k)).collect();
    let cont = content_of(&scaled);
    scaled.iter().map(|c| c.exact_div(&cont).unwrap()).collect()
}

fn trim_uni(p: &mut Vec<MPoly>) {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    if p.len() == 1 && p[0].is_zero() {
        p.clear();
    }
}

fn prem(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: Vec<MPoly> = a.to_vec();
    let mut e = a.len() as i64 - b.len() as i64 + 1;
    trim_uni(&mut r);
    while r.len() >= b.len() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        for j in 0..=db {
            r[j + dr - db] = r[j + dr - db].sub(&lr.mul(&b[j]));
        }
        trim_uni(&mut r);
        e -= 1;
    }
    if e > 0 {
        let f = lb.pow(e as u32);
        for c in r.iter_mut() {
            *c = c.mul(&f);
        }
    }
    r
}

// Subresultant PRS; returns the last nonzero remainder (not yet primitive).
fn subresultant(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let mut u = a.to_vec();
    let mut w = b.to_vec();
    let mut g = MPoly::one();
    let mut h = MPoly::one();
    loop {
        let d = (u.len() - w.len()) as u32;
        let r = prem(&u, &w);
        if r.is_empty() {
            return w;
        }
        if r.len() == 1 {
            return vec![MPoly::one()];
        }
        let divisor = g.mul(&h.pow(d));
        u = w;
        w = r.iter().map(|c| c.exact_div(&divisor).expect("subresultant division")).collect();
        g = u.last().unwrap().clone();
        h = if d == 0 {
            h
        } else if d == 1 {
            g.clone()
        } else {
            g.pow(d).exact_div(&h.pow(d - 1)).expect("subresultant h update")
        };
    }
}

const MOD_P: u64 = 2_147_483_647;

fn mod_pow(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    b %= MOD_P;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % MOD_P;
        }
        b = b * b % MOD_P;
        e >>= 1;
    }
    r
}

fn mod_inv(a: u64) -> u64 {
    mod_pow(a, MOD_P - 2)
}

fn reduce_mod(c: &BigInt) -> u64 {
    let m = BigInt::from(MOD_P);
    let r = c.mod_floor(&m);
    r.to_u64().unwrap()
}

fn eval_mod(p: &MPoly, point: &dyn Fn(usize) -> u64) -> u64 {
    let mut acc = 0u64;
    for (m, c) in &p.terms {
        let mut t = reduce_mod(c);
        for (i, e) in m.0.iter().enumerate() {
            if *e > 0 {
                t = t * mod_pow(point(i), *e as u64) % MOD_P;
            }
        }
        acc = (acc + t) % MOD_P;
    }
    acc
}

fn uni_gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>) -> Vec<u64> {
    fn trim(p: &mut Vec<u64>) {
        while p.last() == Some(&0) {
            p.pop();
        }
    }
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a mod b
        let inv = mod_inv(*b.last().unwrap());
        while a.len() >= b.len() {
            let f = a.last().unwrap() * inv % MOD_P;
            let shift = a.len() - b.len();
            for (j, bj) in b.iter().enumerate() {
                a[j + shift] = (a[j + shift] + MOD_P - f * bj % MOD_P) % MOD_P;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

// Degree of gcd of the images at a pseudo-random point, provided the
// leading coefficients survive (then it bounds the true degree).
fn modular_gcd_degree(a: &[MPoly], b: &[MPoly]) -> Option<u32> {
    for attempt in 0..3u64 {
        let point = move |i: usize| -> u64 {
            let x = (i as u64 + 1)
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add(attempt.wrapping_mul(0xBF58_476D_1CE4_E5B9));
            (x >> 17) % (MOD_P - 2) + 2
        };
        let ia: Vec<u64> = a.iter().map(|c| eval_mod(c, &point)).collect();
        let ib: Vec<u64> = b.iter().map(|c| eval_mod(c, &point)).collect();
        if *ia.last().unwrap() == 0 || *ib.last().unwrap() == 0 {
            continue;
        }
        let g = uni_gcd_mod(ia, ib);
        return Some(g.len().saturating_sub(1) as u32);
    }
    None
}

// ---------------------------------------------------------------------------
// Fraction field
// ---------------------------------------------------------------------------

/// Element of ℚ(vars) in lowest terms: gcd(num, den) = 1 over ℤ[vars] and the
/// leading coefficient of `den` is positive.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldElement {
    num: MPoly,
    den: MPoly,
}

impl Default for FieldElement {
    fn default() -> Self {
        FieldElement::zero()
    }
}

impl FieldElement {
    pub fn zero() -> FieldElement {
        FieldElement { num: MPoly::zero(), den: MPoly::one() }
    }

    pub fn one() -> FieldElement {
        FieldElement::from_int(1)
    }

    pub fn from_int(n: i64) -> FieldElement {
        FieldElement { num: MPoly::constant(BigInt::from(n)), den: MPoly::one() }
    }

    pub fn from_ratio(n: i64, d: i64) -> FieldElement {
        FieldElement::from_rational(&Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(r: &Rational) -> FieldElement {
        FieldElement {
            num: MPoly::constant(r.numer().clone()),
            den: MPoly::constant(r.denom().clone()),
        }
    }

    pub fn from_poly(p: MPoly) -> FieldElement {
        FieldElement { num: p, den: MPoly::one() }
    }

    /// Builds `num/den`, reducing to lowest terms.
    pub fn from_parts(num: MPoly, den: MPoly) -> Result<FieldElement, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(FieldElement::reduce(num, den))
    }

    fn reduce(num: MPoly, den: MPoly) -> FieldElement {
        if num.is_zero() {
            return FieldElement::zero();
        }
        let g = gcd(&num, &den);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        if d.lc().is_negative() {
            n = n.neg();
            d = d.neg();
        }
        FieldElement { num: n, den: d }
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_const() && self.den.is_const()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(Rational::new(self.num.const_value().unwrap(), self.den.const_value().unwrap()))
        } else {
            None
        }
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let (mut n, mut d) = (self.den.clone(), self.num.clone());
        if d.lc().is_negative() {
            n = n.neg();
            d = d.neg();
        }
        Ok(FieldElement { num: n, den: d })
    }

    pub fn try_div(&self, o: &FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul_ref(&o.inv()?))
    }

    pub fn pow(&self, k: i64) -> FieldElement {
        if k >= 0 {
            FieldElement { num: self.num.pow(k as u32), den: self.den.pow(k as u32) }
        } else {
            self.inv().expect("negative power of zero").pow(-k)
        }
    }

    fn add_ref(&self, o: &FieldElement) -> FieldElement {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            let n = self.num.add(&o.num);
            if self.den.is_one() {
                return FieldElement { num: n, den: MPoly::one() };
            }
            return FieldElement::reduce(n, self.den.clone());
        }
        if self.den.is_one() {
            return FieldElement { num: self.num.mul(&o.den).add(&o.num), den: o.den.clone() };
        }
        if o.den.is_one() {
            return FieldElement { num: o.num.mul(&self.den).add(&self.num), den: self.den.clone() };
        }
        // Henrici: with g = gcd(b, d), gcd(a d/g + c b/g, b d/g) = gcd(…, g).
        let g = gcd(&self.den, &o.den);
        if g.is_one() {
            let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
            return FieldElement::normalize_den(n, self.den.mul(&o.den));
        }
        let b_g = self.den.exact_div(&g).unwrap();
        let d_g = o.den.exact_div(&g).unwrap();
        let n = self.num.mul(&d_g).add(&o.num.mul(&b_g));
        if n.is_zero() {
            return FieldElement::zero();
        }
        let h = gcd(&n, &g);
        let den = self.den.mul(&d_g);
        if h.is_one() {
            FieldElement::normalize_den(n, den)
        } else {
            FieldElement::normalize_den(n.exact_div(&h).unwrap(), den.exact_div(&h).unwrap())
        }
    }

    fn normalize_den(n: MPoly, d: MPoly) -> FieldElement {
        if n.is_zero() {
            return FieldElement::zero();
        }
        if d.lc().is_negative() {
            FieldElement { num: n.neg(), den: d.neg() }
        } else {
            FieldElement { num: n, den: d }
        }
    }

    fn mul_ref(&self, o: &FieldElement) -> FieldElement {
        if self.is_zero() || o.is_zero() {
            return FieldElement::zero();
        }
        if self.is_one() {
            return o.clone();
        }
        if o.is_one() {
            return self.clone();
        }
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let n1 = if g1.is_one() { self.num.clone() } else { self.num.exact_div(&g1).unwrap() };
        let d2 = if g1.is_one() { o.den.clone() } else { o.den.exact_div(&g1).unwrap() };
        let n2 = if g2.is_one() { o.num.clone() } else { o.num.exact_div(&g2).unwrap() };
        let d1 = if g2.is_one() { self.den.clone() } else { self.den.exact_div(&g2).unwrap() };
        FieldElement::normalize_den(n1.mul(&n2), d1.mul(&d2))
    }

    /// Replaces indeterminates by field elements.
    pub fn substitute(&self, bindings: &HashMap<Var, FieldElement>) -> Result<FieldElement, FieldError> {
        let n = subst_poly(&self.num, bindings);
        let d = subst_poly(&self.den, bindings);
        if d.is_zero() {
            return Err(FieldError::Pole);
        }
        Ok(n.try_div(&d)?)
    }

    /// Numerical value; errors with [`FieldError::Pole`] when the denominator
    /// is below `POLE_TOL` relative to the size of its terms.
    pub fn eval_complex(&self, bindings: &HashMap<Var, C64>) -> Result<C64, FieldError> {
        let vals = binding_vec(bindings);
        let (d, scale) = self.den.eval_complex(&vals)?;
        if d.norm() <= POLE_TOL * scale.max(1e-300) {
            return Err(FieldError::Pole);
        }
        let (n, _) = self.num.eval_complex(&vals)?;
        Ok(n / d)
    }

    pub fn eval_rational(&self, bindings: &HashMap<Var, Rational>) -> Result<Rational, FieldError> {
        let d = self.den.eval_rational(bindings)?;
        if d.is_zero() {
            return Err(FieldError::Pole);
        }
        Ok(self.num.eval_rational(bindings)? / d)
    }

    /// Adams operation: every indeterminate x is replaced by x^k.
    pub fn adams(&self, k: u32) -> FieldElement {
        if k == 1 || self.is_constant() {
            return self.clone();
        }
        let f = |p: &MPoly| MPoly {
            terms: p.terms.iter().map(|(m, c)| (m.pow(k), c.clone())).collect(),
        };
        FieldElement::reduce(f(&self.num), f(&self.den))
    }

    /// Multiplies by a rational constant.
    pub fn scale(&self, r: &Rational) -> FieldElement {
        if r.is_zero() || self.is_zero() {
            return FieldElement::zero();
        }
        let n = r.numer();
        let d = r.denom();
        let gn = self.den.int_content().gcd(n);
        let gd = self.num.int_content().gcd(d);
        let num = self.num.div_int(&gd).scale(&(n / &gn));
        let den = self.den.div_int(&gn).scale(&(d / &gd));
        FieldElement::normalize_den(num, den)
    }

    /// True if the element does not involve `v`.
    pub fn free_of(&self, v: Var) -> bool {
        self.num.degree_in(v.0) == 0 && self.den.degree_in(v.0) == 0
    }
}

fn binding_vec(bindings: &HashMap<Var, C64>) -> Vec<Option<C64>> {
    let n = bindings.keys().map(|v| v.0 + 1).max().unwrap_or(0);
    let mut vals = vec![None; n];
    for (v, x) in bindings {
        vals[v.0] = Some(*x);
    }
    vals
}

fn subst_poly(p: &MPoly, bindings: &HashMap<Var, FieldElement>) -> FieldElement {
    let mut cache: HashMap<(usize, u32), FieldElement> = HashMap::new();
    let mut acc = FieldElement::zero();
    for (m, c) in &p.terms {
        let mut kept = Mono::one();
        let mut factor = FieldElement::from_poly(MPoly::constant(c.clone()));
        for (i, e) in m.0.iter().enumerate() {
            if *e == 0 {
                continue;
            }
            match bindings.get(&Var(i)) {
                Some(val) => {
                    let pw = cache.entry((i, *e)).or_insert_with(|| val.pow(*e as i64)).clone();
                    factor = factor * pw;
                }
                None => kept = kept.mul(&Mono::var(Var(i), *e)),
            }
        }
        acc = acc + factor * FieldElement::from_poly(MPoly::term(kept, BigInt::one()));
    }
    acc
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            let n = if self.num.len() > 1 { format!("({})", self.num) } else { self.num.to_string() };
            let d = if self.den.len() > 1 { format!("({})", self.den) } else { self.den.to_string() };
            write!(f, "{}/{}", n, d)
        }
    }
}

macro_rules! impl_bin {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $m(self, o: &FieldElement) -> FieldElement {
                self.$f(o)
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: FieldElement) -> FieldElement {
                (&self).$f(&o)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: &FieldElement) -> FieldElement {
                (&self).$f(o)
            }
        }
        impl $tr<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $m(self, o: FieldElement) -> FieldElement {
                self.$f(&o)
            }
        }
    };
}

impl FieldElement {
    fn sub_ref(&self, o: &FieldElement) -> FieldElement {
        self.add_ref(&o.neg_ref())
    }
    fn div_ref(&self, o: &FieldElement) -> FieldElement {
        self.try_div(o).expect("division by zero FieldElement")
    }
    fn neg_ref(&self) -> FieldElement {
        FieldElement { num: self.num.neg(), den: self.den.clone() }
    }
}

impl_bin!(Add, add, add_ref);
impl_bin!(Sub, sub, sub_ref);
impl_bin!(Mul, mul, mul_ref);
impl_bin!(Div, div, div_ref);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

impl From<i64> for FieldElement {
    fn from(n: i64) -> Self {
        FieldElement::from_int(n)
    }
}

impl std::iter::Sum for FieldElement {
    fn sum<I: Iterator<Item = FieldElement>>(iter: I) -> Self {
        iter.fold(FieldElement::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for FieldElement {
    fn product<I: Iterator<Item = FieldElement>>(iter: I) -> Self {
        iter.fold(FieldElement::one(), |a, b| a * b)
    }
}

/// Bindings helper: `bind(&[("q", 0.3), ("t", 0.4)])`.
pub fn bind(pairs: &[(&str, C64)]) -> HashMap<Var, C64> {
    pairs.iter().map(|(n, x)| (Var::new(n), *x)).collect()
}
