//! Polynomials in alphabet letters with coefficients in the rational
//! function field, truncated by total letter degree.
//!
//! Letters are ordinary registered indeterminates, but they live in the
//! monomial keys of a [`Series`] instead of inside the [`FieldElement`]
//! coefficients. This keeps GCD work confined to the parameters (q, t, a, …)
//! and makes degree truncation for countable alphabets explicit.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_complex::Complex64 as C64;

use crate::field::{FieldElement, FieldError, Mono, Rational, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    terms: BTreeMap<Mono, FieldElement>,
    cap: Option<u32>,
}

impl Series {
    pub fn zero(cap: Option<u32>) -> Series {
        Series { terms: BTreeMap::new(), cap }
    }

    pub fn constant(c: FieldElement, cap: Option<u32>) -> Series {
        let mut s = Series::zero(cap);
        if !c.is_zero() {
            s.terms.insert(Mono::one(), c);
        }
        s
    }

    pub fn one(cap: Option<u32>) -> Series {
        Series::constant(FieldElement::one(), cap)
    }

    pub fn letter(v: Var, cap: Option<u32>) -> Series {
        Series::monomial(Mono::var(v, 1), FieldElement::one(), cap)
    }

    pub fn monomial(m: Mono, c: FieldElement, cap: Option<u32>) -> Series {
        let mut s = Series::zero(cap);
        if !c.is_zero() && cap.is_none_or(|k| m.total_degree() <= k) {
            s.terms.insert(m, c);
        }
        s
    }

    /// Sum of the given letters.
    pub fn letters(vs: &[Var], cap: Option<u32>) -> Series {
        let mut s = Series::zero(cap);
        for v in vs {
            s = s.add(&Series::letter(*v, cap));
        }
        s
    }

    pub fn cap(&self) -> Option<u32> {
        self.cap
    }

    pub fn terms(&self) -> &BTreeMap<Mono, FieldElement> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> FieldElement {
        self.terms.get(m).cloned().unwrap_or_else(FieldElement::zero)
    }

    pub fn constant_term(&self) -> FieldElement {
        self.coeff(&Mono::one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    fn join_cap(a: Option<u32>, b: Option<u32>) -> Option<u32> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    pub fn with_cap(mut self, cap: Option<u32>) -> Series {
        self.cap = Series::join_cap(self.cap, cap);
        if let Some(k) = self.cap {
            self.terms.retain(|m, _| m.total_degree() <= k);
        }
        self
    }

    pub fn add(&self, o: &Series) -> Series {
        let cap = Series::join_cap(self.cap, o.cap);
        let (big, small) = if self.terms.len() >= o.terms.len() { (self, o) } else { (o, self) };
        let mut terms = big.terms.clone();
        for (m, c) in &small.terms {
            match terms.get_mut(m) {
                Some(e) => {
                    *e = &*e + c;
                    if e.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        Series { terms, cap }.with_cap(None)
    }

    pub fn neg(&self) -> Series {
        Series { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(), cap: self.cap }
    }

    pub fn sub(&self, o: &Series) -> Series {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &FieldElement) -> Series {
        if c.is_zero() {
            return Series::zero(self.cap);
        }
        Series { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(), cap: self.cap }
    }

    pub fn scale_rational(&self, r: &Rational) -> Series {
        let terms: BTreeMap<_, _> = self
            .terms
            .iter()
            .map(|(m, x)| (m.clone(), x.scale(r)))
            .filter(|(_, x)| !x.is_zero())
            .collect();
        Series { terms, cap: self.cap }
    }

    pub fn mul(&self, o: &Series) -> Series {
        let cap = Series::join_cap(self.cap, o.cap);
        if self.is_constant() {
            return o.scale(&self.constant_term()).with_cap(cap);
        }
        if o.is_constant() {
            return self.scale(&o.constant_term()).with_cap(cap);
        }
        let mut acc: HashMap<Mono, Vec<FieldElement>> = HashMap::new();
        for (ma, ca) in &self.terms {
            let da = ma.total_degree();
            if cap.is_some_and(|k| da > k) {
                continue;
            }
            for (mb, cb) in &o.terms {
                if cap.is_some_and(|k| da + mb.total_degree() > k) {
                    continue;
                }
                acc.entry(ma.mul(mb)).or_default().push(ca * cb);
            }
        }
        let terms = acc
            .into_iter()
            .map(|(m, cs)| (m, sum_fe(cs)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Series { terms, cap }
    }

    pub fn pow(&self, k: u32) -> Series {
        let mut r = Series::one(self.cap);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Adams operation ψ_k: letters and parameters raised to the k-th power,
    /// rational constants fixed.
    pub fn adams(&self, k: u32) -> Series {
        let mut s = Series::zero(self.cap);
        for (m, c) in &self.terms {
            let mk = m.pow(k);
            if self.cap.is_some_and(|cap| mk.total_degree() > cap) {
                continue;
            }
            s.terms.insert(mk, c.adams(k));
        }
        s
    }

    /// Inverse of a series with invertible constant term, to the cap.
    pub fn inv(&self) -> Result<Series, FieldError> {
        let c0 = self.constant_term();
        let cap = self.cap.ok_or(FieldError::DivisionByZero)?;
        let c0i = c0.inv()?;
        // 1/(c0 (1 + r)) = c0⁻¹ Σ (−r)^j
        let r = self.scale(&c0i).sub(&Series::one(self.cap));
        let mut out = Series::one(self.cap);
        let mut pw = Series::one(self.cap);
        for _ in 0..cap {
            pw = pw.mul(&r.neg());
            if pw.is_zero() {
                break;
            }
            out = out.add(&pw);
        }
        Ok(out.scale(&c0i))
    }

    /// Exponential of a series with zero constant term, to the cap.
    pub fn exp(&self) -> Series {
        let cap = self.cap.expect("exp requires a degree cap");
        let mut out = Series::one(self.cap);
        let mut term = Series::one(self.cap);
        for j in 1..=cap {
            term = term.mul(self).scale_rational(&Rational::new(1.into(), (j as i64).into()));
            if term.is_zero() {
                break;
            }
            out = out.add(&term);
        }
        out
    }

    /// Part of exact total letter degree `d`.
    pub fn homogeneous(&self, d: u32) -> Series {
        Series {
            terms: self.terms.iter().filter(|(m, _)| m.total_degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
            cap: self.cap,
        }
    }

    /// Degree in a single letter.
    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v.0)).max().unwrap_or(0)
    }

    /// Coefficients with respect to one letter: entry j is the coefficient of v^j.
    pub fn split_letter(&self, v: Var) -> Vec<Series> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![Series::zero(self.cap); d + 1];
        for (m, c) in &self.terms {
            let e = m.exp(v.0);
            let mut ex = m.exponents().to_vec();
            if e > 0 {
                ex[v.0] = 0;
            }
            out[e as usize].terms.insert(Mono::from_exponents(&ex), c.clone());
        }
        out
    }

    /// Substitutes letters by field elements (e.g. all letters to 1).
    pub fn eval_letters(&self, vals: &HashMap<Var, FieldElement>) -> Series {
        let mut out = Series::zero(self.cap);
        for (m, c) in &self.terms {
            let mut kept = Vec::from(m.exponents());
            let mut f = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if let Some(x) = vals.get(&Var(i)) {
                    f = f * x.pow(e as i64);
                    kept[i] = 0;
                }
            }
            out = out.add(&Series::monomial(Mono::from_exponents(&kept), f, self.cap));
        }
        out
    }

    /// Numerical value with letters and parameters bound.
    pub fn eval_complex(&self, bindings: &HashMap<Var, C64>) -> Result<C64, FieldError> {
        let mut s = C64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut v = c.eval_complex(bindings)?;
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    let x = bindings.get(&Var(i)).ok_or_else(|| FieldError::Unbound(Var(i).name()))?;
                    v *= x.powu(e);
                }
            }
            s += v;
        }
        Ok(s)
    }
}

/// Sums field elements, grouping equal denominators first.
pub fn sum_fe(cs: Vec<FieldElement>) -> FieldElement {
    if cs.len() == 1 {
        return cs.into_iter().next().unwrap();
    }
    let mut groups: Vec<(crate::field::MPoly, crate::field::MPoly)> = Vec::new();
    for c in cs {
        if c.is_zero() {
            continue;
        }
        match groups.iter_mut().find(|(_, d)| d == c.den()) {
            Some(g) => g.0 = g.0.add(c.num()),
            None => groups.push((c.num().clone(), c.den().clone())),
        }
    }
    groups
        .into_iter()
        .map(|(n, d)| FieldElement::from_parts(n, d).unwrap())
        .sum()
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let mut letters = Vec::new();
                for (i, &e) in m.exponents().iter().enumerate() {
                    match e {
                        0 => {}
                        1 => letters.push(Var(i).name()),
                        _ => letters.push(format!("{}^{}", Var(i).name(), e)),
                    }
                }
                if letters.is_empty() {
                    format!("({})", c)
                } else {
                    format!("({})*{}", c, letters.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::var;

    #[test]
    fn truncated_geometric_inverse() {
        let x = Var::new("x1");
        let s = Series::one(Some(5)).sub(&Series::letter(x, Some(5)));
        let inv = s.inv().unwrap();
        for j in 0..=5 {
            assert!(inv.coeff(&Mono::var(x, j)).is_one());
        }
        assert!(inv.mul(&s).sub(&Series::one(Some(5))).is_zero());
    }

    #[test]
    fn adams_raises_letters_and_parameters() {
        let x = Var::new("x1");
        let s = Series::letter(x, None).scale(&var("q"));
        let a = s.adams(3);
        assert_eq!(a.coeff(&Mono::var(x, 3)), var("q").pow(3));
    }

    #[test]
    fn exp_of_log_series() {
        // exp(Σ x^k/k) = 1/(1−x)
        let x = Var::new("x1");
        let cap = Some(6);
        let mut psi = Series::zero(cap);
        for k in 1..=6i64 {
            psi = psi.add(&Series::monomial(Mono::var(x, k as u32), FieldElement::from_ratio(1, k), cap));
        }
        let e = psi.exp();
        let g = Series::one(cap).sub(&Series::letter(x, cap)).inv().unwrap();
        assert_eq!(e, g);
    }
}
