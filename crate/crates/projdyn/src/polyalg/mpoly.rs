//! General sparse multivariate polynomials over Q(i).
//!
//! Terms are kept in a `BTreeMap` from exponent vectors to nonzero
//! coefficients; the map order is plain lexicographic, while leading-term
//! queries use graded lexicographic order explicitly.

use super::GaussianRational;
use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, GaussianRational>,
}

/// Graded lexicographic comparison of exponent vectors of equal length.
pub fn cmp_grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GaussianRational::one())
    }

    pub fn variable(nvars: usize, index: usize) -> Self {
        assert!(index < nvars);
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        Self::monomial(nvars, exps, GaussianRational::one())
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, c: GaussianRational) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms<I>(nvars: usize, it: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, GaussianRational)>,
    {
        let mut p = MPoly::zero(nvars);
        for (e, c) in it {
            p.add_term(&e, &c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_value(&self) -> Option<&GaussianRational> {
        if self.is_zero() {
            return None;
        }
        self.terms.get(vec![0u32; self.nvars].as_slice())
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
    }

    /// `Some(d)` if every term has total degree `d` (zero counts as homogeneous
    /// of indeterminate degree and returns `None`-degree via `is_zero`).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = it.next()?;
        if it.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Variables that actually occur.
    pub fn active_vars(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&v| self.terms.keys().any(|e| e[v] > 0))
            .collect()
    }

    fn add_term(&mut self, exps: &[u32], c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(exps) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(exps);
                }
            }
            None => {
                self.terms.insert(exps.to_vec(), c.clone());
            }
        }
    }

    pub fn add(&self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn sub(&self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e, &(-c));
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c);
        }
        out
    }

    pub fn mul(&self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MPoly::zero(self.nvars);
        let mut buf = vec![0u32; self.nvars];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                for i in 0..self.nvars {
                    buf[i] = ea[i] + eb[i];
                }
                out.add_term(&buf, &(ca * cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        let mut out = MPoly::zero(self.nvars);
        for (e, a) in &self.terms {
            out.terms.insert(e.clone(), a * c);
        }
        out
    }

    pub fn mul_monomial(&self, exps: &[u32], c: &GaussianRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        let mut out = MPoly::zero(self.nvars);
        for (e, a) in &self.terms {
            let ne: Vec<u32> = e.iter().zip(exps).map(|(x, y)| x + y).collect();
            out.terms.insert(ne, a * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Leading term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Vec<u32>, &GaussianRational)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| cmp_grlex(a, b))
    }

    /// Divide by the graded-lex leading coefficient.
    pub fn monic(&self) -> MPoly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, lc)) => {
                let inv = lc.inverse().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Exact division; `None` when the division does not come out even.
    /// Zero divides exactly zero.
    pub fn exact_div(&self, divisor: &MPoly) -> Option<MPoly> {
        assert_eq!(self.nvars, divisor.nvars);
        if divisor.is_zero() {
            return self.is_zero().then(|| MPoly::zero(self.nvars));
        }
        if self.is_zero() {
            return Some(MPoly::zero(self.nvars));
        }
        let (dlt, dlc) = divisor.leading_term().map(|(e, c)| (e.clone(), c.clone()))?;
        let dlc_inv = dlc.inverse()?;
        let mut rem = self.clone();
        let mut quo = MPoly::zero(self.nvars);
        while !rem.is_zero() {
            let (rlt, rlc) = {
                let (e, c) = rem.leading_term().unwrap();
                (e.clone(), c.clone())
            };
            let mut q = vec![0u32; self.nvars];
            for i in 0..self.nvars {
                if rlt[i] < dlt[i] {
                    return None;
                }
                q[i] = rlt[i] - dlt[i];
            }
            let qc = &rlc * &dlc_inv;
            quo.add_term(&q, &qc);
            rem = rem.sub(&divisor.mul_monomial(&q, &qc));
        }
        Some(quo)
    }

    pub fn divides(&self, other: &MPoly) -> bool {
        other.exact_div(self).is_some()
    }

    /// Componentwise minimum of all exponent vectors: the largest monomial
    /// dividing every term. Zero polynomial yields all-zero exponents.
    pub fn monomial_content(&self) -> Vec<u32> {
        let mut m = vec![u32::MAX; self.nvars];
        for e in self.terms.keys() {
            for i in 0..self.nvars {
                m[i] = m[i].min(e[i]);
            }
        }
        if self.terms.is_empty() {
            m.fill(0);
        }
        m
    }

    pub fn div_monomial(&self, exps: &[u32]) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let ne: Vec<u32> = e
                .iter()
                .zip(exps)
                .map(|(x, y)| x.checked_sub(*y).expect("monomial divides"))
                .collect();
            out.terms.insert(ne, c.clone());
        }
        out
    }

    /// Coefficients with respect to one variable: index `j` holds the
    /// coefficient of `var^j` as a polynomial in the remaining variables
    /// (same variable space, exponent zeroed).
    pub fn coeffs_wrt(&self, var: usize) -> Vec<MPoly> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![MPoly::zero(self.nvars); d + 1];
        for (e, c) in &self.terms {
            let j = e[var] as usize;
            let mut ne = e.clone();
            ne[var] = 0;
            out[j].add_term(&ne, c);
        }
        out
    }

    /// Rebuild from coefficients with respect to `var`.
    pub fn from_coeffs_wrt(var: usize, coeffs: &[MPoly]) -> MPoly {
        assert!(!coeffs.is_empty());
        let nvars = coeffs[0].nvars;
        let mut out = MPoly::zero(nvars);
        for (j, c) in coeffs.iter().enumerate() {
            for (e, a) in &c.terms {
                let mut ne = e.clone();
                ne[var] += j as u32;
                out.add_term(&ne, a);
            }
        }
        out
    }

    pub fn derivative(&self, var: usize) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[var] -= 1;
            let factor = GaussianRational::from_int(e[var] as i64);
            out.add_term(&ne, &(c * &factor));
        }
        out
    }

    /// Substitute `vals[i]` for variable `i`. All `vals` share a variable
    /// space, which becomes the output's.
    pub fn substitute(&self, vals: &[MPoly]) -> MPoly {
        assert_eq!(vals.len(), self.nvars);
        let out_nvars = vals.first().map(|p| p.nvars).unwrap_or(0);
        let mut cache: Vec<Vec<MPoly>> = (0..self.nvars)
            .map(|i| vec![MPoly::one(out_nvars), vals[i].clone()])
            .collect();
        let power = |i: usize, e: u32, cache: &mut Vec<Vec<MPoly>>| -> MPoly {
            while cache[i].len() <= e as usize {
                let last = cache[i].last().unwrap().clone();
                cache[i].push(last.mul(&vals[i]));
            }
            cache[i][e as usize].clone()
        };
        let mut out = MPoly::zero(out_nvars);
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(out_nvars, c.clone());
            for i in 0..self.nvars {
                if e[i] > 0 {
                    term = term.mul(&power(i, e[i], &mut cache));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Set variable `var` to 1, keeping the variable space aligned.
    pub fn dehomogenize(&self, var: usize) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            ne[var] = 0;
            out.add_term(&ne, c);
        }
        out
    }

    /// Remove a variable that no longer occurs, shrinking the variable space.
    pub fn drop_var(&self, var: usize) -> MPoly {
        let mut out = MPoly::zero(self.nvars - 1);
        for (e, c) in &self.terms {
            assert_eq!(e[var], 0, "dropped variable still occurs");
            let ne: Vec<u32> = e
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != var)
                .map(|(_, &x)| x)
                .collect();
            out.add_term(&ne, c);
        }
        out
    }

    /// Exact linear change of coordinates z_i = sum_j m[i][j] * y_j.
    pub fn linear_change(&self, m: &[Vec<GaussianRational>]) -> MPoly {
        assert_eq!(m.len(), self.nvars);
        let forms: Vec<MPoly> = m
            .iter()
            .map(|row| {
                let mut f = MPoly::zero(self.nvars);
                for (j, c) in row.iter().enumerate() {
                    let mut e = vec![0; self.nvars];
                    e[j] = 1;
                    f.add_term(&e, c);
                }
                f
            })
            .collect();
        self.substitute(&forms)
    }

    pub fn eval_exact(&self, z: &[GaussianRational]) -> GaussianRational {
        assert_eq!(z.len(), self.nvars);
        let mut acc = GaussianRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..self.nvars {
                if e[i] > 0 {
                    t = &t * &z[i].pow(e[i]);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Evaluation in complex double precision with per-variable power tables.
    pub fn eval_complex(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.nvars);
        let max_e: Vec<u32> = (0..self.nvars).map(|v| self.degree_in(v)).collect();
        let tables: Vec<Vec<Complex64>> = (0..self.nvars)
            .map(|v| {
                let mut t = Vec::with_capacity(max_e[v] as usize + 1);
                t.push(Complex64::new(1.0, 0.0));
                for j in 1..=max_e[v] as usize {
                    let prev = t[j - 1];
                    t.push(prev * z[v]);
                }
                t
            })
            .collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = c.to_complex();
            for i in 0..self.nvars {
                if e[i] > 0 {
                    t *= tables[i][e[i] as usize];
                }
            }
            acc += t;
        }
        acc
    }

    /// Single-term polynomials: the exponent vector and coefficient.
    pub fn as_monomial(&self) -> Option<(&Vec<u32>, &GaussianRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Render with the given variable names; output re-parses to the same
    /// polynomial under the text grammar.
    pub fn render(&self, vars: &[&str]) -> String {
        assert_eq!(vars.len(), self.nvars);
        if self.is_zero() {
            return "0".to_string();
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| cmp_grlex(b, a));
        let mut out = String::new();
        for (idx, e) in keys.iter().enumerate() {
            let c = &self.terms[*e];
            let mut factors: Vec<String> = Vec::new();
            for (i, &ex) in e.iter().enumerate() {
                if ex == 1 {
                    factors.push(vars[i].to_string());
                } else if ex > 1 {
                    factors.push(format!("{}^{}", vars[i], ex));
                }
            }
            let (lead, coeff_str) = render_coeff(c, !factors.is_empty());
            if idx == 0 {
                if lead == '-' {
                    out.push('-');
                }
            } else {
                out.push_str(if lead == '-' { " - " } else { " + " });
            }
            let mut pieces: Vec<String> = Vec::new();
            if let Some(cs) = coeff_str {
                pieces.push(cs);
            }
            pieces.extend(factors);
            out.push_str(&pieces.join("*"));
        }
        out
    }
}

/// Returns (sign to hoist into the term join, optional coefficient text).
fn render_coeff(c: &GaussianRational, has_vars: bool) -> (char, Option<String>) {
    use num_traits::Signed;
    if c.is_real() {
        let r = c.re();
        let neg = r.is_negative();
        let abs = r.abs();
        let txt = if abs.denom() == &num_bigint::BigInt::from(1) {
            format!("{}", abs.numer())
        } else {
            format!("{}/{}", abs.numer(), abs.denom())
        };
        if has_vars && txt == "1" {
            (if neg { '-' } else { '+' }, None)
        } else {
            (if neg { '-' } else { '+' }, Some(txt))
        }
    } else {
        // Properly complex coefficients render parenthesized, sign inside.
        ('+', Some(format!("{c}")))
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", self.render(&refs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(i: usize) -> MPoly {
        MPoly::variable(3, i)
    }

    #[test]
    fn arithmetic_and_degrees() {
        let p = var(0).mul(&var(1)).add(&var(2).pow(2)); // x0*x1 + x2^2
        assert_eq!(p.total_degree(), Some(2));
        assert_eq!(p.homogeneous_degree(), Some(2));
        let q = p.sub(&p);
        assert!(q.is_zero());
        assert_eq!(q.total_degree(), None);
    }

    #[test]
    fn exact_division() {
        let p = var(0).pow(2).sub(&var(1).pow(2)); // x0^2 - x1^2
        let d = var(0).sub(&var(1));
        let q = p.exact_div(&d).unwrap();
        assert_eq!(q, var(0).add(&var(1)));
        assert!(var(2).exact_div(&d).is_none());
    }

    #[test]
    fn euler_identity_for_homogeneous() {
        // sum_i x_i * dp/dx_i = deg(p) * p
        let p = var(0).pow(3).add(&var(1).mul(&var(2)).mul(&var(0)));
        let mut acc = MPoly::zero(3);
        for i in 0..3 {
            acc = acc.add(&var(i).mul(&p.derivative(i)));
        }
        assert_eq!(acc, p.scale(&GaussianRational::from_int(3)));
    }

    #[test]
    fn substitution_composes() {
        // p = x0^2, substitute x0 = x1 + x2
        let p = MPoly::variable(1, 0).pow(2);
        let s = MPoly::variable(2, 0).add(&MPoly::variable(2, 1));
        let q = p.substitute(&[s.clone()]);
        assert_eq!(q, s.mul(&s));
    }

    #[test]
    fn render_roundtrip_basics() {
        let p = var(0)
            .pow(2)
            .scale(&GaussianRational::from_ratio(-1, 2))
            .add(&var(1).mul(&var(2)).scale(&GaussianRational::i()));
        let text = p.render(&["t", "z", "w"]);
        let back = super::super::parse(&text, &["t", "z", "w"]).unwrap();
        assert_eq!(back.as_mpoly(), &p);
    }
}
