//! Modular coprimality filter.
//!
//! Coefficients map to F_p² = F_p[i] with p = 2^31 - 1 (p ≡ 3 mod 4, so
//! x² + 1 stays irreducible), polynomials restrict to a line, and a unit
//! univariate GCD mod p soundly certifies that the inputs are coprime over
//! Q(i): any nonconstant common factor would survive both the restriction
//! (for a non-degenerate line) and the reduction. The filter never decides
//! the other direction — an inconclusive result falls back to the exact GCD.

use super::{GaussianRational, MPoly};
use crate::rng::SplitMix64;
use num_bigint::BigInt;
use num_traits::ToPrimitive;

const P: u64 = 2_147_483_647; // 2^31 - 1

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Fp2 {
    re: u64,
    im: u64,
}

const ZERO: Fp2 = Fp2 { re: 0, im: 0 };
const ONE: Fp2 = Fp2 { re: 1, im: 0 };

fn addp(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn subp(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn mulp(a: u64, b: u64) -> u64 {
    a * b % P
}

fn powp(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulp(acc, a);
        }
        a = mulp(a, a);
        e >>= 1;
    }
    acc
}

fn invp(a: u64) -> Option<u64> {
    if a == 0 {
        None
    } else {
        Some(powp(a, P - 2))
    }
}

impl Fp2 {
    fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    fn add(self, o: Fp2) -> Fp2 {
        Fp2 {
            re: addp(self.re, o.re),
            im: addp(self.im, o.im),
        }
    }

    fn mul(self, o: Fp2) -> Fp2 {
        Fp2 {
            re: subp(mulp(self.re, o.re), mulp(self.im, o.im)),
            im: addp(mulp(self.re, o.im), mulp(self.im, o.re)),
        }
    }

    fn inv(self) -> Option<Fp2> {
        // 1/(a+bi) = (a-bi)/(a²+b²); the norm is zero only for 0 since
        // -1 is a non-residue mod p.
        let n = addp(mulp(self.re, self.re), mulp(self.im, self.im));
        let ninv = invp(n)?;
        Some(Fp2 {
            re: mulp(self.re, ninv),
            im: mulp(subp(0, self.im) % P, ninv),
        })
    }

    fn neg(self) -> Fp2 {
        Fp2 {
            re: subp(0, self.re),
            im: subp(0, self.im),
        }
    }
}

fn bigint_mod(n: &BigInt) -> u64 {
    let m = n % BigInt::from(P);
    let m = if m < BigInt::from(0) { m + BigInt::from(P) } else { m };
    m.to_u64().unwrap()
}

/// `None` when a denominator vanishes mod p (inconclusive).
fn coeff_mod(c: &GaussianRational) -> Option<Fp2> {
    let part = |r: &num_rational::BigRational| -> Option<u64> {
        let den = bigint_mod(r.denom());
        Some(mulp(bigint_mod(r.numer()), invp(den)?))
    };
    Some(Fp2 {
        re: part(c.re())?,
        im: part(c.im())?,
    })
}

/// Restrict `p` to the affine line z_i = a_i + b_i s and reduce mod p:
/// dense univariate coefficients in s. `None` if any coefficient is
/// inconclusive mod p.
fn restrict_mod(poly: &MPoly, a: &[Fp2], b: &[Fp2]) -> Option<Vec<Fp2>> {
    let deg = poly.total_degree().unwrap_or(0) as usize;
    let nvars = poly.nvars();
    // Power tables of (a_i + b_i s) as dense univariate coefficient vectors.
    let max_e: Vec<u32> = (0..nvars).map(|v| poly.degree_in(v)).collect();
    let mut tables: Vec<Vec<Vec<Fp2>>> = Vec::with_capacity(nvars);
    for v in 0..nvars {
        let mut t = vec![vec![ONE]];
        for e in 1..=max_e[v] as usize {
            let prev = &t[e - 1];
            let mut next = vec![ZERO; e + 1];
            for (j, &c) in prev.iter().enumerate() {
                next[j] = next[j].add(c.mul(a[v]));
                next[j + 1] = next[j + 1].add(c.mul(b[v]));
            }
            t.push(next);
        }
        tables.push(t);
    }
    let mut out = vec![ZERO; deg + 1];
    for (e, c) in poly.terms() {
        let mut term = vec![coeff_mod(c)?];
        for v in 0..nvars {
            if e[v] > 0 {
                term = mul_dense(&term, &tables[v][e[v] as usize]);
            }
        }
        for (j, &t) in term.iter().enumerate() {
            out[j] = out[j].add(t);
        }
    }
    Some(out)
}

fn mul_dense(a: &[Fp2], b: &[Fp2]) -> Vec<Fp2> {
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(x.mul(y));
        }
    }
    out
}

fn trim(mut v: Vec<Fp2>) -> Vec<Fp2> {
    while v.last().is_some_and(Fp2::is_zero) {
        v.pop();
    }
    v
}

fn gcd_mod(mut f: Vec<Fp2>, mut g: Vec<Fp2>) -> Vec<Fp2> {
    loop {
        f = trim(f);
        g = trim(g);
        if g.is_empty() {
            return f;
        }
        if f.len() < g.len() {
            std::mem::swap(&mut f, &mut g);
            continue;
        }
        // f mod g
        let lg_inv = g.last().unwrap().inv().expect("trimmed leading");
        while f.len() >= g.len() && !f.is_empty() {
            let shift = f.len() - g.len();
            let c = f.last().unwrap().mul(lg_inv);
            for (j, &gc) in g.iter().enumerate() {
                let t = c.mul(gc).neg();
                f[shift + j] = f[shift + j].add(t);
            }
            f = trim(f);
        }
        std::mem::swap(&mut f, &mut g);
    }
}

/// Sound squarefree certificate: a unit gcd(f, f') over F_p² proves f is
/// squarefree over Q(i). `false` is inconclusive.
pub fn certified_squarefree_mod(f: &super::RatPoly) -> bool {
    let coeffs: Option<Vec<Fp2>> = f.coeffs().iter().map(coeff_mod).collect();
    let Some(coeffs) = coeffs else { return false };
    let cs = trim(coeffs);
    if cs.len() != f.coeffs().len() {
        return false; // leading coefficient vanished mod p: inconclusive
    }
    if cs.len() <= 2 {
        return true;
    }
    let deriv: Vec<Fp2> = cs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c.mul(Fp2 { re: (k as u64) % P, im: 0 }))
        .collect();
    gcd_mod(cs, deriv).len() == 1
}

/// Sound one-sided coprimality certificate for a family of polynomials:
/// `true` guarantees the family has no common factor of positive degree.
/// `false` means "inconclusive" — the caller must decide exactly.
pub fn certified_coprime_mod(polys: &[&MPoly]) -> bool {
    if polys.len() < 2 {
        return false;
    }
    let nvars = polys[0].nvars();
    let degrees: Vec<usize> = polys
        .iter()
        .map(|p| p.total_degree().unwrap_or(0) as usize)
        .collect();
    let mut rng = SplitMix64::new(0x10df_17e5);
    for _try in 0..4 {
        let a: Vec<Fp2> = (0..nvars)
            .map(|_| Fp2 {
                re: rng.next_range(P - 1) + 1,
                im: rng.next_range(P),
            })
            .collect();
        let b: Vec<Fp2> = (0..nvars)
            .map(|_| Fp2 {
                re: rng.next_range(P - 1) + 1,
                im: rng.next_range(P),
            })
            .collect();
        let mut restrictions = Vec::with_capacity(polys.len());
        let mut ok = true;
        for (p, &d) in polys.iter().zip(&degrees) {
            match restrict_mod(p, &a, &b) {
                Some(r) => {
                    let r = trim(r);
                    // A degree drop (bad line or bad prime) is inconclusive.
                    if r.len() != d + 1 {
                        ok = false;
                        break;
                    }
                    restrictions.push(r);
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let mut g = restrictions[0].clone();
        for r in &restrictions[1..] {
            g = gcd_mod(g, r.clone());
            if g.len() == 1 {
                return true;
            }
        }
        if g.len() == 1 {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certifies_random_coprime_pairs() {
        let z = MPoly::variable(3, 0);
        let w = MPoly::variable(3, 1);
        let t = MPoly::variable(3, 2);
        let p = z.pow(3).add(&w.mul(&t).mul(&z)).add(&t.pow(3));
        let q = w.pow(2).sub(&z.mul(&t));
        assert!(certified_coprime_mod(&[&p, &q]));
    }

    #[test]
    fn never_certifies_common_factor() {
        let z = MPoly::variable(3, 0);
        let w = MPoly::variable(3, 1);
        let g = z.add(&w);
        let p = g.mul(&z.pow(2));
        let q = g.mul(&w.pow(2).sub(&z.mul(&w)));
        assert!(!certified_coprime_mod(&[&p, &q]));
    }
}
