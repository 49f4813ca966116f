//! Gaussian integer polynomial kernels.
//!
//! Rational univariate GCDs and scalar resultants clear denominators and
//! run here: fraction-free arithmetic keeps coefficient growth linear per
//! elimination step where naive field remainders square it.

use num_bigint::BigInt;
use num_traits::Zero;

/// A Gaussian integer a + bi.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    pub fn zero() -> Self {
        GaussInt {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    pub fn one() -> Self {
        GaussInt {
            re: BigInt::from(1),
            im: BigInt::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn mul(&self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn sub(&self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    pub fn neg(&self) -> GaussInt {
        GaussInt {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Exact division (panics if not divisible — callers guarantee it).
    pub fn exact_div(&self, d: &GaussInt) -> GaussInt {
        let n = d.norm();
        let num = self.mul(&GaussInt {
            re: d.re.clone(),
            im: -d.im.clone(),
        });
        debug_assert!((&num.re % &n).is_zero() && (&num.im % &n).is_zero());
        GaussInt {
            re: num.re / &n,
            im: num.im / n,
        }
    }

    /// Rounded division for the Euclidean algorithm in Z[i].
    fn rounded_div(&self, d: &GaussInt) -> GaussInt {
        let n = d.norm();
        let num = self.mul(&GaussInt {
            re: d.re.clone(),
            im: -d.im.clone(),
        });
        // round(x / n) for positive n: floor((2x + n) / 2n).
        let round = |x: BigInt| -> BigInt {
            use num_integer::Integer;
            (BigInt::from(2) * x + &n).div_floor(&(BigInt::from(2) * &n))
        };
        GaussInt {
            re: round(num.re),
            im: round(num.im),
        }
    }

    /// GCD in the Euclidean domain Z[i] (up to units).
    pub fn gcd(&self, o: &GaussInt) -> GaussInt {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let q = a.rounded_div(&b);
            let r = a.sub(&q.mul(&b));
            a = b;
            b = r;
        }
        a
    }
}

/// Dense univariate polynomial over Z[i], little-endian, trimmed.
pub type IntPoly = Vec<GaussInt>;

pub fn trim(mut p: IntPoly) -> IntPoly {
    while p.last().is_some_and(GaussInt::is_zero) {
        p.pop();
    }
    p
}

/// Fraction-free determinant of the Sylvester matrix: the resultant over
/// Z[i] by Bareiss elimination.
pub fn resultant_int(f: &IntPoly, g: &IntPoly) -> GaussInt {
    let (m, n) = (f.len() - 1, g.len() - 1);
    if m == 0 {
        return pow_gauss(&f[0], n as u32);
    }
    if n == 0 {
        return pow_gauss(&g[0], m as u32);
    }
    let size = m + n;
    let mut mat = vec![vec![GaussInt::zero(); size]; size];
    for row in 0..n {
        for j in 0..=m {
            mat[row][row + j] = f[m - j].clone();
        }
    }
    for row in 0..m {
        for j in 0..=n {
            mat[n + row][row + j] = g[n - j].clone();
        }
    }
    let mut sign_flip = false;
    let mut prev = GaussInt::one();
    for k in 0..size - 1 {
        if mat[k][k].is_zero() {
            let Some(s) = (k + 1..size).find(|&i| !mat[i][k].is_zero()) else {
                return GaussInt::zero();
            };
            mat.swap(k, s);
            sign_flip = !sign_flip;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = mat[k][k].mul(&mat[i][j]).sub(&mat[i][k].mul(&mat[k][j]));
                mat[i][j] = num.exact_div(&prev);
            }
            mat[i][k] = GaussInt::zero();
        }
        prev = mat[k][k].clone();
    }
    let det = mat[size - 1][size - 1].clone();
    if sign_flip {
        det.neg()
    } else {
        det
    }
}

fn pow_gauss(a: &GaussInt, e: u32) -> GaussInt {
    let mut acc = GaussInt::one();
    for _ in 0..e {
        acc = acc.mul(a);
    }
    acc
}

/// Subresultant PRS GCD over Z[i]; returns a (non-normalized) GCD.
pub fn gcd_int(f: &IntPoly, g: &IntPoly) -> IntPoly {
    let (mut u, mut v) = if f.len() >= g.len() {
        (f.clone(), g.clone())
    } else {
        (g.clone(), f.clone())
    };
    u = primitive_part(trim(u));
    v = primitive_part(trim(v));
    let mut lc_prev = GaussInt::one();
    let mut h = GaussInt::one();
    loop {
        if v.is_empty() {
            return u;
        }
        if v.len() == 1 {
            return vec![GaussInt::one()];
        }
        let delta = (u.len() - v.len()) as u32;
        let r = pseudo_rem_int(&u, &v);
        let beta = lc_prev.mul(&pow_gauss(&h, delta));
        let next: IntPoly = if beta.is_zero() {
            r
        } else {
            trim(r).iter().map(|c| c.exact_div(&beta)).collect()
        };
        lc_prev = v.last().unwrap().clone();
        if delta >= 1 {
            let num = pow_gauss(&lc_prev, delta);
            h = if delta == 1 {
                num
            } else {
                num.exact_div(&pow_gauss(&h, delta - 1))
            };
        }
        u = v;
        v = trim(next);
    }
}

fn pseudo_rem_int(f: &IntPoly, g: &IntPoly) -> IntPoly {
    let dg = g.len() - 1;
    let lc_g = g.last().unwrap();
    let mut r = f.clone();
    while r.len() > dg {
        let dr = r.len() - 1;
        let lc_r = r.last().unwrap().clone();
        let mut next = vec![GaussInt::zero(); r.len()];
        for (j, c) in r.iter().enumerate() {
            next[j] = lc_g.mul(c);
        }
        for (j, c) in g.iter().enumerate() {
            let t = lc_r.mul(c);
            next[dr - dg + j] = next[dr - dg + j].sub(&t);
        }
        r = trim(next);
        if r.len() == f.len() && r.len() > dg {
            break; // defensive: no progress
        }
    }
    r
}

/// Divide out the Z[i]-content.
pub fn primitive_part(p: IntPoly) -> IntPoly {
    let mut content = GaussInt::zero();
    for c in &p {
        if !c.is_zero() {
            content = if content.is_zero() {
                c.clone()
            } else {
                content.gcd(c)
            };
        }
    }
    if content.is_zero() || (content.norm() == BigInt::from(1)) {
        return p;
    }
    p.iter().map(|c| c.exact_div(&content)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gi(re: i64, im: i64) -> GaussInt {
        GaussInt {
            re: BigInt::from(re),
            im: BigInt::from(im),
        }
    }

    #[test]
    fn gaussian_gcd_and_division() {
        let a = gi(5, 0); // = (2+i)(2-i)
        let b = gi(2, 1);
        let g = a.gcd(&b);
        // gcd is 2+i up to a unit.
        assert_eq!(g.norm(), BigInt::from(5));
        assert_eq!(a.exact_div(&b), gi(2, -1));
    }

    #[test]
    fn integer_resultant_matches_classical() {
        // res(x^2 - 5, x - 3) = 4.
        let f = vec![gi(-5, 0), gi(0, 0), gi(1, 0)];
        let g = vec![gi(-3, 0), gi(1, 0)];
        assert_eq!(resultant_int(&f, &g), gi(4, 0));
    }

    #[test]
    fn integer_gcd_finds_common_factor() {
        // (x - 2)(x + 1) and (x - 2)(x - 7)
        let f = vec![gi(-2, 0), gi(-1, 0), gi(1, 0)];
        let g = vec![gi(14, 0), gi(-9, 0), gi(1, 0)];
        let d = trim(gcd_int(&f, &g));
        assert_eq!(d.len(), 2);
        // proportional to (x - 2)
        let ratio = d[1].mul(&gi(-2, 0));
        assert_eq!(ratio, d[0].mul(&gi(1, 0)));
    }
}
