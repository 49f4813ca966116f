//! Dense univariate polynomials over Q(i): field division, GCD, Yun
//! square-free decomposition, scalar resultants, and the
//! evaluation/interpolation resultant for affine bivariate systems.

use super::gaussint::{gcd_int, resultant_int, trim as trim_int, GaussInt, IntPoly};
use super::{GaussianRational, MPoly};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

/// Coefficients little-endian: `coeffs[j]` multiplies `x^j`. Invariant: the
/// top coefficient is nonzero (empty = zero polynomial).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatPoly {
    coeffs: Vec<GaussianRational>,
}

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly { coeffs: vec![] }
    }

    pub fn from_coeffs(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    /// Extract a univariate polynomial in `var` from an `MPoly` that uses no
    /// other variable.
    pub fn from_mpoly(p: &MPoly, var: usize) -> Self {
        let d = p.degree_in(var) as usize;
        let mut coeffs = vec![GaussianRational::zero(); d + 1];
        for (e, c) in p.terms() {
            debug_assert!(e
                .iter()
                .enumerate()
                .all(|(i, &x)| i == var || x == 0));
            coeffs[e[var] as usize] = c.clone();
        }
        Self::from_coeffs(coeffs)
    }

    pub fn add(&self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![GaussianRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] = c.clone();
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Self::from_coeffs(out)
    }

    pub fn sub(&self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![GaussianRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] = c.clone();
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        Self::from_coeffs(out)
    }

    pub fn mul(&self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out =
            vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, c: &GaussianRational) -> RatPoly {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> RatPoly {
        match self.leading() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inverse().expect("nonzero leading coefficient")),
        }
    }

    /// Field division with remainder.
    pub fn div_rem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dlen = divisor.coeffs.len();
        if self.coeffs.len() < dlen {
            return (RatPoly::zero(), self.clone());
        }
        let lc_inv = divisor.leading().unwrap().inverse().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![GaussianRational::zero(); self.coeffs.len() - dlen + 1];
        for k in (0..quo.len()).rev() {
            let c = &rem[k + dlen - 1] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &(&c * d);
            }
            quo[k] = c;
        }
        (Self::from_coeffs(quo), Self::from_coeffs(rem))
    }

    pub fn derivative(&self) -> RatPoly {
        if self.coeffs.len() <= 1 {
            return RatPoly::zero();
        }
        Self::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * &GaussianRational::from_int(i as i64 + 1))
                .collect(),
        )
    }

    /// Monic GCD. Denominators are cleared and the subresultant PRS runs
    /// over Z[i], where coefficient growth stays linear per step.
    pub fn gcd(&self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() {
            return rhs.monic();
        }
        if rhs.is_zero() {
            return self.monic();
        }
        let (fa, _) = self.clear_denominators();
        let (fb, _) = rhs.clear_denominators();
        let g = trim_int(gcd_int(&fa, &fb));
        RatPoly::from_int_poly(&g).monic()
    }

    /// Scale to Gaussian-integer coefficients; returns (integer poly, scale)
    /// with self * scale = integer poly.
    fn clear_denominators(&self) -> (IntPoly, BigInt) {
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = lcm(&l, c.re().denom());
            l = lcm(&l, c.im().denom());
        }
        let ip: IntPoly = self
            .coeffs
            .iter()
            .map(|c| GaussInt {
                re: c.re().numer() * (&l / c.re().denom()),
                im: c.im().numer() * (&l / c.im().denom()),
            })
            .collect();
        (ip, l)
    }

    fn from_int_poly(p: &IntPoly) -> RatPoly {
        RatPoly::from_coeffs(
            p.iter()
                .map(|c| {
                    GaussianRational::new(
                        num_rational::BigRational::from_integer(c.re.clone()),
                        num_rational::BigRational::from_integer(c.im.clone()),
                    )
                })
                .collect(),
        )
    }

    /// Yun's square-free decomposition: returns `[(f1, 1), (f2, 2), ...]`
    /// with `self = lc * prod fi^i` and the `fi` monic, square-free, coprime.
    pub fn squarefree_decomposition(&self) -> Vec<(RatPoly, usize)> {
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        if a0.degree() == Some(0) {
            return vec![(f, 1)];
        }
        let mut out = Vec::new();
        let mut b = f.div_rem(&a0).0;
        let mut c = df.div_rem(&a0).0;
        let mut i = 1;
        loop {
            let d = c.sub(&b.derivative());
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            i += 1;
            if b.degree() == Some(0) {
                break;
            }
        }
        out
    }

    pub fn eval(&self, x: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn to_complex_coeffs(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.to_complex()).collect()
    }
}

/// Scalar resultant of univariate polynomials over Q(i): denominators are
/// cleared and the Sylvester determinant runs fraction-free over Z[i], then
/// the clearing factors divide back out.
pub fn resultant_scalar(f: &RatPoly, g: &RatPoly) -> GaussianRational {
    if f.is_zero() || g.is_zero() {
        return GaussianRational::zero();
    }
    let (fi, alpha) = f.clear_denominators();
    let (gi, beta) = g.clear_denominators();
    let r = resultant_int(&fi, &gi);
    let df = f.degree().unwrap() as u32;
    let dg = g.degree().unwrap() as u32;
    let scale = num_rational::BigRational::from_integer(alpha.pow(dg) * beta.pow(df));
    let num = GaussianRational::new(
        num_rational::BigRational::from_integer(r.re),
        num_rational::BigRational::from_integer(r.im),
    );
    let inv = GaussianRational::new(scale.recip(), num_rational::BigRational::zero());
    &num * &inv
}

fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    if a.is_zero() || b.is_zero() {
        BigInt::one()
    } else {
        a.lcm(b)
    }
}

/// Exact resultant of two affine bivariate polynomials eliminating `elim_var`,
/// returned as a univariate polynomial in `keep_var`.
///
/// Computed by evaluation at integer points and Lagrange interpolation, with
/// sample points skipped whenever the leading coefficient in `elim_var`
/// degenerates there (a degree drop would corrupt that sample).
pub fn resultant_bivariate(
    p: &MPoly,
    q: &MPoly,
    elim_var: usize,
    keep_var: usize,
) -> RatPoly {
    let dp_e = p.degree_in(elim_var) as usize;
    let dq_e = q.degree_in(elim_var) as usize;
    if dp_e == 0 && dq_e == 0 {
        return RatPoly::constant(GaussianRational::one());
    }
    // res(f, g) with deg_elim(f) = 0 degenerates to f^(deg_elim g).
    if dp_e == 0 {
        let f = RatPoly::from_mpoly(&p.clone(), keep_var);
        return pow_poly(&f, dq_e);
    }
    if dq_e == 0 {
        let g = RatPoly::from_mpoly(&q.clone(), keep_var);
        return pow_poly(&g, dp_e);
    }

    let dp_k = p.degree_in(keep_var) as usize;
    let dq_k = q.degree_in(keep_var) as usize;
    let bound = dp_e * dq_k + dq_e * dp_k;

    let p_coeffs = p.coeffs_wrt(elim_var);
    let q_coeffs = q.coeffs_wrt(elim_var);
    let lead_p = RatPoly::from_mpoly(p_coeffs.last().unwrap(), keep_var);
    let lead_q = RatPoly::from_mpoly(q_coeffs.last().unwrap(), keep_var);

    let mut xs: Vec<GaussianRational> = Vec::with_capacity(bound + 1);
    let mut ys: Vec<GaussianRational> = Vec::with_capacity(bound + 1);
    let mut t: i64 = 0;
    while xs.len() <= bound {
        let x = GaussianRational::from_int(t);
        // Alternate 0, 1, -1, 2, -2, ...
        t = if t > 0 { -t } else { -t + 1 };
        if lead_p.eval(&x).is_zero() || lead_q.eval(&x).is_zero() {
            continue;
        }
        let fp = eval_keep(&p_coeffs, &x, keep_var);
        let fq = eval_keep(&q_coeffs, &x, keep_var);
        xs.push(x);
        ys.push(resultant_scalar(&fp, &fq));
    }
    lagrange_interpolate(&xs, &ys)
}

fn pow_poly(f: &RatPoly, e: usize) -> RatPoly {
    let mut acc = RatPoly::constant(GaussianRational::one());
    for _ in 0..e {
        acc = acc.mul(f);
    }
    acc
}

/// Specialize the coefficient list (polys in `keep_var`) at `x`.
fn eval_keep(coeffs: &[MPoly], x: &GaussianRational, keep_var: usize) -> RatPoly {
    RatPoly::from_coeffs(
        coeffs
            .iter()
            .map(|c| RatPoly::from_mpoly(c, keep_var).eval(x))
            .collect(),
    )
}

fn lagrange_interpolate(xs: &[GaussianRational], ys: &[GaussianRational]) -> RatPoly {
    // Newton's divided differences, then expansion.
    let n = xs.len();
    let mut table: Vec<GaussianRational> = ys.to_vec();
    let mut coeffs_newton = vec![table[0].clone()];
    for level in 1..n {
        for i in 0..n - level {
            let num = &table[i + 1] - &table[i];
            let den = &xs[i + level] - &xs[i];
            table[i] = &num / &den;
        }
        table.truncate(n - level);
        coeffs_newton.push(table[0].clone());
    }
    // Expand sum_k c_k * prod_{j<k} (x - x_j).
    let mut acc = RatPoly::zero();
    let mut basis = RatPoly::constant(GaussianRational::one());
    for (k, c) in coeffs_newton.iter().enumerate() {
        acc = acc.add(&basis.scale(c));
        if k + 1 < n {
            let lin = RatPoly::from_coeffs(vec![-&xs[k], GaussianRational::one()]);
            basis = basis.mul(&lin);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn upoly(ints: &[i64]) -> RatPoly {
        RatPoly::from_coeffs(ints.iter().map(|&n| GaussianRational::from_int(n)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (x^2 - 1) / (x - 1) = x + 1.
        let p = upoly(&[-1, 0, 1]);
        let d = upoly(&[-1, 1]);
        let (q, r) = p.div_rem(&d);
        assert_eq!(q, upoly(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(p.gcd(&d), d.monic());
    }

    #[test]
    fn yun_squarefree() {
        // (x-1)^2 (x+2)^3 decomposes as [(x-1, 2), (x+2, 3)].
        let f = pow_poly(&upoly(&[-1, 1]), 2).mul(&pow_poly(&upoly(&[2, 1]), 3));
        let dec = f.squarefree_decomposition();
        assert_eq!(dec.len(), 2);
        assert_eq!(dec[0], (upoly(&[-1, 1]), 2));
        assert_eq!(dec[1], (upoly(&[2, 1]), 3));
    }

    #[test]
    fn scalar_resultant_matches_classical() {
        // res(x^2 - a, x - b) = b^2 - a at a = 5, b = 3 gives 4.
        let p = upoly(&[-5, 0, 1]);
        let q = upoly(&[-3, 1]);
        assert_eq!(resultant_scalar(&p, &q), GaussianRational::from_int(4));
        // Common root: res = 0.
        let p2 = upoly(&[-1, 1]).mul(&upoly(&[7, 1]));
        let q2 = upoly(&[-1, 1]).mul(&upoly(&[3, 1]));
        assert!(resultant_scalar(&p2, &q2).is_zero());
    }

    #[test]
    fn interpolated_matches_bareiss() {
        // Same bivariate resultant through the two independent routes.
        let z = MPoly::variable(2, 0);
        let w = MPoly::variable(2, 1);
        let p = z.pow(2).mul(&w).add(&w.pow(3)).add(&z); // z^2 w + w^3 + z
        let q = z.pow(3).sub(&w.pow(2)).add(&MPoly::one(2)); // z^3 - w^2 + 1
        let via_interp = resultant_bivariate(&p, &q, 0, 1);
        let via_bareiss =
            RatPoly::from_mpoly(&super::super::resultant_mpoly(&p, &q, 0), 1);
        // Both are the determinant of the same Sylvester matrix.
        assert_eq!(via_interp, via_bareiss);
    }

    #[test]
    fn degenerate_degree_zero_side() {
        // res_w(z^2 - 4, w^3 - 8) = (z^2 - 4)^3.
        let z = MPoly::variable(2, 0);
        let w = MPoly::variable(2, 1);
        let p = z.pow(2).sub(&MPoly::constant(2, GaussianRational::from_int(4)));
        let q = w.pow(3).sub(&MPoly::constant(2, GaussianRational::from_int(8)));
        let r = resultant_bivariate(&p, &q, 1, 0);
        let expected = pow_poly(&RatPoly::from_mpoly(&p, 0), 3);
        assert_eq!(r, expected);
    }
}
