//! Multivariate GCD over Q(i): monomial content extraction plus
//! content/primitive-part recursion with a subresultant pseudo-remainder
//! sequence in the chosen main variable.
//!
//! Results are normalized monic in the graded-lex leading coefficient, so
//! map reduction downstream is deterministic.

use super::{GaussianRational, MPoly};

/// GCD of two polynomials, monic in graded-lex order. `gcd(0, 0) = 0`,
/// `gcd(p, 0) = monic(p)`.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    assert_eq!(a.nvars(), b.nvars());
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }

    // Monomial part first: componentwise min of exponents handles pure
    // monomial inputs outright and strips shared monomial factors otherwise.
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg: Vec<u32> = ma.iter().zip(&mb).map(|(x, y)| *x.min(y)).collect();
    let a1 = a.div_monomial(&ma);
    let b1 = b.div_monomial(&mb);
    let gm = MPoly::monomial(a.nvars(), mg, GaussianRational::one());

    if a1.as_monomial().is_some() || b1.as_monomial().is_some() {
        // After stripping content one side is a unit monomial: gcd is the
        // shared monomial part alone.
        return gm;
    }
    if a1.is_constant() || b1.is_constant() {
        return gm;
    }

    let core = gcd_core(&a1, &b1);
    gm.mul(&core).monic()
}

/// GCD of a whole family, used by map reduction.
pub fn gcd_many(polys: &[MPoly]) -> MPoly {
    let mut it = polys.iter().filter(|p| !p.is_zero());
    let first = match it.next() {
        None => return MPoly::zero(polys.first().map(|p| p.nvars()).unwrap_or(0)),
        Some(p) => p.clone(),
    };
    let mut acc = first.monic();
    for p in it {
        if acc.is_constant() {
            break;
        }
        acc = gcd(&acc, p);
    }
    acc
}

fn gcd_core(a: &MPoly, b: &MPoly) -> MPoly {
    // Main variable: occurs with positive degree in both; prefer the one of
    // smallest combined degree to keep the PRS short.
    let nvars = a.nvars();
    let shared: Vec<usize> = (0..nvars)
        .filter(|&v| a.degree_in(v) > 0 && b.degree_in(v) > 0)
        .collect();
    let Some(&main) = shared
        .iter()
        .min_by_key(|&&v| a.degree_in(v) + b.degree_in(v))
    else {
        // No shared variable: coprime over a field.
        return MPoly::one(nvars);
    };

    let (ca, pa) = content_and_primitive(a, main);
    let (cb, pb) = content_and_primitive(b, main);
    let cg = gcd(&ca, &cb);
    let g = subresultant_prs_gcd(&pa, &pb, main);
    let (_, gp) = content_and_primitive(&g, main);
    cg.mul(&gp)
}

/// Content (gcd of the coefficients with respect to `var`) and the
/// corresponding primitive part.
fn content_and_primitive(p: &MPoly, var: usize) -> (MPoly, MPoly) {
    let coeffs = p.coeffs_wrt(var);
    let content = gcd_many(&coeffs);
    if content.is_zero() {
        return (content, p.clone());
    }
    let prim = p.exact_div(&content).expect("content divides");
    (content, prim)
}

/// Last nonzero element of the subresultant PRS of `f`, `g` in `var`.
/// Signs are immaterial here: the caller strips content and normalizes.
fn subresultant_prs_gcd(f: &MPoly, g: &MPoly, var: usize) -> MPoly {
    let nvars = f.nvars();
    let (mut u, mut v) = if f.degree_in(var) >= g.degree_in(var) {
        (f.clone(), g.clone())
    } else {
        (g.clone(), f.clone())
    };
    let mut lc_prev = MPoly::one(nvars);
    let mut h = MPoly::one(nvars);
    loop {
        if v.is_zero() {
            return u;
        }
        if v.degree_in(var) == 0 {
            // Nonzero remainder of degree zero in var: coprime in var.
            return v;
        }
        let delta = u.degree_in(var) - v.degree_in(var);
        let r = pseudo_rem(&u, &v, var);
        let beta = lc_prev.mul(&h.pow(delta));
        let next = match r.exact_div(&beta) {
            Some(q) => q,
            None => r, // scale-only deviation; content is stripped by the caller
        };
        lc_prev = leading_coeff(&v, var);
        if delta >= 1 {
            let num = lc_prev.pow(delta);
            h = match num.exact_div(&h.pow(delta - 1)) {
                Some(q) => q,
                None => num,
            };
        }
        u = v;
        v = next;
    }
}

fn leading_coeff(p: &MPoly, var: usize) -> MPoly {
    let coeffs = p.coeffs_wrt(var);
    coeffs.last().cloned().unwrap_or_else(|| MPoly::zero(p.nvars()))
}

/// prem(f, g) in `var`: lc(g)^(df-dg+1) * f reduced by g.
fn pseudo_rem(f: &MPoly, g: &MPoly, var: usize) -> MPoly {
    let dg = g.degree_in(var);
    let lc_g = leading_coeff(g, var);
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(var) >= dg {
        let dr = r.degree_in(var);
        let lc_r = leading_coeff(&r, var);
        // r <- lc_g * r - lc_r * var^(dr-dg) * g
        let mut shift = vec![0u32; f.nvars()];
        shift[var] = dr - dg;
        let shifted = g.mul_monomial(&shift, &GaussianRational::one()).mul(&lc_r);
        r = r.mul(&lc_g).sub(&shifted);
        debug_assert!(r.is_zero() || r.degree_in(var) < dr);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize) -> MPoly {
        MPoly::variable(3, i)
    }

    #[test]
    fn monomial_min_exponent_rule() {
        // gcd(t^9, t^3 z^6) = t^3: the reduction step of iterated maps.
        let a = v(0).pow(9);
        let b = v(0).pow(3).mul(&v(1).pow(6));
        assert_eq!(gcd(&a, &b), v(0).pow(3));
    }

    #[test]
    fn shared_variable_monomials() {
        let a = v(0).mul(&v(1)); // z0 z1
        let b = v(1).mul(&v(2)); // z1 z2
        assert_eq!(gcd(&a, &b), v(1));
    }

    #[test]
    fn univariate_style_factor() {
        // gcd(z^2 - w^2, z - w) = z - w over vars (z, w).
        let z = MPoly::variable(2, 0);
        let w = MPoly::variable(2, 1);
        let a = z.pow(2).sub(&w.pow(2));
        let b = z.sub(&w);
        assert_eq!(gcd(&a, &b), b);
    }

    #[test]
    fn gcd_divides_both() {
        let z = MPoly::variable(2, 0);
        let w = MPoly::variable(2, 1);
        let g = z.add(&w);
        let a = g.mul(&z.pow(2).add(&w.pow(2)));
        let b = g.mul(&z.sub(&w)).mul(&z);
        let d = gcd(&a, &b);
        assert!(d.divides(&a));
        assert!(d.divides(&b));
        assert!(g.monic().divides(&d));
    }

    #[test]
    fn gcd_of_scaled_family() {
        // gcd(p*g, q*g) = g * gcd(p, q) up to unit, for sparse random-ish inputs.
        let z = MPoly::variable(3, 0);
        let w = MPoly::variable(3, 1);
        let t = MPoly::variable(3, 2);
        let p = z.pow(2).add(&w.mul(&t));
        let q = w.pow(2).sub(&t.pow(2));
        let g = z.add(&t);
        let lhs = gcd(&p.mul(&g), &q.mul(&g));
        let rhs = g.mul(&gcd(&p, &q)).monic();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn zero_conventions() {
        let z = MPoly::zero(2);
        let p = MPoly::variable(2, 0).scale(&GaussianRational::from_int(3));
        assert_eq!(gcd(&z, &p), p.monic());
        assert!(gcd(&z, &z).is_zero());
    }
}
