//! Homogeneous polynomials: an `MPoly` with a verified grading.

use super::{GaussianRational, MPoly, PolyError};
use num_complex::Complex64;
use std::fmt;

/// A homogeneous polynomial. The zero polynomial is allowed and carries no
/// degree. Construction checks that every exponent vector sums to the same
/// total degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HomoPoly {
    poly: MPoly,
    degree: Option<u32>,
}

impl HomoPoly {
    pub fn try_new(poly: MPoly) -> Result<Self, PolyError> {
        if poly.is_zero() {
            return Ok(HomoPoly { poly, degree: None });
        }
        match poly.homogeneous_degree() {
            Some(d) => Ok(HomoPoly {
                poly,
                degree: Some(d),
            }),
            None => {
                let mut degrees: Vec<u32> = poly
                    .terms()
                    .map(|(e, _)| e.iter().sum::<u32>())
                    .collect();
                degrees.sort_unstable();
                degrees.dedup();
                let monomials: Vec<String> = poly
                    .terms()
                    .map(|(e, c)| {
                        let names: Vec<String> = (0..poly.nvars()).map(|i| format!("x{i}")).collect();
                        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
                        MPoly::monomial(poly.nvars(), e.clone(), c.clone()).render(&refs)
                    })
                    .collect();
                Err(PolyError::NotHomogeneous { degrees, monomials })
            }
        }
    }

    pub fn zero(nvars: usize) -> Self {
        HomoPoly {
            poly: MPoly::zero(nvars),
            degree: None,
        }
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, c: GaussianRational) -> Self {
        Self::try_new(MPoly::monomial(nvars, exps, c)).expect("monomial is homogeneous")
    }

    pub fn variable(nvars: usize, index: usize) -> Self {
        Self::try_new(MPoly::variable(nvars, index)).unwrap()
    }

    pub fn num_vars(&self) -> usize {
        self.poly.nvars()
    }

    /// Total degree; `None` for the canonical zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.poly.is_constant()
    }

    pub fn as_mpoly(&self) -> &MPoly {
        &self.poly
    }

    pub fn into_mpoly(self) -> MPoly {
        self.poly
    }

    pub fn num_terms(&self) -> usize {
        self.poly.num_terms()
    }

    pub fn add(&self, rhs: &HomoPoly) -> Result<HomoPoly, PolyError> {
        HomoPoly::try_new(self.poly.add(&rhs.poly))
    }

    pub fn mul(&self, rhs: &HomoPoly) -> HomoPoly {
        // Product of homogeneous polynomials is homogeneous.
        let poly = self.poly.mul(&rhs.poly);
        let degree = poly.homogeneous_degree();
        HomoPoly { poly, degree }
    }

    pub fn scale(&self, c: &GaussianRational) -> HomoPoly {
        let poly = self.poly.scale(c);
        let degree = if poly.is_zero() { None } else { self.degree };
        HomoPoly { poly, degree }
    }

    pub fn monic(&self) -> HomoPoly {
        HomoPoly {
            poly: self.poly.monic(),
            degree: self.degree,
        }
    }

    pub fn derivative(&self, var: usize) -> HomoPoly {
        let poly = self.poly.derivative(var);
        let degree = poly.homogeneous_degree();
        HomoPoly { poly, degree }
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        self.poly.eval_complex(z)
    }

    pub fn exact_div(&self, divisor: &HomoPoly) -> Option<HomoPoly> {
        let q = self.poly.exact_div(&divisor.poly)?;
        let degree = q.homogeneous_degree();
        Some(HomoPoly { poly: q, degree })
    }

    /// GCD normalized monic in the graded-lex leading term.
    pub fn gcd(&self, other: &HomoPoly) -> HomoPoly {
        let g = super::gcd(&self.poly, &other.poly);
        let degree = g.homogeneous_degree();
        HomoPoly { poly: g, degree }
    }

    /// Sylvester resultant eliminating the chosen variable.
    pub fn resultant(&self, other: &HomoPoly, var: usize) -> Result<HomoPoly, PolyError> {
        if self.is_zero() || other.is_zero() {
            return Err(PolyError::DegenerateInput(
                "resultant of the zero polynomial".into(),
            ));
        }
        if self.poly.degree_in(var) == 0 || other.poly.degree_in(var) == 0 {
            return Err(PolyError::DegenerateInput(format!(
                "no occurrence of variable {var} with positive degree in both polynomials"
            )));
        }
        let r = super::resultant_mpoly(&self.poly, &other.poly, var);
        let degree = r.homogeneous_degree();
        Ok(HomoPoly { poly: r, degree })
    }

    pub fn render(&self, vars: &[&str]) -> String {
        self.poly.render(vars)
    }
}

impl fmt::Debug for HomoPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.poly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_mixed_degrees() {
        let p = MPoly::variable(3, 0)
            .pow(3)
            .add(&MPoly::variable(3, 1).mul(&MPoly::variable(3, 2)));
        match HomoPoly::try_new(p) {
            Err(PolyError::NotHomogeneous { degrees, .. }) => {
                assert_eq!(degrees, vec![2, 3]);
            }
            other => panic!("expected NotHomogeneous, got {other:?}"),
        }
    }

    #[test]
    fn evaluation_basics() {
        use num_complex::Complex64;
        let p = crate::polyalg::parse("z1*z2", &["z0", "z1", "z2"]).unwrap();
        let v = p.evaluate(&[
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(3.0, 0.0),
        ]);
        assert!((v - Complex64::new(6.0, 0.0)).norm() < 1e-14);
        let q = crate::polyalg::parse("t^3", &["t", "z", "w"]).unwrap();
        let v = q.evaluate(&[
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]);
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn resultant_rejects_degenerate_variable() {
        // z1*z2 has degree 0 in z0: the elimination is degenerate.
        let p = crate::polyalg::parse("z1*z2", &["z0", "z1", "z2"]).unwrap();
        let q = crate::polyalg::parse("z0*z2", &["z0", "z1", "z2"]).unwrap();
        assert!(matches!(
            p.resultant(&q, 0),
            Err(PolyError::DegenerateInput(_))
        ));
        let z = HomoPoly::zero(3);
        assert!(matches!(
            z.resultant(&q, 0),
            Err(PolyError::DegenerateInput(_))
        ));
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        let z = HomoPoly::zero(2);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
    }
}
