//! Sylvester resultants with exact coefficients.
//!
//! The generic path builds the Sylvester matrix with polynomial entries and
//! runs fraction-free Bareiss elimination (every division is exact). For the
//! hot bivariate path used by the system solver, see
//! [`super::univariate::resultant_bivariate`], which evaluates and
//! interpolates instead.

use super::{GaussianRational, MPoly};

/// Resultant of `p` and `q` eliminating `var`. Callers guarantee both have
/// positive degree in `var` (the public wrapper enforces it).
pub fn resultant_mpoly(p: &MPoly, q: &MPoly, var: usize) -> MPoly {
    let a = p.coeffs_wrt(var);
    let b = q.coeffs_wrt(var);
    let m = a.len() - 1; // deg_var p
    let n = b.len() - 1; // deg_var q
    let size = m + n;
    let nvars = p.nvars();
    let zero = MPoly::zero(nvars);

    // Sylvester matrix: n rows of p's coefficients, m rows of q's,
    // highest degree first.
    let mut mat = vec![vec![zero.clone(); size]; size];
    for row in 0..n {
        for j in 0..=m {
            mat[row][row + j] = a[m - j].clone();
        }
    }
    for row in 0..m {
        for j in 0..=n {
            mat[n + row][row + j] = b[n - j].clone();
        }
    }
    bareiss_det(mat, nvars)
}

/// Fraction-free determinant; exact divisions are guaranteed by Bareiss.
fn bareiss_det(mut m: Vec<Vec<MPoly>>, nvars: usize) -> MPoly {
    let n = m.len();
    if n == 0 {
        return MPoly::one(nvars);
    }
    let mut sign_flip = false;
    let mut prev = MPoly::one(nvars);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return MPoly::zero(nvars);
            };
            m.swap(k, swap);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num
                    .exact_div(&prev)
                    .expect("Bareiss division is exact");
            }
            m[i][k] = MPoly::zero(nvars);
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        det.scale(&GaussianRational::from_int(-1))
    } else {
        det
    }
}
