//! Compiled double-precision forms of exact polynomials for Monte-Carlo
//! inner loops, plus log-polar evaluation that stays finite across the
//! doubly-exponential magnitude swings of high iterates.

use super::MPoly;
use num_complex::Complex64;

/// A polynomial compiled to float coefficients with flat term storage.
#[derive(Clone, Debug)]
pub struct FloatPoly {
    nvars: usize,
    degree_in: Vec<u32>,
    terms: Vec<(Complex64, Vec<u32>)>,
}

impl FloatPoly {
    pub fn compile(p: &MPoly) -> Self {
        let nvars = p.nvars();
        FloatPoly {
            nvars,
            degree_in: (0..nvars).map(|v| p.degree_in(v)).collect(),
            terms: p
                .terms()
                .map(|(e, c)| (c.to_complex(), e.clone()))
                .collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        let tables = self.power_tables(z);
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, e) in &self.terms {
            let mut t = *c;
            for i in 0..self.nvars {
                if e[i] > 0 {
                    t *= tables[i][e[i] as usize];
                }
            }
            acc += t;
        }
        acc
    }

    /// Value and all partial derivatives in one pass over shared power tables.
    pub fn eval_with_gradient(&self, z: &[Complex64]) -> (Complex64, Vec<Complex64>) {
        let tables = self.power_tables(z);
        let mut value = Complex64::new(0.0, 0.0);
        let mut grad = vec![Complex64::new(0.0, 0.0); self.nvars];
        for (c, e) in &self.terms {
            let mut t = *c;
            for i in 0..self.nvars {
                if e[i] > 0 {
                    t *= tables[i][e[i] as usize];
                }
            }
            value += t;
            for i in 0..self.nvars {
                if e[i] == 0 {
                    continue;
                }
                // d/dz_i of the term: e_i * term / z_i, rebuilt without division
                // to stay correct at z_i = 0.
                let mut dt = *c * e[i] as f64;
                for j in 0..self.nvars {
                    let pow = if j == i { e[j] - 1 } else { e[j] };
                    if pow > 0 {
                        dt *= tables[j][pow as usize];
                    }
                }
                grad[i] += dt;
            }
        }
        (value, grad)
    }

    fn power_tables(&self, z: &[Complex64]) -> Vec<Vec<Complex64>> {
        (0..self.nvars)
            .map(|v| {
                let mut t = Vec::with_capacity(self.degree_in[v] as usize + 1);
                t.push(Complex64::new(1.0, 0.0));
                for j in 1..=self.degree_in[v] as usize {
                    let prev = t[j - 1];
                    t.push(prev * z[v]);
                }
                t
            })
            .collect()
    }

    /// Evaluate at a point given in log-polar coordinates, returning the
    /// result in log-polar form. Magnitudes are handled as logs throughout,
    /// so inputs and outputs may represent numbers far outside the double
    /// range. Coordinates with `log_mag = -inf` represent exact zero.
    pub fn eval_log_polar(&self, z: &[LogPolar]) -> LogPolar {
        let mut logs: Vec<f64> = Vec::with_capacity(self.terms.len());
        let mut phases: Vec<f64> = Vec::with_capacity(self.terms.len());
        let mut max_log = f64::NEG_INFINITY;
        for (c, e) in &self.terms {
            let mut l = c.norm().ln();
            let mut ph = c.arg();
            for i in 0..self.nvars {
                if e[i] > 0 {
                    l += e[i] as f64 * z[i].log_mag;
                    ph += e[i] as f64 * z[i].phase;
                }
            }
            if l > max_log {
                max_log = l;
            }
            logs.push(l);
            phases.push(ph);
        }
        if max_log == f64::NEG_INFINITY {
            return LogPolar::zero();
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for (l, ph) in logs.iter().zip(&phases) {
            let rel = l - max_log;
            if rel > -745.0 {
                sum += Complex64::from_polar(rel.exp(), *ph);
            }
        }
        let mag = sum.norm();
        if mag == 0.0 {
            LogPolar::zero()
        } else {
            LogPolar {
                log_mag: max_log + mag.ln(),
                phase: sum.arg(),
            }
        }
    }
}

/// A complex number as (log magnitude, phase).
#[derive(Clone, Copy, Debug)]
pub struct LogPolar {
    pub log_mag: f64,
    pub phase: f64,
}

impl LogPolar {
    pub fn zero() -> Self {
        LogPolar {
            log_mag: f64::NEG_INFINITY,
            phase: 0.0,
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        let n = z.norm();
        if n == 0.0 {
            Self::zero()
        } else {
            LogPolar {
                log_mag: n.ln(),
                phase: z.arg(),
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }
}
