//! Projective points, Fubini–Study geometry, and sampling from the
//! Fubini–Study volume.
//!
//! `fs_pullback_density` evaluates the density of `(f*ω)^j ∧ ω^(n-j)`
//! against the Fubini–Study volume `ω^n` at a regular point: both forms are
//! reduced to Levi forms of `log |lift|^2` in an affine chart, and the wedge
//! density is the elementary symmetric function of the relative eigenvalues,
//!     (f*ω)^j ∧ ω^(n-j) / ω^n = j!(n-j)!/n! · e_j(H_ω^{-1} H_f).
//! With `ω` normalized to total mass 1, Monte-Carlo averages of these
//! densities over `sample_fs` estimate the intermediate degrees.

use crate::polyalg::{FloatPoly, HomoPoly};
use crate::rng::Stream;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("cannot normalize the zero vector")]
    ZeroVector,
    #[error("point is within tolerance of the indeterminacy locus (|f(z)|/|z|^d = {ratio:.3e})")]
    IndeterminatePoint { ratio: f64 },
    #[error("wedge power {0} exceeds the dimension {1}")]
    BadWedgePower(usize, usize),
}

/// Relative magnitude below which a lift value counts as a hit on the
/// indeterminacy locus.
pub const INDETERMINACY_GUARD: f64 = 1e-12;

/// Default chordal tolerance for projective point equality.
pub const POINT_TOLERANCE: f64 = 1e-9;

/// A point of complex projective space in canonical form: unit Euclidean
/// norm, first significant coordinate rotated to be real positive.
#[derive(Clone, Debug)]
pub struct ProjPoint {
    coords: Vec<Complex64>,
}

impl ProjPoint {
    /// Canonical representative of the projective class of `raw`.
    pub fn normalize(raw: &[Complex64]) -> Result<ProjPoint, GeomError> {
        let norm = l2_norm(raw);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(GeomError::ZeroVector);
        }
        // Exact idempotence: canonical input passes through bit-identically.
        if (norm - 1.0).abs() < 4.0 * f64::EPSILON {
            if let Some(lead) = raw.iter().position(|c| c.norm() > 1e-13) {
                if raw[lead].im == 0.0 && raw[lead].re > 0.0 {
                    return Ok(ProjPoint {
                        coords: raw.to_vec(),
                    });
                }
            }
        }
        let mut coords: Vec<Complex64> = raw.iter().map(|c| c / norm).collect();
        // Phase: first coordinate that is not negligible relative to the norm.
        let lead = coords
            .iter()
            .position(|c| c.norm() > 1e-13)
            .ok_or(GeomError::ZeroVector)?;
        let phase = coords[lead] / coords[lead].norm();
        let rot = phase.conj();
        for c in coords.iter_mut() {
            *c *= rot;
        }
        coords[lead] = Complex64::new(coords[lead].re.abs().max(coords[lead].norm()), 0.0);
        Ok(ProjPoint { coords })
    }

    /// Point of ℙⁿ from affine coordinates in the chart `z_0 = 1`.
    pub fn from_affine(affine: &[Complex64]) -> ProjPoint {
        let mut raw = Vec::with_capacity(affine.len() + 1);
        raw.push(Complex64::new(1.0, 0.0));
        raw.extend_from_slice(affine);
        ProjPoint::normalize(&raw).expect("affine lift is nonzero")
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Affine coordinates in the chart where coordinate `chart` equals 1;
    /// `None` when the point is (numerically) at that chart's infinity.
    pub fn affine(&self, chart: usize) -> Option<Vec<Complex64>> {
        let pivot = self.coords[chart];
        if pivot.norm() < 1e-12 {
            return None;
        }
        Some(
            self.coords
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != chart)
                .map(|(_, c)| c / pivot)
                .collect(),
        )
    }

    pub fn approx_eq(&self, other: &ProjPoint, tol: f64) -> bool {
        fs_distance(self, other) < tol
    }
}

fn l2_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Chordal (Fubini–Study sine) distance |p ∧ q| / (|p||q|) in [0, 1].
/// The wedge norm is expanded termwise, which stays accurate for nearly
/// equal points where 1 - |<p,q>|^2 would cancel catastrophically.
pub fn fs_distance(p: &ProjPoint, q: &ProjPoint) -> f64 {
    wedge_distance(p.coords(), q.coords())
}

pub(crate) fn wedge_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let (na, nb) = (l2_norm(a), l2_norm(b));
    let mut acc = 0.0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            acc += (a[i] * b[j] - a[j] * b[i]).norm_sqr();
        }
    }
    (acc.sqrt() / (na * nb)).min(1.0)
}

/// i.i.d. samples from the normalized Fubini–Study volume on ℙⁿ:
/// complex Gaussian vectors in C^(n+1), projectivized. Sample `i` depends
/// only on `(seed, i)`, so any sharding of the index range reproduces the
/// same points.
pub fn sample_fs(n: usize, count: usize, seed: u64) -> Vec<ProjPoint> {
    let stream = Stream::new(seed);
    (0..count).map(|i| fs_point(&stream, i as u64, n)).collect()
}

/// Single FS-volume sample, addressable by index.
pub fn fs_point(stream: &Stream, index: u64, n: usize) -> ProjPoint {
    let mut rng = stream.item(index);
    loop {
        let raw: Vec<Complex64> = (0..=n).map(|_| rng.next_complex_normal()).collect();
        if let Ok(p) = ProjPoint::normalize(&raw) {
            return p;
        }
    }
}

/// Complex angular central Gaussian on ℙⁿ concentrated at a point: the
/// projectivization of a zero-mean complex Gaussian with covariance
/// Σ = I + κ p p*. Sampling and the density against the FS probability
/// volume are both closed-form, which makes these exact importance-sampling
/// components for integrands with needle-shaped mass near known points.
#[derive(Clone, Debug)]
pub struct AngularGaussian {
    center: Vec<Complex64>,
    kappa: f64,
}

impl AngularGaussian {
    pub fn new(center: &ProjPoint, kappa: f64) -> Self {
        AngularGaussian {
            center: center.coords().to_vec(),
            kappa,
        }
    }

    /// Draw v = Σ^(1/2) g with g standard complex Gaussian, projectivized.
    /// Σ^(1/2) = I + (sqrt(1+κ) - 1) p p*.
    pub fn sample(&self, rng: &mut crate::rng::SplitMix64) -> ProjPoint {
        let n1 = self.center.len();
        let g: Vec<Complex64> = (0..n1).map(|_| rng.next_complex_normal()).collect();
        let dot: Complex64 = g
            .iter()
            .zip(&self.center)
            .map(|(a, b)| a * b.conj())
            .sum();
        let s = ((1.0 + self.kappa).sqrt() - 1.0) * dot;
        let v: Vec<Complex64> = g
            .iter()
            .zip(&self.center)
            .map(|(a, p)| a + s * p)
            .collect();
        ProjPoint::normalize(&v).expect("gaussian draw is nonzero")
    }

    /// Density against the normalized FS volume:
    /// f(u) = det(Σ)^(-1) (u* Σ^(-1) u)^(-(n+1)) for unit u, with
    /// u* Σ^(-1) u = 1 - κ/(1+κ) |<u, p>|².
    pub fn density(&self, u: &ProjPoint) -> f64 {
        let n1 = self.center.len();
        let dot: Complex64 = u
            .coords()
            .iter()
            .zip(&self.center)
            .map(|(a, b)| a * b.conj())
            .sum();
        let quad = 1.0 - self.kappa / (1.0 + self.kappa) * dot.norm_sqr();
        (1.0 + self.kappa).recip() * quad.powi(-(n1 as i32))
    }
}

/// Nonnegative density of a pulled-back wedge power against the FS volume.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FSDensity {
    value: f64,
}

impl FSDensity {
    pub fn value(&self) -> f64 {
        self.value
    }
}

/// Hermitian Levi data of log |F|^2 at a chart point: the full matrix is
/// assembled from the component values and the Jacobian.
fn levi_matrix(values: &[Complex64], jacobian: &[Vec<Complex64>], nvars: usize) -> Vec<Vec<Complex64>> {
    // H[p][q] = ( <dF_p, dF_q> |F|^2 - <dF_p, F> <F, dF_q> ) / |F|^4
    // with <u, v> = sum_a u_a conj(v_a); dF_p is the column of partials.
    let norm_sqr: f64 = values.iter().map(|v| v.norm_sqr()).sum();
    let mut w = vec![Complex64::new(0.0, 0.0); nvars];
    for p in 0..nvars {
        for (a, v) in values.iter().enumerate() {
            w[p] += jacobian[a][p] * v.conj();
        }
    }
    let mut h = vec![vec![Complex64::new(0.0, 0.0); nvars]; nvars];
    for p in 0..nvars {
        for q in 0..nvars {
            let mut g = Complex64::new(0.0, 0.0);
            for a in 0..values.len() {
                g += jacobian[a][p] * jacobian[a][q].conj();
            }
            h[p][q] = (g * norm_sqr - w[p] * w[q].conj()) / (norm_sqr * norm_sqr);
        }
    }
    h
}

/// Elementary symmetric functions e_j of the eigenvalues of B^{-1} A for
/// Hermitian A and positive-definite B, via Faddeev–LeVerrier traces of
/// M = B^{-1} A (eigenvalues are real for this pencil).
fn relative_elementary_symmetric(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<f64> {
    let n = a.len();
    let m = mat_solve(b, a);
    // Newton's identities from power sums of M.
    let mut powers: Vec<Vec<Vec<Complex64>>> = vec![m.clone()];
    for _ in 1..n {
        let last = powers.last().unwrap();
        powers.push(mat_mul(last, &m));
    }
    let p: Vec<f64> = powers.iter().map(|mk| trace(mk).re).collect();
    let mut e = vec![1.0f64];
    for k in 1..=n {
        let mut s = 0.0;
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            s += sign * e[k - i] * p[i - 1];
        }
        e.push(s / k as f64);
    }
    e
}

fn trace(m: &[Vec<Complex64>]) -> Complex64 {
    (0..m.len()).map(|i| m[i][i]).sum()
}

fn mat_mul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

/// Solve B X = A by Gaussian elimination with partial pivoting.
fn mat_solve(b: &[Vec<Complex64>], a: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = b.len();
    let mut m: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            let mut row = b[i].clone();
            row.extend(a[i].iter().copied());
            row
        })
        .collect();
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&x, &y| m[x][k].norm().total_cmp(&m[y][k].norm()))
            .unwrap();
        m.swap(k, pivot);
        let pv = m[k][k];
        for j in k..2 * n {
            m[k][j] /= pv;
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = m[i][k];
            if f.norm() == 0.0 {
                continue;
            }
            for j in k..2 * n {
                let mkj = m[k][j];
                m[i][j] -= f * mkj;
            }
        }
    }
    (0..n).map(|i| m[i][n..].to_vec()).collect()
}

/// Compiled evaluator for a tuple of homogeneous components and their
/// first-order partials; reused across Monte-Carlo samples.
pub struct PullbackEvaluator {
    components: Vec<FloatPoly>,
    degree: u32,
}

impl PullbackEvaluator {
    pub fn new(f: &[HomoPoly]) -> Self {
        let degree = f.iter().filter_map(|c| c.degree()).max().unwrap_or(0);
        PullbackEvaluator {
            components: f.iter().map(|c| FloatPoly::compile(c.as_mpoly())).collect(),
            degree,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Values and Jacobian of the lift at the canonical representative of `z`,
    /// rescaled to unit max component magnitude. The returned flag carries the
    /// indeterminacy ratio |f(ẑ)|.
    pub fn lift_at(&self, z: &ProjPoint) -> (Vec<Complex64>, Vec<Vec<Complex64>>, f64) {
        let coords = z.coords();
        let mut values = Vec::with_capacity(self.components.len());
        let mut jac = Vec::with_capacity(self.components.len());
        for c in &self.components {
            let (v, g) = c.eval_with_gradient(coords);
            values.push(v);
            jac.push(g);
        }
        let ratio = values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let scale = values
            .iter()
            .map(|v| v.norm())
            .fold(0.0f64, f64::max)
            .max(f64::MIN_POSITIVE);
        for v in values.iter_mut() {
            *v /= scale;
        }
        for row in jac.iter_mut() {
            for g in row.iter_mut() {
                *g /= scale;
            }
        }
        (values, jac, ratio)
    }

    /// Density of `(f*ω)^j ∧ ω^(n-j)` against `ω^n` at `z`.
    pub fn density(&self, z: &ProjPoint, wedge_power: usize) -> Result<FSDensity, GeomError> {
        let (values, jacobian, ratio) = self.lift_at(z);
        if ratio < INDETERMINACY_GUARD {
            return Err(GeomError::IndeterminatePoint { ratio });
        }
        density_from_jet(&values, &jacobian, z, wedge_power)
    }
}

/// Density of `(f*ω)^wedge_power ∧ ω^(n-wedge_power)` against `ω^n` at `z`,
/// from analytic first derivatives of the polynomial lift.
pub fn fs_pullback_density(
    f: &[HomoPoly],
    z: &ProjPoint,
    wedge_power: usize,
) -> Result<FSDensity, GeomError> {
    let ev = PullbackEvaluator::new(f);
    ev.density(z, wedge_power)
}

/// Density computed from a precomputed lift jet: component values and the
/// full (n+1)-direction Jacobian of a homogeneous tuple evaluated at the
/// canonical representative of `z`.
pub fn density_from_jet(
    values: &[Complex64],
    jac_full: &[Vec<Complex64>],
    z: &ProjPoint,
    wedge_power: usize,
) -> Result<FSDensity, GeomError> {
    let n = z.dim();
    if wedge_power > n {
        return Err(GeomError::BadWedgePower(wedge_power, n));
    }
    if wedge_power == 0 {
        return Ok(FSDensity { value: 1.0 });
    }

    // Chart where the largest coordinate is 1: the Levi form is computed in
    // the remaining affine directions.
    let chart = (0..=n)
        .max_by(|&i, &j| z.coords()[i].norm().total_cmp(&z.coords()[j].norm()))
        .unwrap();

    // Restrict the Jacobian to chart directions. The lift along the chart is
    // F(x) = f(ẑ + chart-direction fixed); since f is evaluated at the
    // canonical representative and homogeneity removes the radial direction,
    // using the partials in the non-chart coordinates of the representative
    // is exactly the chart parametrization scaled by the chart coordinate,
    // and the common scale cancels between numerator and denominator forms.
    let dirs: Vec<usize> = (0..=n).filter(|&i| i != chart).collect();
    let jac_f: Vec<Vec<Complex64>> = jac_full
        .iter()
        .map(|row| dirs.iter().map(|&d| row[d]).collect())
        .collect();
    let h_f = levi_matrix(&values, &jac_f, n);

    // Reference FS form through the same code path: identity lift.
    let id_values: Vec<Complex64> = z.coords().to_vec();
    let mut id_jac = vec![vec![Complex64::new(0.0, 0.0); n]; n + 1];
    for (col, &d) in dirs.iter().enumerate() {
        id_jac[d][col] = Complex64::new(1.0, 0.0);
    }
    let h_w = levi_matrix(&id_values, &id_jac, n);

    let e = relative_elementary_symmetric(&h_f, &h_w);
    let j = wedge_power;
    let scale = (factorial(j) * factorial(n - j)) as f64 / factorial(n) as f64;
    let value = (e[j] * scale).max(0.0);
    Ok(FSDensity { value })
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product::<u64>().max(1)
}
