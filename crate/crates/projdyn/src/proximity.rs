//! Monte-Carlo proximity functions m_P^ℓ(W) for hyperplanes (ℓ = 1) and
//! points (ℓ = n, n ≤ 2), the Haar-mean identity, and the exceptional-set
//! growth scanner.
//!
//! The hyperplane integrand is the logarithmic pole
//!     log(|P(z)|² |W|² / |⟨W, P(z)⟩|²) ≥ 0,
//! averaged over the Fubini–Study volume. The point case on ℙ² pairs the
//! pullback potential with the form densities of P*ω and g*ω, where
//! g(z) = P(z) ∧ W maps into the projectivized wedge space. Averaging the
//! proximity function over Haar-random targets recovers c_{ℓ,m} δ_{ℓ-1}(P)
//! with a map-independent constant, calibrated once from the identity map.

use crate::parallel::sharded_map;
use crate::polyalg::FloatPoly;
use crate::projcore::{density_from_jet, fs_point, AngularGaussian, ProjPoint, PullbackEvaluator};
use crate::ratmap::{MapError, RationalMap};
use crate::solve::SolveError;
use crate::rng::Stream;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProximityError {
    #[error("integrand pole: |<W, P(z)>| / |P(z)| below 1e-14")]
    SingularHit,
    #[error("target appears to contain the image: {rejected} of {samples} draws hit the pole")]
    TargetContainsImage { rejected: usize, samples: usize },
    #[error("unsupported codimension {l} on P^{n}")]
    UnsupportedCodimension { l: usize, n: usize },
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Degree(#[from] crate::degrees::DegreeError),
}

/// Relative pole threshold below which a draw is rejected and resampled.
const SINGULAR_GUARD: f64 = 1e-14;

/// A proximity target: a hyperplane (unit covector, bilinear pairing) or a
/// point (ℓ = n).
#[derive(Clone, Debug)]
pub enum Target {
    Hyperplane(Vec<Complex64>),
    Point(ProjPoint),
}

impl Target {
    pub fn hyperplane(covector: &[Complex64]) -> Target {
        let norm = covector.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        Target::Hyperplane(covector.iter().map(|c| c / norm).collect())
    }

    pub fn point(p: ProjPoint) -> Target {
        Target::Point(p)
    }

    pub fn coords(&self) -> &[Complex64] {
        match self {
            Target::Hyperplane(v) => v,
            Target::Point(p) => p.coords(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Target::Hyperplane(_) => "hyperplane",
            Target::Point(_) => "point",
        }
    }
}

/// Monte-Carlo estimate of a proximity function with its standard error.
#[derive(Clone, Debug)]
pub struct ProximityEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
    pub rejected: usize,
}

/// The hyperplane integrand log(|P(z)|²|W|²/|⟨W,P(z)⟩|²) at one point,
/// evaluated on the unit-normalized lift.
pub fn lambda_hyperplane(
    map: &RationalMap,
    w: &Target,
    z: &ProjPoint,
) -> Result<f64, ProximityError> {
    let Target::Hyperplane(cov) = w else {
        panic!("lambda_hyperplane expects a hyperplane target");
    };
    let comps: Vec<FloatPoly> = map
        .components()
        .iter()
        .map(|c| FloatPoly::compile(c.as_mpoly()))
        .collect();
    let values: Vec<Complex64> = comps.iter().map(|f| f.eval(z.coords())).collect();
    hyperplane_integrand(&values, cov).ok_or(ProximityError::SingularHit)
}

/// `None` on a singular hit. Both arguments may be arbitrarily scaled.
///
/// The guard compares the pairing against its cancellation scale (the sum of
/// term magnitudes): a pairing below 1e-14 of that scale is float noise and
/// the log cannot be trusted. A pairing that is merely small relative to
/// |P(z)| — the typical situation near an exceptional target at high
/// iterates — is computed accurately in log form and kept.
fn hyperplane_integrand(values: &[Complex64], cov: &[Complex64]) -> Option<f64> {
    let scale = values.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    if scale <= 0.0 {
        return None;
    }
    let u: f64 = values.iter().map(|v| (v / scale).norm_sqr()).sum();
    let mut pairing = Complex64::new(0.0, 0.0);
    let mut cancel_scale = 0.0f64;
    for (v, c) in values.iter().zip(cov) {
        let term = (v / scale) * c;
        cancel_scale += term.norm();
        pairing += term;
    }
    let p = pairing.norm();
    if p <= SINGULAR_GUARD * cancel_scale || p == 0.0 {
        return None;
    }
    Some((u.ln() - 2.0 * p.ln()).max(0.0))
}

fn wedge3(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Monte-Carlo proximity estimate for a hyperplane target: the FS-volume
/// average of `lambda_hyperplane`, with singular hits resampled
/// deterministically.
pub fn m1_estimate(
    map: &RationalMap,
    w: &Target,
    samples: usize,
    seed: u64,
    workers: usize,
) -> Result<ProximityEstimate, ProximityError> {
    let Target::Hyperplane(cov) = w else {
        panic!("m1_estimate expects a hyperplane target");
    };
    let n = map.source_dim();
    let stream = Stream::new(seed).substream(0x9a0e);
    let cov = cov.clone();
    let partials = sharded_map(samples, workers, |range| {
        let comps: Vec<FloatPoly> = map
            .components()
            .iter()
            .map(|c| FloatPoly::compile(c.as_mpoly()))
            .collect();
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        let mut rejected = 0usize;
        for i in range {
            let mut idx = i as u64;
            let v = loop {
                let z = fs_point(&stream, idx, n);
                let values: Vec<Complex64> = comps.iter().map(|f| f.eval(z.coords())).collect();
                match hyperplane_integrand(&values, &cov) {
                    Some(v) => break v,
                    None => {
                        rejected += 1;
                        if rejected > samples / 100 + 8 {
                            break f64::NAN;
                        }
                        idx = idx.wrapping_add(0x7e57_0000_0000 + samples as u64);
                    }
                }
            };
            sum += v;
            sumsq += v * v;
        }
        (sum, sumsq, rejected)
    });
    finish_estimate(partials, samples)
}

fn finish_estimate(
    partials: Vec<(f64, f64, usize)>,
    samples: usize,
) -> Result<ProximityEstimate, ProximityError> {
    let (sum, sumsq, rejected) = partials
        .into_iter()
        .fold((0.0, 0.0, 0usize), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    if !sum.is_finite() || rejected > samples / 100 {
        return Err(ProximityError::TargetContainsImage { rejected, samples });
    }
    let mean = sum / samples as f64;
    let var = (sumsq / samples as f64 - mean * mean).max(0.0);
    Ok(ProximityEstimate {
        value: mean,
        std_error: (var / samples as f64).sqrt().max(f64::MIN_POSITIVE),
        samples,
        rejected,
    })
}

/// Monte-Carlo proximity estimate for a point target (ℓ = n). On ℙ¹ points
/// are hyperplanes through the dual pairing; on ℙ² the integrand is
/// log(|P(z)|²|W|²/|P(z)∧W|²) times the density of [P*ω + g*ω] ∧ ω.
pub fn mpoint_estimate(
    map: &RationalMap,
    w: &Target,
    samples: usize,
    seed: u64,
    workers: usize,
) -> Result<ProximityEstimate, ProximityError> {
    let Target::Point(pt) = w else {
        panic!("mpoint_estimate expects a point target");
    };
    let n = map.source_dim();
    match n {
        1 => {
            // ζ ∧ W = w1 ζ0 - w0 ζ1: a hyperplane with the dual covector.
            let c = pt.coords();
            let dual = Target::hyperplane(&[c[1], -c[0]]);
            m1_estimate(map, &dual, samples, seed, workers)
        }
        2 => {
            let stream = Stream::new(seed).substream(0x2b0a);
            let wc: Vec<Complex64> = pt.coords().to_vec();
            // Importance mixture: FS volume blended with angular-Gaussian
            // tubes at the fiber points of the target. The integrand's mass
            // concentrates in needles around multiple fiber points; tube
            // draws with exact density reweighting keep the estimator
            // unbiased while taming the tail variance.
            let tubes = importance_tubes(map, pt, seed);
            let partials = sharded_map(samples, workers, |range| {
                let ev = PullbackEvaluator::new(map.components());
                let mut sum = 0.0;
                let mut sumsq = 0.0;
                let mut rejected = 0usize;
                for i in range {
                    let mut idx = i as u64;
                    let v = loop {
                        let mut rng = stream.item(idx);
                        let (z, weight) = draw_mixture(&mut rng, tubes.as_deref());
                        match mpoint_integrand(&ev, &wc, &z) {
                            Some(v) => break v * weight,
                            None => {
                                rejected += 1;
                                if rejected > samples / 100 + 8 {
                                    break f64::NAN;
                                }
                                idx = idx.wrapping_add(0x2b0a_0000_0000 + samples as u64);
                            }
                        }
                    };
                    sum += v;
                    sumsq += v * v;
                }
                (sum, sumsq, rejected)
            });
            finish_estimate(partials, samples)
        }
        other => Err(ProximityError::UnsupportedCodimension { l: other, n: other }),
    }
}

/// Tube concentration: chordal width about 1/sqrt(κ).
const TUBE_KAPPA: f64 = 48.0;

/// Angular-Gaussian components centered at the fiber points of `pt`, when a
/// fiber is cheap to compute (monomial maps, or low degree). `None` falls
/// back to plain FS sampling.
fn importance_tubes(map: &RationalMap, pt: &ProjPoint, seed: u64) -> Option<Vec<AngularGaussian>> {
    if map.exponent_matrix().is_none() && map.degree() > 6 {
        return None;
    }
    match crate::solve::fiber(map, pt, seed ^ 0x7b7e) {
        Ok(f) if !f.points.is_empty() => Some(
            f.points
                .iter()
                .map(|(p, _)| AngularGaussian::new(p, TUBE_KAPPA))
                .collect(),
        ),
        _ => None,
    }
}

/// Draw from the mixture (half FS, half uniform-over-tubes) and return the
/// point with its importance weight 1/q(z).
fn draw_mixture(
    rng: &mut crate::rng::SplitMix64,
    tubes: Option<&[AngularGaussian]>,
) -> (ProjPoint, f64) {
    let Some(tubes) = tubes else {
        return (fs_draw(rng), 1.0);
    };
    let z = if rng.next_f64() < 0.5 {
        fs_draw(rng)
    } else {
        let i = rng.next_range(tubes.len() as u64) as usize;
        tubes[i].sample(rng)
    };
    let tube_density: f64 = tubes.iter().map(|t| t.density(&z)).sum::<f64>() / tubes.len() as f64;
    let q = 0.5 + 0.5 * tube_density;
    (z, 1.0 / q)
}

fn fs_draw(rng: &mut crate::rng::SplitMix64) -> ProjPoint {
    loop {
        let raw: Vec<Complex64> = (0..3).map(|_| rng.next_complex_normal()).collect();
        if let Ok(p) = ProjPoint::normalize(&raw) {
            return p;
        }
    }
}

fn mpoint_integrand(ev: &PullbackEvaluator, wc: &[Complex64], z: &ProjPoint) -> Option<f64> {
    let (values, jac, ratio) = ev.lift_at(z);
    if ratio < crate::projcore::INDETERMINACY_GUARD {
        return None; // indeterminacy hit: skip and resample
    }
    let u: f64 = values.iter().map(|v| v.norm_sqr()).sum();
    let g: Vec<Complex64> = wedge3(&values, wc);
    let s: f64 = g.iter().map(|v| v.norm_sqr()).sum();
    // Wedge entries carry absolute noise of order eps |F||W|.
    if s <= SINGULAR_GUARD * SINGULAR_GUARD * u {
        return None;
    }
    let log_factor = (u.ln() - s.ln()).max(0.0);
    // Densities of P*ω ∧ ω and g*ω ∧ ω against ω².
    let rho_p = density_from_jet(&values, &jac, z, 1).ok()?.value();
    let g_jac: Vec<Vec<Complex64>> = (0..jac.len().min(jac.len()))
        .map(|_| vec![])
        .collect();
    let _ = g_jac;
    let dg: Vec<Vec<Complex64>> = {
        // Jacobian of g = P ∧ W: rows are wedge components, columns the
        // three homogeneous directions.
        let ncols = jac[0].len();
        let mut rows = vec![vec![Complex64::new(0.0, 0.0); ncols]; 3];
        for col in 0..ncols {
            let dp: Vec<Complex64> = (0..3).map(|a| jac[a][col]).collect();
            let dgcol = wedge3(&dp, wc);
            for a in 0..3 {
                rows[a][col] = dgcol[a];
            }
        }
        rows
    };
    let rho_g = density_from_jet(&g, &dg, z, 1).ok()?.value();
    Some(log_factor * (rho_p + rho_g))
}

/// Calibrated mean-identity constants c_{ℓ,m}, computed once per (ℓ, m)
/// from the identity map (δ_{ℓ-1}(id) = 1).
pub fn calibration_constant(l: usize, m: usize) -> f64 {
    static CACHE: OnceLock<Mutex<BTreeMap<(usize, usize), f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&(l, m)) {
        return *v;
    }
    let id = RationalMap::identity(m);
    let samples = 200_000;
    let value = match l {
        1 => {
            // Unitary invariance makes any single hyperplane representative.
            let mut cov = vec![Complex64::new(0.0, 0.0); m + 1];
            cov[0] = Complex64::new(1.0, 0.0);
            m1_estimate(&id, &Target::Hyperplane(cov), samples, 0xca11b, 4)
                .expect("identity calibration")
                .value
        }
        _ => {
            let pt = fs_point(&Stream::new(0xca11b), 1, m);
            mpoint_estimate(&id, &Target::Point(pt), samples, 0xca11b, 4)
                .expect("identity calibration")
                .value
        }
    };
    cache.lock().unwrap().insert((l, m), value);
    value
}

/// Average of m-estimates over Haar-random targets against the predicted
/// c_{ℓ,m} δ_{ℓ-1}(P). Returns (mean, predicted).
pub fn mean_proximity_check(
    map: &RationalMap,
    l: usize,
    num_targets: usize,
    samples_each: usize,
    seed: u64,
    workers: usize,
) -> Result<(f64, f64), ProximityError> {
    let m = map.target_dim();
    let stream = Stream::new(seed).substream(0x7a96);
    let mut acc = 0.0;
    let mut used = 0usize;
    let mut t = 0u64;
    while used < num_targets && t < 4 * num_targets as u64 + 16 {
        let target = match l {
            1 => Target::hyperplane(fs_point(&stream, t, m).coords()),
            _ => Target::Point(fs_point(&stream, t, m)),
        };
        t += 1;
        let est = match l {
            1 => m1_estimate(map, &target, samples_each, seed ^ t, workers),
            _ => mpoint_estimate(map, &target, samples_each, seed ^ t, workers),
        };
        match est {
            Ok(e) => {
                acc += e.value;
                used += 1;
            }
            // Some Haar targets graze contracted images; skip them.
            Err(ProximityError::TargetContainsImage { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    let mean = acc / used as f64;
    let delta_prev = match l {
        1 => 1.0,
        _ => crate::degrees::intermediate_degree(map, l - 1, seed)? as f64,
    };
    let predicted = calibration_constant(l, m) * delta_prev;
    Ok((mean, predicted))
}

/// Scanner flag per target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanFlag {
    Generic,
    ExceptionalCandidate,
    Unstable,
}

/// Growth of m_{P_k}(W) over the iterates for one target.
#[derive(Clone, Debug)]
pub struct ScanRow {
    pub target: Target,
    pub m_values: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub growth_base: f64,
    pub flag: ScanFlag,
}

/// Estimate m_{P_k}(W) for k = 1..k_max per target, fit the growth base on
/// k >= 2, and flag targets whose fitted base exceeds `a_base` (default:
/// geometric mean of 1 and δ_{ℓ-1}(P)).
pub fn exceptional_scan(
    map: &RationalMap,
    l: usize,
    targets: &[Target],
    k_max: u32,
    a_base: Option<f64>,
    samples: usize,
    seed: u64,
    workers: usize,
) -> Result<Vec<ScanRow>, ProximityError> {
    assert!(k_max >= 2, "growth fitting needs k_max >= 2");
    // Generic targets grow like δ_(ℓ-1)(P_k) (forced by the Haar-mean
    // identity) and exceptional ones strictly faster, so the default
    // threshold is the geometric mean of δ_(ℓ-1) and δ_ℓ.
    let delta_prev = match l {
        1 => 1.0,
        _ => crate::degrees::intermediate_degree(map, l - 1, seed)? as f64,
    };
    let delta_l = crate::degrees::intermediate_degree(map, l, seed)? as f64;
    let a_base = a_base.unwrap_or_else(|| (delta_prev * delta_l).sqrt());

    let mut iterates = Vec::with_capacity(k_max as usize);
    let mut current = map.clone();
    iterates.push(current.clone());
    for _ in 1..k_max {
        current = RationalMap::compose(map, &current)?;
        iterates.push(current.clone());
    }

    let mut rows = Vec::with_capacity(targets.len());
    for (ti, target) in targets.iter().enumerate() {
        let mut m_values = Vec::with_capacity(k_max as usize);
        let mut std_errors = Vec::with_capacity(k_max as usize);
        let mut pole_levels: Vec<usize> = Vec::new();
        for (ki, pk) in iterates.iter().enumerate() {
            let cell_seed = seed ^ ((ti as u64) << 24) ^ ((ki as u64) << 4) ^ 0x5ca1;
            let est = match l {
                1 => m1_estimate(pk, target, samples, cell_seed, workers),
                _ => mpoint_estimate(pk, target, samples, cell_seed, workers),
            };
            match est {
                Ok(e) => {
                    m_values.push(e.value);
                    std_errors.push(e.std_error);
                }
                Err(ProximityError::TargetContainsImage { .. }) => {
                    // The singular-hit rate crossed the policy threshold:
                    // pre-images carry excess multiplicity hugging W and the
                    // integrand is blowing up there.
                    m_values.push(f64::INFINITY);
                    std_errors.push(f64::INFINITY);
                    pole_levels.push(ki);
                }
                Err(e) => return Err(e),
            }
        }
        let (growth_base, fit_ok) = fit_growth(&m_values);
        // A pole-out at a higher iterate with a clean first level is the
        // rejection-rate signature of an exceptional target; a pole at the
        // first level (wrong codimension from the start) is marked unstable
        // rather than claiming a computed +∞.
        let pole_signature = !pole_levels.is_empty() && m_values[0].is_finite();
        // Point targets carry a second, exact signature: a degenerate fiber
        // under an iterate (repeated pre-images, or fewer than λ^k of them).
        // The asymptotic excess of m over δ_(ℓ-1)-growth concentrates too
        // slowly to register in a desk-scale Monte-Carlo mean, while the
        // fiber degeneracy is visible immediately and is exactly the
        // pre-image structure that makes such targets exceptional.
        let degenerate_fiber = l == 2 && degenerate_fiber_probe(&iterates, target, seed);
        let flag = if pole_signature || degenerate_fiber {
            ScanFlag::ExceptionalCandidate
        } else if !pole_levels.is_empty() || !fit_ok {
            ScanFlag::Unstable
        } else if growth_base > a_base {
            ScanFlag::ExceptionalCandidate
        } else {
            ScanFlag::Generic
        };
        rows.push(ScanRow {
            target: target.clone(),
            m_values,
            std_errors,
            growth_base,
            flag,
        });
    }
    Ok(rows)
}

/// Fiber-structure probe for point targets: `true` when the deepest cheap
/// iterate has a complete fiber with repeated points or fewer than λ^k
/// pre-images, or when the target sits on a contracted image.
fn degenerate_fiber_probe(iterates: &[RationalMap], target: &Target, seed: u64) -> bool {
    let Target::Point(pt) = target else {
        return false;
    };
    let probe = iterates
        .iter()
        .rev()
        .find(|m| m.exponent_matrix().is_some() || m.degree() <= 6);
    let Some(pk) = probe else { return false };
    match crate::solve::fiber(pk, pt, seed ^ 0xf1be) {
        Ok(f) if f.complete => {
            let lambda_k = match crate::degrees::topological_degree(pk, 3, seed ^ 0x7d) {
                Ok(l) => l,
                Err(_) => return false,
            };
            f.points.iter().any(|&(_, m)| m > 1) || (f.points.len() as u64) < lambda_k
        }
        Err(SolveError::InfiniteFiber) => true,
        _ => false,
    }
}

/// Least-squares slope of log m_k against k, over k >= 2 (transients
/// excluded); returns (exp(slope), fit_ok).
fn fit_growth(m_values: &[f64]) -> (f64, bool) {
    let pts: Vec<(f64, f64)> = m_values
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &v)| v.is_finite() && v > 0.0)
        .map(|(i, &v)| ((i + 1) as f64, v.ln()))
        .collect();
    if pts.len() < 2 {
        return (f64::NAN, false);
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return (f64::NAN, false);
    }
    let slope = (n * sxy - sx * sy) / denom;
    (slope.exp(), true)
}

/// CSV serialization of scan rows: target coordinates, m_1..m_kmax,
/// growth_base, flag.
pub fn scan_rows_to_csv(rows: &[ScanRow]) -> String {
    let mut out = String::new();
    if rows.is_empty() {
        return out;
    }
    let ncoords = rows[0].target.coords().len();
    let kmax = rows[0].m_values.len();
    out.push_str("kind,");
    for i in 0..ncoords {
        out.push_str(&format!("re{i},im{i},"));
    }
    for k in 1..=kmax {
        out.push_str(&format!("m{k},"));
    }
    out.push_str("growth_base,flag\n");
    for row in rows {
        out.push_str(row.target.kind());
        out.push(',');
        for c in row.target.coords() {
            out.push_str(&format!("{},{},", c.re, c.im));
        }
        for v in &row.m_values {
            out.push_str(&format!("{v},"));
        }
        let flag = match row.flag {
            ScanFlag::Generic => "generic",
            ScanFlag::ExceptionalCandidate => "exceptional_candidate",
            ScanFlag::Unstable => "unstable",
        };
        out.push_str(&format!("{},{}\n", row.growth_base, flag));
    }
    out
}
