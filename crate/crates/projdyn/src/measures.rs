//! Empirical measures from backward iteration and the Green-function
//! estimator.
//!
//! A backward tree of depth k realizes λ^(-k) P_k* δ_w as a weighted point
//! cloud: every pre-image branch is followed and leaf weights are the path
//! multiplicities over λ^k, summed exactly before any float conversion.
//! The random backward walk samples the same limit object one branch at a
//! time. Moment discrepancies against reference measures act as the weak
//! convergence test harness.

use crate::polyalg::{FloatPoly, LogPolar};
use crate::projcore::{fs_distance, ProjPoint};
use crate::ratmap::RationalMap;
use crate::rng::Stream;
use crate::solve::{fiber, SolveError};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("tree would hold {atoms} atoms, above the cap {cap}")]
    ResourceLimit { atoms: u64, cap: u64 },
    #[error("backward walk dead-ended {0} times in a row")]
    DeadEnd(u32),
    #[error(transparent)]
    Degree(#[from] crate::degrees::DegreeError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Default cap on the number of tree leaves.
pub const TREE_CAP: u64 = 1_000_000;

/// A weighted finite point cloud on ℙⁿ.
#[derive(Clone, Debug)]
pub struct EmpiricalMeasure {
    atoms: Vec<(ProjPoint, f64)>,
    total_weight: f64,
}

impl EmpiricalMeasure {
    pub fn new(atoms: Vec<(ProjPoint, f64)>) -> Self {
        let total_weight = atoms.iter().map(|&(_, w)| w).sum();
        EmpiricalMeasure {
            atoms,
            total_weight,
        }
    }

    pub fn dirac(p: ProjPoint) -> Self {
        EmpiricalMeasure {
            atoms: vec![(p, 1.0)],
            total_weight: 1.0,
        }
    }

    pub fn atoms(&self) -> &[(ProjPoint, f64)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Weighted moment sum over chart-0 affine coordinates:
    /// sum_i w_i x^a conj(x)^b. Atoms at the chart's infinity are skipped.
    pub fn moment(&self, a: &[u32], b: &[u32]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, w) in &self.atoms {
            let Some(x) = p.affine(0) else { continue };
            let mut t = Complex64::new(*w, 0.0);
            for (i, &ai) in a.iter().enumerate() {
                t *= x[i].powu(ai);
            }
            for (i, &bi) in b.iter().enumerate() {
                t *= x[i].conj().powu(bi);
            }
            acc += t;
        }
        acc
    }

    /// Weighted mean of log |x_i| over chart-0 affine coordinates.
    pub fn mean_log_modulus(&self, coord: usize) -> f64 {
        let mut acc = 0.0;
        let mut wsum = 0.0;
        for (p, w) in &self.atoms {
            let Some(x) = p.affine(0) else { continue };
            let n = x[coord].norm();
            if n > 0.0 {
                acc += w * n.ln();
                wsum += w;
            }
        }
        if wsum > 0.0 {
            acc / wsum
        } else {
            0.0
        }
    }

    /// CSV serialization: one row per atom, real/imag affine coordinates in
    /// the atom's chart, weight, chart id.
    pub fn to_csv(&self) -> String {
        let n = self.atoms.first().map(|(p, _)| p.dim()).unwrap_or(0);
        let mut out = String::new();
        for i in 0..n {
            out.push_str(&format!("re{i},im{i},"));
        }
        out.push_str("weight,chart\n");
        for (p, w) in &self.atoms {
            let chart = (0..=p.dim())
                .max_by(|&i, &j| p.coords()[i].norm().total_cmp(&p.coords()[j].norm()))
                .unwrap();
            let chart = if p.affine(0).is_some() { 0 } else { chart };
            let x = p.affine(chart).expect("max coordinate chart is valid");
            for c in &x {
                out.push_str(&format!("{},{},", c.re, c.im));
            }
            out.push_str(&format!("{w},{chart}\n"));
        }
        out
    }
}

/// Backward tree output: the measure plus the mass lost through branches
/// that hit the indeterminacy locus or failed to resolve.
#[derive(Clone, Debug)]
pub struct BackwardTree {
    pub measure: EmpiricalMeasure,
    pub shortfall: f64,
}

/// All pre-images of `w` down to the given depth; leaf weights are the exact
/// path multiplicities over λ^depth.
pub fn backward_tree(
    map: &RationalMap,
    w: &ProjPoint,
    depth: u32,
    seed: u64,
) -> Result<BackwardTree, MeasureError> {
    let lambda = crate::degrees::topological_degree(map, 5, seed ^ 0xbeef)?;
    let leaves_bound = lambda.checked_pow(depth).unwrap_or(u64::MAX);
    if leaves_bound > TREE_CAP {
        return Err(MeasureError::ResourceLimit {
            atoms: leaves_bound,
            cap: TREE_CAP,
        });
    }
    if depth == 0 {
        return Ok(BackwardTree {
            measure: EmpiricalMeasure::dirac(w.clone()),
            shortfall: 0.0,
        });
    }

    let denom = (lambda as u128).pow(depth);
    let mut level: Vec<(ProjPoint, u128)> = vec![(w.clone(), 1)];
    let mut shortfall_units: u128 = 0;
    for depth_done in 0..depth {
        let remaining_after = depth - depth_done - 1;
        let mut next = Vec::with_capacity(level.len() * lambda as usize);
        for (idx, (point, mass)) in level.iter().enumerate() {
            let node_seed = seed ^ ((depth_done as u64) << 40) ^ (idx as u64);
            match fiber(map, point, node_seed) {
                Ok(f) => {
                    let mut found: u64 = 0;
                    for (child, mult) in &f.points {
                        found += *mult as u64;
                        next.push((child.clone(), mass * *mult as u128));
                    }
                    if found < lambda {
                        shortfall_units += mass
                            * (lambda - found) as u128
                            * (lambda as u128).pow(remaining_after);
                    }
                }
                Err(SolveError::InfiniteFiber) => {
                    shortfall_units += mass * (lambda as u128).pow(remaining_after + 1);
                }
                Err(e) => return Err(e.into()),
            }
        }
        level = next;
    }

    let atoms: Vec<(ProjPoint, f64)> = level
        .into_iter()
        .map(|(p, mass)| (p, mass as f64 / denom as f64))
        .collect();
    Ok(BackwardTree {
        measure: EmpiricalMeasure::new(atoms),
        shortfall: shortfall_units as f64 / denom as f64,
    })
}

/// Backward-walk output with restart accounting.
#[derive(Clone, Debug)]
pub struct BackwardWalk {
    pub measure: EmpiricalMeasure,
    pub restarts: u32,
}

/// Markov chain over pre-images: at each step jump to a multiplicity-weighted
/// random pre-image; record `samples` states after `burn_in`.
pub fn backward_walk(
    map: &RationalMap,
    w: &ProjPoint,
    burn_in: u32,
    samples: u32,
    seed: u64,
) -> Result<BackwardWalk, MeasureError> {
    assert!(samples >= 1);
    let stream = Stream::new(seed).substream(0x3a1c);
    let mut rng = stream.item(0);
    let mut current = w.clone();
    let mut recorded: Vec<(ProjPoint, f64)> = Vec::with_capacity(samples as usize);
    let mut restarts = 0u32;
    let mut consecutive_failures = 0u32;
    let mut step: u64 = 0;
    while recorded.len() < samples as usize {
        match fiber(map, &current, seed ^ step) {
            Ok(f) if !f.points.is_empty() => {
                consecutive_failures = 0;
                let total: u32 = f.points.iter().map(|&(_, m)| m).sum();
                let mut pick = rng.next_range(total as u64) as u32;
                let mut chosen = &f.points[0].0;
                for (p, m) in &f.points {
                    if pick < *m {
                        chosen = p;
                        break;
                    }
                    pick -= m;
                }
                current = chosen.clone();
                if step >= burn_in as u64 {
                    recorded.push((current.clone(), 1.0 / samples as f64));
                }
            }
            Ok(_) | Err(SolveError::InfiniteFiber) | Err(SolveError::ChartDegeneracy) => {
                // Dead end: restart the chain from the root.
                restarts += 1;
                consecutive_failures += 1;
                if consecutive_failures > 16 {
                    return Err(MeasureError::DeadEnd(consecutive_failures));
                }
                current = w.clone();
            }
            Err(e) => return Err(e.into()),
        }
        step += 1;
    }
    Ok(BackwardWalk {
        measure: EmpiricalMeasure::new(recorded),
        restarts,
    })
}

/// Image measure: apply the map to every atom, preserving weights. Atoms
/// within the indeterminacy guard are dropped and counted.
pub fn pushforward(map: &RationalMap, m: &EmpiricalMeasure) -> (EmpiricalMeasure, usize) {
    let comps: Vec<FloatPoly> = map
        .components()
        .iter()
        .map(|c| FloatPoly::compile(c.as_mpoly()))
        .collect();
    let mut atoms = Vec::with_capacity(m.len());
    let mut dropped = 0usize;
    for (p, w) in m.atoms() {
        let image: Vec<Complex64> = comps.iter().map(|f| f.eval(p.coords())).collect();
        let norm = image.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-10 {
            dropped += 1;
            continue;
        }
        match ProjPoint::normalize(&image) {
            Ok(q) => atoms.push((q, *w)),
            Err(_) => dropped += 1,
        }
    }
    (EmpiricalMeasure::new(atoms), dropped)
}

/// Exact weighted-multiset comparison: greedily pair atoms within `tol`
/// chordal distance and return the largest unmatched weight (0 when the two
/// measures agree as weighted point multisets).
pub fn pairing_discrepancy(a: &EmpiricalMeasure, b: &EmpiricalMeasure, tol: f64) -> f64 {
    // Cluster each measure's atoms, then compare cluster weights.
    let cluster = |m: &EmpiricalMeasure| -> Vec<(ProjPoint, f64)> {
        let mut out: Vec<(ProjPoint, f64)> = Vec::new();
        for (p, w) in m.atoms() {
            if let Some((_, wt)) = out.iter_mut().find(|(q, _)| fs_distance(p, q) < tol) {
                *wt += w;
            } else {
                out.push((p.clone(), *w));
            }
        }
        out
    };
    let ca = cluster(a);
    let mut cb = cluster(b);
    let mut worst: f64 = 0.0;
    for (p, wa) in &ca {
        match cb.iter().position(|(q, _)| fs_distance(p, q) < tol) {
            Some(i) => {
                worst = worst.max((wa - cb[i].1).abs());
                cb.remove(i);
            }
            None => worst = worst.max(*wa),
        }
    }
    for (_, wb) in cb {
        worst = worst.max(wb);
    }
    worst
}

/// Reference measures for moment comparisons in the chart-0 affine
/// coordinates.
pub enum Reference<'a> {
    /// Haar measure on the unit circle (ℙ¹ charts).
    CircleHaar,
    /// Haar measure on the unit 2-torus (ℙ² charts).
    TorusHaar,
    /// Another empirical measure.
    Sample(&'a EmpiricalMeasure),
}

/// Max moment deviation: over multi-indices |a|, |b| <= max_order, the
/// difference of sum w x^a conj(x)^b from the reference value, plus the
/// mean-log-modulus deviations.
pub fn moment_discrepancy(m: &EmpiricalMeasure, reference: &Reference, max_order: u32) -> f64 {
    let n = m.atoms().first().map(|(p, _)| p.dim()).unwrap_or(1);
    let mut worst: f64 = 0.0;
    let indices = multi_indices(n, max_order);
    for a in &indices {
        for b in &indices {
            let got = m.moment(a, b);
            let want = match reference {
                Reference::CircleHaar | Reference::TorusHaar => {
                    if a == b {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                }
                Reference::Sample(other) => other.moment(a, b),
            };
            worst = worst.max((got - want).norm());
        }
    }
    for coord in 0..n {
        let got = m.mean_log_modulus(coord);
        let want = match reference {
            Reference::CircleHaar | Reference::TorusHaar => 0.0,
            Reference::Sample(other) => other.mean_log_modulus(coord),
        };
        worst = worst.max((got - want).abs());
    }
    worst
}

fn multi_indices(n: usize, max_order: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0u32; n]];
    for _ in 0..max_order {
        let mut next = out.clone();
        for idx in &out {
            for i in 0..n {
                let mut v = idx.clone();
                v[i] += 1;
                if v.iter().sum::<u32>() <= max_order && !next.contains(&v) {
                    next.push(v.clone());
                }
            }
        }
        out = next;
    }
    out.sort();
    out.dedup();
    out
}

/// Green-function values on a grid of affine points.
#[derive(Clone, Debug)]
pub struct GreenEstimate {
    pub k: u32,
    pub normalizer_base: f64,
    /// (affine point, value); `None` marks an orbit that hit the
    /// indeterminacy locus.
    pub values: Vec<(Vec<Complex64>, Option<f64>)>,
}

/// G_k(z) = base^(-k) log(1 + |affine P_k(z)|²) on the grid.
///
/// Orbits are tracked in log-polar coordinates: per-coordinate log
/// magnitudes are re-centered at every step, so the doubly-exponential
/// magnitude growth of the iterates never leaves the double range. Monomial
/// maps iterate their exponent matrix symbolically (the reduced iterate);
/// general maps iterate pointwise.
pub fn green_estimate(
    map: &RationalMap,
    k: u32,
    normalizer_base: f64,
    grid: &[Vec<Complex64>],
) -> Result<GreenEstimate, MeasureError> {
    assert!(normalizer_base > 1.0, "normalizer base must exceed 1");
    let n = map.source_dim();
    let scale = normalizer_base.powi(-(k as i32));

    let eval_monomial = map.exponent_matrix().map(|a| {
        let mut acc = a.clone();
        for _ in 1..k {
            acc = crate::ratmap::ExponentMatrix::compose(&acc, &a).expect("exponent overflow");
        }
        acc
    });
    let comps: Vec<FloatPoly> = map
        .components()
        .iter()
        .map(|c| FloatPoly::compile(c.as_mpoly()))
        .collect();
    let degree = map.degree() as f64;

    let mut values = Vec::with_capacity(grid.len());
    for point in grid {
        assert_eq!(point.len(), n);
        let mut state: Vec<LogPolar> = std::iter::once(Complex64::new(1.0, 0.0))
            .chain(point.iter().copied())
            .map(LogPolar::from_complex)
            .collect();

        let value = if let Some(a) = &eval_monomial {
            // One exact symbolic step with the reduced k-th iterate.
            let image = monomial_apply(a.rows(), &state);
            if image.iter().all(|l| l.log_mag == f64::NEG_INFINITY) {
                None // the point lies on the indeterminacy locus
            } else {
                let v = green_value_from_logs(&image, scale);
                v.is_finite().then_some(v)
            }
        } else {
            let mut hit_indeterminacy = false;
            for _ in 0..k {
                let next: Vec<LogPolar> = comps.iter().map(|c| c.eval_log_polar(&state)).collect();
                let in_max = state
                    .iter()
                    .map(|l| l.log_mag)
                    .fold(f64::NEG_INFINITY, f64::max);
                let out_max = next
                    .iter()
                    .map(|l| l.log_mag)
                    .fold(f64::NEG_INFINITY, f64::max);
                if out_max - degree * in_max < (1e-12f64).ln() {
                    hit_indeterminacy = true;
                    break;
                }
                // Re-center magnitudes; the Green value is shift-invariant.
                state = next
                    .into_iter()
                    .map(|l| LogPolar {
                        log_mag: l.log_mag - out_max,
                        phase: l.phase,
                    })
                    .collect();
            }
            if hit_indeterminacy {
                None
            } else {
                Some(green_value_from_logs(&state, scale))
            }
        };
        values.push((point.clone(), value));
    }
    Ok(GreenEstimate {
        k,
        normalizer_base,
        values,
    })
}

fn monomial_apply(rows: &[Vec<u32>], state: &[LogPolar]) -> Vec<LogPolar> {
    rows.iter()
        .map(|row| {
            let mut log_mag = 0.0;
            let mut phase = 0.0;
            for (i, &e) in row.iter().enumerate() {
                if e > 0 {
                    log_mag += e as f64 * state[i].log_mag;
                    phase += e as f64 * state[i].phase;
                }
            }
            LogPolar { log_mag, phase }
        })
        .collect()
}

/// base^(-k) * log(1 + |affine|²) = scale * (log sum_i |z_i|² - 2 log |z_0|)
/// computed from per-coordinate log magnitudes.
fn green_value_from_logs(state: &[LogPolar], scale: f64) -> f64 {
    let max = state
        .iter()
        .map(|l| l.log_mag)
        .fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = state
        .iter()
        .map(|l| {
            let rel = 2.0 * (l.log_mag - max);
            if rel > -745.0 {
                rel.exp()
            } else {
                0.0
            }
        })
        .sum();
    let log_norm_sqr = 2.0 * max + sum.ln();
    scale * (log_norm_sqr - 2.0 * state[0].log_mag)
}

/// Affine square grid helper: `steps` points per side over [lo, hi]².
pub fn square_grid(lo: f64, hi: f64, steps: usize) -> Vec<Vec<Complex64>> {
    let mut out = Vec::with_capacity(steps * steps);
    for i in 0..steps {
        for j in 0..steps {
            let x = lo + (hi - lo) * i as f64 / (steps - 1) as f64;
            let y = lo + (hi - lo) * j as f64 / (steps - 1) as f64;
            out.push(vec![Complex64::new(x, 0.0), Complex64::new(y, 0.0)]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TZW: [&str; 3] = ["t", "z", "w"];

    fn squaring_p1() -> RationalMap {
        RationalMap::from_strings(&["z0^2", "z1^2"], &["z0", "z1"]).unwrap()
    }

    fn q_map() -> RationalMap {
        RationalMap::from_strings(&["t^3", "t*z^2", "w^3"], &TZW).unwrap()
    }

    #[test]
    fn tree_of_squaring_gives_roots_of_unity() {
        // Depth 10 from w = 1: the 1024 roots of unity with weights 2^-10.
        let m = squaring_p1();
        let w = ProjPoint::from_affine(&[Complex64::new(1.0, 0.0)]);
        let t = backward_tree(&m, &w, 10, 5).unwrap();
        assert_eq!(t.measure.len(), 1024);
        assert_eq!(t.shortfall, 0.0);
        assert!((t.measure.total_weight() - 1.0).abs() < 1e-12);
        for (p, wt) in t.measure.atoms() {
            assert!((wt - 1.0 / 1024.0).abs() < 1e-18);
            let x = p.affine(0).unwrap()[0];
            assert!((x.norm() - 1.0).abs() < 1e-12);
            // 1024th root of unity: x^1024 = 1.
            let mut y = x;
            for _ in 0..10 {
                y = y * y;
            }
            assert!((y - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        }
        // Depth 0 is the Dirac mass at w.
        let t0 = backward_tree(&m, &w, 0, 5).unwrap();
        assert_eq!(t0.measure.len(), 1);
        assert_eq!(t0.measure.total_weight(), 1.0);
    }

    #[test]
    fn tree_of_q_has_full_mass() {
        let q = q_map();
        let w = ProjPoint::from_affine(&[Complex64::new(1.3, 0.2), Complex64::new(0.8, -0.4)]);
        let t = backward_tree(&q, &w, 5, 6).unwrap();
        assert_eq!(t.measure.len(), 7776); // 6^5
        assert_eq!(t.shortfall, 0.0);
        assert!((t.measure.total_weight() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tree_cap_enforced() {
        let q = q_map();
        let w = ProjPoint::from_affine(&[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert!(matches!(
            backward_tree(&q, &w, 9, 6),
            Err(MeasureError::ResourceLimit { .. })
        ));
    }

    #[test]
    fn walk_concentrates_on_circle() {
        // Squaring map: the walk equidistributes on the unit circle.
        let m = squaring_p1();
        let w = ProjPoint::from_affine(&[Complex64::new(2.0, 0.7)]);
        let walk = backward_walk(&m, &w, 50, 10_000, 1).unwrap();
        assert_eq!(walk.measure.len(), 10_000);
        let mean = walk.measure.moment(&[1], &[0]);
        assert!(mean.norm() < 0.02, "mean z = {mean}");
        let mean_log = walk.measure.mean_log_modulus(0);
        assert!(mean_log.abs() < 0.02, "mean log |z| = {mean_log}");
        // Determinism.
        let again = backward_walk(&m, &w, 50, 10_000, 1).unwrap();
        assert_eq!(
            walk.measure.atoms()[17].0.coords(),
            again.measure.atoms()[17].0.coords()
        );
    }

    #[test]
    fn walk_on_q_reaches_the_torus() {
        let q = q_map();
        let w = ProjPoint::from_affine(&[Complex64::new(1.3, 0.2), Complex64::new(0.8, -0.4)]);
        let walk = backward_walk(&q, &w, 50, 10_000, 2).unwrap();
        let (mlz, mlw) = (
            walk.measure.mean_log_modulus(0),
            walk.measure.mean_log_modulus(1),
        );
        assert!(mlz.abs() < 0.05, "mean log|z| = {mlz}");
        assert!(mlw.abs() < 0.05, "mean log|w| = {mlw}");
    }

    #[test]
    fn pushforward_tree_recovers_parent_tree() {
        // P_* μ_(k+1) = μ_k exactly as weighted multisets.
        let m = squaring_p1();
        let w = ProjPoint::from_affine(&[Complex64::new(1.0, 0.4)]);
        for k in 1..=3 {
            let fine = backward_tree(&m, &w, k + 1, 9).unwrap();
            let coarse = backward_tree(&m, &w, k, 9).unwrap();
            let (pushed, dropped) = pushforward(&m, &fine.measure);
            assert_eq!(dropped, 0);
            let disc = pairing_discrepancy(&pushed, &coarse.measure, 1e-7);
            assert!(disc < 1e-12, "depth {k}: discrepancy {disc}");
        }
        // Identity pushforward of a Dirac mass.
        let id = RationalMap::identity(1);
        let (pushed, _) = pushforward(&id, &EmpiricalMeasure::dirac(w.clone()));
        assert!(fs_distance(&pushed.atoms()[0].0, &w) < 1e-12);
        // Atoms {1, -1} under squaring collapse to the Dirac at 1.
        let two = EmpiricalMeasure::new(vec![
            (ProjPoint::from_affine(&[Complex64::new(1.0, 0.0)]), 0.5),
            (ProjPoint::from_affine(&[Complex64::new(-1.0, 0.0)]), 0.5),
        ]);
        let (pushed, _) = pushforward(&m, &two);
        let one = ProjPoint::from_affine(&[Complex64::new(1.0, 0.0)]);
        assert!(pushed.atoms().iter().all(|(p, _)| fs_distance(p, &one) < 1e-12));
    }

    #[test]
    fn moment_discrepancy_reference_cases() {
        // 1024 roots of unity against circle Haar: exact cancellation.
        let m = squaring_p1();
        let w = ProjPoint::from_affine(&[Complex64::new(1.0, 0.0)]);
        let t = backward_tree(&m, &w, 10, 5).unwrap();
        let d = moment_discrepancy(&t.measure, &Reference::CircleHaar, 4);
        assert!(d < 1e-12, "discrepancy {d}");

        // A Dirac at 1 fails at order 1 with |E z| = 1.
        let dirac = EmpiricalMeasure::dirac(ProjPoint::from_affine(&[Complex64::new(1.0, 0.0)]));
        let d = moment_discrepancy(&dirac, &Reference::CircleHaar, 1);
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn q_tree_approaches_torus_haar() {
        let q = q_map();
        let w = ProjPoint::from_affine(&[Complex64::new(1.3, 0.2), Complex64::new(0.8, -0.4)]);
        let t = backward_tree(&q, &w, 6, 3).unwrap();
        assert_eq!(t.measure.len(), 46656);
        let d = moment_discrepancy(&t.measure, &Reference::TorusHaar, 3);
        assert!(d < 0.05, "discrepancy {d}");
    }

    #[test]
    fn tree_and_walk_sample_the_same_measure() {
        // Independent constructions of the same limit object agree on
        // low moments.
        let q = q_map();
        let w = ProjPoint::from_affine(&[Complex64::new(1.3, 0.2), Complex64::new(0.8, -0.4)]);
        let tree = backward_tree(&q, &w, 6, 4).unwrap();
        let walk = backward_walk(&q, &w, 50, 10_000, 4).unwrap();
        let d = moment_discrepancy(&walk.measure, &Reference::Sample(&tree.measure), 3);
        assert!(d < 0.1, "tree/walk discrepancy {d}");
    }

    #[test]
    fn green_closed_form_example1() {
        // (t^2, z^2, w^2): G = max(log+ |z|^2, log+ |w|^2).
        let m = RationalMap::from_strings(&["t^2", "z^2", "w^2"], &TZW).unwrap();
        let pts = vec![
            vec![Complex64::new(2.0, 0.0), Complex64::new(0.5, 0.0)],
            vec![Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0)],
            vec![Complex64::new(-3.0, 0.0), Complex64::new(3.0, 0.0)],
        ];
        let g = green_estimate(&m, 10, 2.0, &pts).unwrap();
        let closed = |z: Complex64, w: Complex64| -> f64 {
            let a = z.norm_sqr().ln().max(0.0);
            let b = w.norm_sqr().ln().max(0.0);
            a.max(b)
        };
        for (p, v) in &g.values {
            let expect = closed(p[0], p[1]);
            let got = v.unwrap();
            assert!((got - expect).abs() < 1e-3, "at {p:?}: {got} vs {expect}");
        }
        // The grid corner value at (2, 0.5) is log 4.
        assert!((g.values[0].1.unwrap() - 4.0f64.ln()).abs() < 1e-3);
    }

    #[test]
    fn green_closed_form_example2_points() {
        // (t^3, t z^2, w^3) with base 3: G = log+ |w|^2 where the w-term
        // dominates; spot values from the closed form.
        let q = q_map();
        let pts = vec![
            vec![Complex64::new(5.0, 0.0), Complex64::new(2.0, 0.0)],
            vec![Complex64::new(0.3, 0.0), Complex64::new(0.4, 0.0)],
        ];
        let g = green_estimate(&q, 10, 3.0, &pts).unwrap();
        assert!((g.values[0].1.unwrap() - 4.0f64.ln()).abs() < 1e-2);
        assert!(g.values[1].1.unwrap().abs() < 1e-2);
    }

    #[test]
    fn green_stabilizes_geometrically_for_holomorphic_maps() {
        let m = RationalMap::from_strings(&["t^2", "z^2", "w^2"], &TZW).unwrap();
        let grid = square_grid(-2.0, 2.0, 7);
        let mut sups = Vec::new();
        for k in 2..=8 {
            let a = green_estimate(&m, k, 2.0, &grid).unwrap();
            let b = green_estimate(&m, k + 1, 2.0, &grid).unwrap();
            let sup = a
                .values
                .iter()
                .zip(&b.values)
                .map(|((_, x), (_, y))| (x.unwrap() - y.unwrap()).abs())
                .fold(0.0f64, f64::max);
            sups.push(sup);
        }
        // Ratios bounded well below 1.
        for pair in sups.windows(2) {
            if pair[0] > 1e-12 {
                assert!(pair[1] / pair[0] < 0.8, "sups {sups:?}");
            }
        }
    }

    #[test]
    fn green_marks_orbits_through_indeterminacy() {
        // A non-monomial map with its indeterminacy point inside the affine
        // chart: the grid point sitting on I_P is marked, not fatal.
        let c = RationalMap::from_strings(&["z^2 + w^2", "z*w", "w^2 + z*t"], &TZW).unwrap();
        assert!(!c.is_holomorphic(1).unwrap());
        let pts = vec![
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)], // (1,0,0) ∈ I
            vec![Complex64::new(1.3, 0.0), Complex64::new(0.4, 0.2)],
        ];
        let g = green_estimate(&c, 4, 2.0, &pts).unwrap();
        assert!(g.values[0].1.is_none(), "orbit through I_P must be marked");
        assert!(g.values[1].1.is_some());
    }

    #[test]
    fn csv_is_deterministic() {
        let m = squaring_p1();
        let w = ProjPoint::from_affine(&[Complex64::new(1.0, 0.0)]);
        let t = backward_tree(&m, &w, 4, 5).unwrap();
        let a = t.measure.to_csv();
        let b = backward_tree(&m, &w, 4, 5).unwrap().measure.to_csv();
        assert_eq!(a, b);
        assert!(a.starts_with("re0,im0,weight,chart\n"));
        assert_eq!(a.lines().count(), 17);
    }
}
