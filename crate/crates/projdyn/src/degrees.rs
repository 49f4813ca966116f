//! Intermediate degrees δ_ℓ(P), the topological degree λ = δ_n, and
//! property reports for the degree inequalities.
//!
//! Two independent routes produce the same numbers: exact fiber counting
//! (resultant elimination, or the exponent-matrix determinant for monomial
//! maps) and Monte-Carlo integration of Fubini–Study pullback densities.

use crate::parallel::sharded_map;
use crate::polyalg::MPoly;
use crate::projcore::{fs_point, GeomError, PullbackEvaluator};
use crate::ratmap::{MapError, RationalMap};
use crate::rng::Stream;
use crate::solve::{fiber, SolveError};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DegreeError {
    #[error("fiber counts disagree across trials: {counts:?}")]
    UnstableCount { counts: Vec<u64> },
    #[error("map has rank below the requested codimension")]
    RankDeficient,
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// How a degree entry was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeMethod {
    FiberCount,
    CurveDegree,
    MonomialDeterminant,
    McIntegral,
}

/// Exact degree data for one map (usually one iterate in a table).
#[derive(Clone, Debug, Serialize)]
pub struct DegreeReport {
    pub map_id: String,
    /// δ₁ = deg P.
    pub d: u64,
    /// δ₁ … δ_min(n,m); `None` marks entries out of the supported range.
    pub deltas: Vec<Option<u64>>,
    /// λ = δ_n for self-maps.
    pub lambda: Option<u64>,
    pub holomorphic: bool,
    /// q = d² - δ₂ for self-maps of ℙ² (total indeterminacy multiplicity).
    pub q: Option<u64>,
    pub method_per_entry: Vec<Option<DegreeMethod>>,
    pub seed: u64,
}

/// Number of pre-images (with multiplicity) of a generic point: the modal
/// count over `trials` seeded random targets, with a retry policy for
/// non-generic draws. Monomial maps are cross-checked against |det| of the
/// affine exponent matrix.
pub fn topological_degree(
    map: &RationalMap,
    trials: u32,
    seed: u64,
) -> Result<u64, DegreeError> {
    let n = map.source_dim();
    if !map.is_self_map() {
        return Err(DegreeError::Map(MapError::NotSelfMap {
            n,
            m: map.target_dim(),
        }));
    }
    let det = map.exponent_matrix().map(|a| a.topological_degree());
    if let Some(0) = det {
        return Err(DegreeError::RankDeficient);
    }
    if n > 2 {
        // Only the monomial fast path reaches beyond the plane.
        return det.ok_or(DegreeError::Solve(SolveError::UnsupportedDimension(n)));
    }

    let stream = Stream::new(seed).substream(0x70b0);
    let mut counts = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let sub = stream.substream(trial as u64);
        let mut count = None;
        for attempt in 0..8u64 {
            let w = fs_point(&sub, attempt, n);
            match fiber(map, &w, seed ^ (trial as u64) << 8 | attempt) {
                Ok(f) if f.complete => {
                    count = Some(f.count_with_multiplicity() as u64);
                    break;
                }
                Ok(_) | Err(SolveError::InfiniteFiber) | Err(SolveError::ChartDegeneracy) => {
                    continue;
                }
                Err(e) => return Err(e.into()),
            }
        }
        if let Some(c) = count {
            counts.push(c);
        }
    }
    if counts.is_empty() {
        return Err(DegreeError::UnstableCount { counts });
    }
    let mode = {
        let mut best = (0u64, 0usize);
        for &c in &counts {
            let freq = counts.iter().filter(|&&x| x == c).count();
            if freq > best.1 {
                best = (c, freq);
            }
        }
        best
    };
    let required = (5 * trials as usize).div_ceil(7);
    if mode.1 < required.min(counts.len()) {
        return Err(DegreeError::UnstableCount { counts });
    }
    if let Some(det) = det {
        if det != mode.0 {
            return Err(DegreeError::UnstableCount {
                counts: vec![mode.0, det],
            });
        }
    }
    if mode.0 == 0 {
        return Err(DegreeError::RankDeficient);
    }
    Ok(mode.0)
}

/// δ_ℓ(P): the degree of the pre-image of a generic codimension-ℓ linear
/// subspace. ℓ = 1 is the degree of the reduced pullback of a generic
/// hyperplane; ℓ = n is the topological degree.
pub fn intermediate_degree(
    map: &RationalMap,
    l: usize,
    seed: u64,
) -> Result<u64, DegreeError> {
    let n = map.source_dim();
    let m = map.target_dim();
    assert!(l >= 1 && l <= n.min(m), "l out of range");
    if l == 1 {
        // Reduced pullback of a generic hyperplane: a single curve A·P whose
        // degree is the common component degree (the tuple is reduced).
        let mut rng = Stream::new(seed).substream(0xc0de).item(0);
        let a: Vec<crate::polyalg::GaussianRational> = (0..=m)
            .map(|_| crate::polyalg::GaussianRational::from_int(rng.next_i64_range(1, 97)))
            .collect();
        let mut combo = MPoly::zero(n + 1);
        for (ai, c) in a.iter().zip(map.components()) {
            combo = combo.add(&c.as_mpoly().scale(ai));
        }
        let deg = combo.total_degree().ok_or(DegreeError::RankDeficient)?;
        return Ok(deg as u64);
    }
    if l == n && n == m {
        return topological_degree(map, 7, seed);
    }
    Err(DegreeError::Solve(SolveError::UnsupportedDimension(n)))
}

/// Monte-Carlo estimate of δ_ℓ(P) = ∫ (P*ω)^ℓ ∧ ω^(n-ℓ): the mean pullback
/// density over FS-volume samples, with hits on the indeterminacy locus
/// resampled (it has measure zero). Returns (estimate, standard error).
pub fn mc_intermediate_degree(
    map: &RationalMap,
    l: usize,
    samples: usize,
    seed: u64,
    workers: usize,
) -> (f64, f64) {
    let n = map.source_dim();
    let stream = Stream::new(seed).substream(0x3c13);
    let partials = sharded_map(samples, workers, |range| {
        let ev = PullbackEvaluator::new(map.components());
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        let mut used = 0usize;
        for i in range {
            // Resample indeterminacy hits deterministically by stepping into
            // a disjoint index stream.
            let mut idx = i as u64;
            let v = loop {
                let z = fs_point(&stream, idx, n);
                match ev.density(&z, l) {
                    Ok(d) => break d.value(),
                    Err(GeomError::IndeterminatePoint { .. }) => {
                        idx = idx.wrapping_add(0x5151_0000_0000 + samples as u64);
                    }
                    Err(_) => break 0.0,
                }
            };
            sum += v;
            sumsq += v * v;
            used += 1;
        }
        (sum, sumsq, used)
    });
    let (sum, sumsq, used) = partials
        .into_iter()
        .fold((0.0, 0.0, 0usize), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    let mean = sum / used as f64;
    let var = (sumsq / used as f64 - mean * mean).max(0.0);
    (mean, (var / used as f64).sqrt())
}

/// Degree data for the iterates P¹ … P^k_max of a self-map.
pub fn degree_table(
    map: &RationalMap,
    k_max: u32,
    seed: u64,
) -> Result<Vec<DegreeReport>, DegreeError> {
    let n = map.source_dim();
    if !map.is_self_map() {
        return Err(DegreeError::Map(MapError::NotSelfMap {
            n,
            m: map.target_dim(),
        }));
    }
    let mut out = Vec::with_capacity(k_max as usize);
    let mut iterate = map.clone();
    for k in 1..=k_max {
        if k > 1 {
            iterate = RationalMap::compose(map, &iterate)?;
        }
        out.push(report_for(&iterate, &format!("k={k}"), seed ^ k as u64)?);
    }
    Ok(out)
}

/// Degree report for a single map, with all report invariants enforced.
pub fn report_for(map: &RationalMap, map_id: &str, seed: u64) -> Result<DegreeReport, DegreeError> {
    let n = map.source_dim();
    let m = map.target_dim();
    let d = map.degree() as u64;
    let top = n.min(m);
    let mut deltas: Vec<Option<u64>> = vec![None; top];
    let mut methods: Vec<Option<DegreeMethod>> = vec![None; top];
    deltas[0] = Some(d);
    methods[0] = Some(DegreeMethod::CurveDegree);
    let monomial = map.exponent_matrix().is_some();
    if top >= 2 && n == m && n == 2 {
        deltas[1] = Some(topological_degree(map, 7, seed)?);
        methods[1] = Some(if monomial {
            DegreeMethod::MonomialDeterminant
        } else {
            DegreeMethod::FiberCount
        });
    } else if n == m && n > 2 && monomial {
        deltas[n - 1] = Some(topological_degree(map, 1, seed)?);
        methods[n - 1] = Some(DegreeMethod::MonomialDeterminant);
    }
    let lambda = if n == m { deltas[n - 1] } else { None };
    let holomorphic = map.is_holomorphic(seed)?;
    let q = if n == 2 && m == 2 {
        lambda.map(|l| d * d - l)
    } else {
        None
    };

    // Report invariants.
    for (i, delta) in deltas.iter().enumerate() {
        if let Some(v) = delta {
            assert!(*v >= 1 && *v <= d.pow(i as u32 + 1), "1 <= δ_ℓ <= d^ℓ");
        }
    }
    for i in 0..top {
        for j in 0..top {
            if i + j + 2 <= top {
                if let (Some(a), Some(b), Some(c)) = (deltas[i], deltas[j], deltas[i + j + 1]) {
                    assert!(c <= a * b, "δ_(k+ℓ) <= δ_k δ_ℓ");
                }
            }
        }
    }
    if n == m {
        if let Some(l) = lambda {
            assert_eq!(holomorphic, l == d.pow(n as u32), "holomorphic ⟺ δ_n = d^n");
        }
    }

    Ok(DegreeReport {
        map_id: map_id.to_string(),
        d,
        deltas,
        lambda,
        holomorphic,
        q,
        method_per_entry: methods,
        seed,
    })
}

/// Pass/fail record for the degree inequalities on a composable pair.
#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    pub delta_p: Vec<u64>,
    pub delta_q: Vec<u64>,
    pub delta_qp: Vec<u64>,
    pub composition_submultiplicative: bool,
    pub delta2_le_d_squared: bool,
    pub q_identity_holds: Option<bool>,
}

/// δ_ℓ of P, Q and Q∘P for ℓ ∈ {1, 2} on self-maps of ℙ², with the
/// submultiplicativity and d²-defect checks.
pub fn inequality_report(
    p: &RationalMap,
    q: &RationalMap,
    seed: u64,
) -> Result<InequalityReport, DegreeError> {
    assert_eq!(p.source_dim(), 2);
    assert_eq!(q.source_dim(), 2);
    let qp = RationalMap::compose(q, p)?;
    let dp = [p.degree() as u64, topological_degree(p, 7, seed ^ 1)?];
    let dq = [q.degree() as u64, topological_degree(q, 7, seed ^ 2)?];
    let dqp = [qp.degree() as u64, topological_degree(&qp, 7, seed ^ 3)?];
    let composition_submultiplicative = dqp[0] <= dp[0] * dq[0] && dqp[1] <= dp[1] * dq[1];
    let delta2_le_d_squared =
        dp[1] <= dp[0] * dp[0] && dq[1] <= dq[0] * dq[0] && dqp[1] <= dqp[0] * dqp[0];
    let q_identity_holds = match p.indeterminacy_points(seed ^ 4) {
        Ok(rep) => Some(dp[1] + rep.total_multiplicity as u64 == dp[0] * dp[0]),
        Err(_) => None,
    };
    Ok(InequalityReport {
        delta_p: dp.to_vec(),
        delta_q: dq.to_vec(),
        delta_qp: dqp.to_vec(),
        composition_submultiplicative,
        delta2_le_d_squared,
        q_identity_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TZW: [&str; 3] = ["t", "z", "w"];

    fn q_map() -> RationalMap {
        RationalMap::from_strings(&["t^3", "t*z^2", "w^3"], &TZW).unwrap()
    }

    fn cremona() -> RationalMap {
        RationalMap::from_strings(&["z*w", "t*w", "t*z"], &TZW).unwrap()
    }

    fn squares() -> RationalMap {
        RationalMap::from_strings(&["t^2", "z^2", "w^2"], &TZW).unwrap()
    }

    #[test]
    fn topological_degrees_of_named_maps() {
        assert_eq!(topological_degree(&cremona(), 7, 1).unwrap(), 1);
        assert_eq!(topological_degree(&q_map(), 7, 2).unwrap(), 6);
        assert_eq!(topological_degree(&squares(), 7, 3).unwrap(), 4);
    }

    #[test]
    fn intermediate_degrees_of_named_maps() {
        assert_eq!(intermediate_degree(&q_map(), 1, 5).unwrap(), 3);
        assert_eq!(intermediate_degree(&q_map(), 2, 5).unwrap(), 6);
        assert_eq!(intermediate_degree(&cremona(), 1, 5).unwrap(), 2);
        assert_eq!(intermediate_degree(&cremona(), 2, 5).unwrap(), 1);
        let id = RationalMap::identity(2);
        assert_eq!(intermediate_degree(&id, 1, 5).unwrap(), 1);
        assert_eq!(intermediate_degree(&id, 2, 5).unwrap(), 1);
    }

    #[test]
    fn degree_tables_match_closed_forms() {
        let rows = degree_table(&q_map(), 3, 11).unwrap();
        let d1: Vec<u64> = rows.iter().map(|r| r.d).collect();
        let d2: Vec<u64> = rows.iter().map(|r| r.lambda.unwrap()).collect();
        assert_eq!(d1, vec![3, 9, 27]);
        assert_eq!(d2, vec![6, 36, 216]);
        assert!(rows.iter().all(|r| !r.holomorphic));
        let qs: Vec<u64> = rows.iter().map(|r| r.q.unwrap()).collect();
        assert_eq!(qs, vec![3, 45, 513]); // d^2 - λ per iterate

        let rows = degree_table(&squares(), 2, 11).unwrap();
        assert!(rows.iter().all(|r| r.holomorphic));
        assert_eq!(rows[0].lambda, Some(4));
        assert_eq!(rows[1].lambda, Some(16));
        assert_eq!(rows[0].q, Some(0));
    }

    #[test]
    fn non_generic_example3_table() {
        let r = RationalMap::from_strings(&["t^3", "w^3", "t*z^2"], &TZW).unwrap();
        let rows = degree_table(&r, 2, 13).unwrap();
        assert_eq!(rows[0].d, 3);
        assert_eq!(rows[1].d, 6);
        assert_eq!(rows[0].lambda, Some(6));
        assert_eq!(rows[1].lambda, Some(36));
    }

    #[test]
    fn mc_integral_matches_fiber_count() {
        // Definition (integral of pullback densities) against the geometric
        // fiber count, at modest sample size; the acceptance suite repeats
        // this at full scale.
        let q = q_map();
        let (est, se) = mc_intermediate_degree(&q, 2, 20_000, 9, 4);
        assert!(
            (est - 6.0).abs() < 4.0 * se.max(0.02),
            "estimate {est} ± {se}"
        );
        let c = cremona();
        let (est, se) = mc_intermediate_degree(&c, 2, 20_000, 9, 4);
        assert!((est - 1.0).abs() < 4.0 * se.max(0.02), "estimate {est} ± {se}");
    }

    #[test]
    fn inequality_report_on_cremona_pair() {
        // Cremona ∘ Cremona reduces to the identity.
        let c = cremona();
        let rep = inequality_report(&c, &c, 3).unwrap();
        assert_eq!(rep.delta_qp, vec![1, 1]);
        assert!(rep.composition_submultiplicative);
        assert!(rep.delta2_le_d_squared);
        assert_eq!(rep.q_identity_holds, Some(true));

        let q = q_map();
        let rep = inequality_report(&q, &q, 3).unwrap();
        assert_eq!(rep.delta_qp, vec![9, 36]);
        assert!(rep.composition_submultiplicative);
    }

    #[test]
    fn unstable_or_rank_deficient_paths() {
        // A non-dominant monomial map (all rows identical after reduction
        // collapses it to degree 0) is rejected cleanly.
        let m = RationalMap::from_strings(&["t*z", "t*z", "z*w"], &TZW);
        // Components share no overall gcd, but the map is degenerate; either
        // construction or degree computation must refuse it.
        if let Ok(map) = m {
            assert!(topological_degree(&map, 7, 5).is_err());
        }
    }
}
