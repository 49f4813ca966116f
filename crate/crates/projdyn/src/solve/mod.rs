//! Root solving: univariate complex roots, bivariate polynomial systems by
//! resultant elimination, and fibers P⁻¹(w) of rational maps.
//!
//! Elimination runs on the exact-coefficient side (targets are rationalized
//! exactly, coordinate rotations use exact integer matrices) and only the
//! final univariate root finding is floating point. Monomial maps take a
//! torus fast path: x^B = c is solved through a Smith normal form of the
//! affine exponent matrix.

pub mod aberth;
pub mod snf;

pub use aberth::{roots_univariate, RootSet};

use crate::polyalg::{
    gcd, resultant_bivariate, FloatPoly, GaussianRational, MPoly, RatPoly,
};
use crate::projcore::{fs_distance, wedge_distance, ProjPoint};
use crate::ratmap::RationalMap;
use crate::rng::{SplitMix64, Stream};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("polynomials share a common factor of positive degree")]
    CommonFactor,
    #[error("chart degeneracy: solutions at or near the chart's infinity")]
    ChartDegeneracy,
    #[error("fiber is infinite: the target meets the image of a contracted set")]
    InfiniteFiber,
    #[error("root finding did not converge")]
    NoConvergence,
    #[error("fiber solving supports self-maps of P^1 and P^2; got n = {0}")]
    UnsupportedDimension(usize),
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

/// Exact squarefree threshold: above this resultant degree multiplicity
/// recovery falls back to float clustering (generic targets are squarefree
/// anyway).
const YUN_DEGREE_CAP: usize = 64;

/// One isolated solution of a bivariate system.
#[derive(Clone, Debug)]
pub struct BivariateRoot {
    pub x: Complex64,
    pub y: Complex64,
    pub multiplicity: u32,
}

/// All isolated common zeros of two affine bivariate polynomials (variables
/// 0 and 1 of a two-variable space), found by eliminating variable 1,
/// root-solving in variable 0 and back-substituting.
pub fn solve_bivariate(p: &MPoly, q: &MPoly) -> Result<Vec<BivariateRoot>, SolveError> {
    assert_eq!(p.nvars(), 2);
    assert_eq!(q.nvars(), 2);
    if p.is_zero() || q.is_zero() {
        return Err(SolveError::Degenerate("zero polynomial".into()));
    }
    if p.is_constant() || q.is_constant() {
        return Ok(vec![]);
    }
    if !crate::polyalg::certified_coprime_mod(&[p, q]) && !gcd(p, q).is_constant() {
        return Err(SolveError::CommonFactor);
    }

    let res = resultant_bivariate(p, q, 1, 0);
    if res.is_zero() {
        return Err(SolveError::CommonFactor);
    }
    let x_roots = exact_univariate_roots(&res)?;

    let pf = FloatPoly::compile(p);
    let qf = FloatPoly::compile(q);
    let p_coeffs = p.coeffs_wrt(1);
    let q_coeffs = q.coeffs_wrt(1);

    let mut out = Vec::new();
    for (x0, mult) in x_roots {
        let pw = specialize(&p_coeffs, x0);
        let qw = specialize(&q_coeffs, x0);
        let candidates = back_substitute(&pw, &qw)?;
        if candidates.is_empty() {
            // Leading coefficients degenerated at x0: intersections escaped
            // to the chart's infinity.
            return Err(SolveError::ChartDegeneracy);
        }
        let polished: Vec<Complex64> = candidates
            .into_iter()
            .map(|y0| newton_polish(&pf, &qf, x0, y0))
            .filter(|&(x, y, ok)| {
                let _ = (x, y);
                ok
            })
            .map(|(_, y, _)| y)
            .collect();
        let mut dedup: Vec<Complex64> = Vec::new();
        for y in polished {
            if !dedup.iter().any(|z| (z - y).norm() < 1e-7 * (1.0 + y.norm())) {
                dedup.push(y);
            }
        }
        match dedup.len() {
            0 => return Err(SolveError::ChartDegeneracy),
            1 => out.push(BivariateRoot {
                x: x0,
                y: dedup[0],
                multiplicity: mult,
            }),
            // m simple points sharing this x-coordinate account for a
            // resultant root of multiplicity exactly m; any other split is
            // ambiguous from the projection alone, and the caller re-solves
            // in a rotated chart where distinct points separate.
            k if mult as usize == k => {
                for y in dedup {
                    out.push(BivariateRoot {
                        x: x0,
                        y,
                        multiplicity: 1,
                    });
                }
            }
            _ => return Err(SolveError::ChartDegeneracy),
        }
    }
    Ok(out)
}

/// Roots with multiplicities of an exact univariate polynomial: Yun
/// squarefree decomposition (multiplicities exact) followed by Aberth on
/// each squarefree factor.
fn exact_univariate_roots(f: &RatPoly) -> Result<Vec<(Complex64, u32)>, SolveError> {
    let d = f.degree().unwrap_or(0);
    if d == 0 {
        return Ok(vec![]);
    }
    if d <= YUN_DEGREE_CAP && !crate::polyalg::certified_squarefree_mod(f) {
        let mut out = Vec::new();
        for (factor, mult) in f.squarefree_decomposition() {
            let rs = roots_univariate(&factor.to_complex_coeffs());
            if !rs.converged {
                return Err(SolveError::NoConvergence);
            }
            for (z, m) in rs.roots {
                out.push((z, m * mult as u32));
            }
        }
        Ok(out)
    } else {
        let rs = roots_univariate(&f.to_complex_coeffs());
        if !rs.converged {
            return Err(SolveError::NoConvergence);
        }
        Ok(rs.roots)
    }
}

fn specialize(coeffs: &[MPoly], x0: Complex64) -> Vec<Complex64> {
    let at = [x0, Complex64::new(0.0, 0.0)];
    coeffs.iter().map(|c| c.eval_complex(&at)).collect()
}

/// Candidate y-values over a fixed x0: roots of the lower-degree specialized
/// polynomial, filtered by the residual of the other.
fn back_substitute(pw: &[Complex64], qw: &[Complex64]) -> Result<Vec<Complex64>, SolveError> {
    let trim = |cs: &[Complex64]| -> Vec<Complex64> {
        let scale = cs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
        let mut v: Vec<Complex64> = cs.to_vec();
        while v
            .last()
            .is_some_and(|c| c.norm() < 1e-10 * scale.max(f64::MIN_POSITIVE))
        {
            v.pop();
        }
        v
    };
    let pt = trim(pw);
    let qt = trim(qw);
    let (src, other) = if pt.len() <= 1 && qt.len() <= 1 {
        return Ok(vec![]);
    } else if pt.len() <= 1 || (qt.len() > 1 && qt.len() < pt.len()) {
        (qt.clone(), pt)
    } else {
        (pt.clone(), qt)
    };
    let rs = roots_univariate(&src);
    let eval_scale = |cs: &[Complex64], z: Complex64| -> f64 {
        let r = z.norm();
        let mut acc = 0.0;
        let mut rp = 1.0;
        for c in cs {
            acc += c.norm() * rp;
            rp *= r;
        }
        acc.max(f64::MIN_POSITIVE)
    };
    let horner = |cs: &[Complex64], z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in cs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    Ok(rs
        .roots
        .iter()
        .filter(|(z, _)| {
            other.len() <= 1 || horner(&other, *z).norm() <= 1e-6 * eval_scale(&other, *z)
        })
        .map(|&(z, _)| z)
        .collect())
}

/// A few damped Newton steps on the pair (p, q); returns (x, y, healthy).
fn newton_polish(pf: &FloatPoly, qf: &FloatPoly, x0: Complex64, y0: Complex64) -> (Complex64, Complex64, bool) {
    let mut x = x0;
    let mut y = y0;
    for _ in 0..8 {
        let at = [x, y];
        let (pv, pg) = pf.eval_with_gradient(&at);
        let (qv, qg) = qf.eval_with_gradient(&at);
        let det = pg[0] * qg[1] - pg[1] * qg[0];
        if det.norm() < 1e-14 {
            break; // singular point: keep the elimination value
        }
        let dx = (pv * qg[1] - qv * pg[1]) / det;
        let dy = (qv * pg[0] - pv * qg[0]) / det;
        x -= dx;
        y -= dy;
        if dx.norm() + dy.norm() < 1e-14 * (1.0 + x.norm() + y.norm()) {
            break;
        }
    }
    let at = [x, y];
    let healthy = pf.eval(&at).norm().is_finite() && qf.eval(&at).norm().is_finite();
    (x, y, healthy)
}

// ---------------------------------------------------------------------------
// Fibers of rational maps
// ---------------------------------------------------------------------------

/// The solution set P⁻¹(w) with multiplicities, minus indeterminacy hits
/// (which are listed separately with their local multiplicities).
#[derive(Clone, Debug)]
pub struct Fiber {
    pub map_degree_context: u32,
    pub points: Vec<(ProjPoint, u32)>,
    pub excluded_indeterminate: Vec<(ProjPoint, u32)>,
    /// Bézout completeness: the total multiplicity (points + excluded)
    /// accounts for deg(P)^n.
    pub complete: bool,
}

impl Fiber {
    pub fn count_with_multiplicity(&self) -> u32 {
        self.points.iter().map(|&(_, m)| m).sum()
    }

    pub fn indeterminacy_multiplicity(&self) -> u32 {
        self.excluded_indeterminate.iter().map(|&(_, m)| m).sum()
    }
}

/// Pre-images of `w` under a self-map of ℙ¹ or ℙ². `chart_seed` drives the
/// coordinate rotations; results are deterministic given it.
pub fn fiber(map: &RationalMap, w: &ProjPoint, chart_seed: u64) -> Result<Fiber, SolveError> {
    if !map.is_self_map() {
        return Err(SolveError::UnsupportedDimension(map.source_dim()));
    }
    let n = map.source_dim();
    assert_eq!(w.dim(), n, "target lives in the map's target space");
    if let Some(a) = map.exponent_matrix() {
        if let Some(f) = fiber_monomial(map, &a, w)? {
            return Ok(f);
        }
    }
    match n {
        1 => fiber_p1(map, w),
        2 => fiber_p2(map, w, chart_seed),
        other => Err(SolveError::UnsupportedDimension(other)),
    }
}

fn rationalize(w: &ProjPoint) -> Vec<GaussianRational> {
    w.coords()
        .iter()
        .map(|&c| GaussianRational::from_complex_exact(c))
        .collect()
}

fn fiber_p1(map: &RationalMap, w: &ProjPoint) -> Result<Fiber, SolveError> {
    let d = map.degree();
    let wr = rationalize(w);
    // w1 P0 - w0 P1 = 0 picks out P(z) parallel to w.
    let combo = map.components()[0]
        .as_mpoly()
        .scale(&wr[1])
        .sub(&map.components()[1].as_mpoly().scale(&wr[0]));
    if combo.is_zero() {
        return Err(SolveError::InfiniteFiber);
    }

    let mut points: Vec<(ProjPoint, u32)> = Vec::new();
    // Projective roots of a binary form: z0 | combo gives (0, 1), z1 | combo
    // gives (1, 0), the rest dehomogenizes to a univariate polynomial with
    // nonvanishing ends.
    let content = combo.monomial_content();
    let core = combo.div_monomial(&content);
    if content[0] > 0 {
        points.push((
            ProjPoint::normalize(&[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap(),
            content[0],
        ));
    }
    if content[1] > 0 {
        points.push((
            ProjPoint::normalize(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap(),
            content[1],
        ));
    }
    let uni = RatPoly::from_mpoly(&core.dehomogenize(0), 1);
    for (z, m) in exact_univariate_roots(&uni)? {
        points.push((
            ProjPoint::normalize(&[Complex64::new(1.0, 0.0), z]).unwrap(),
            m,
        ));
    }
    let total: u32 = points.iter().map(|&(_, m)| m).sum();
    Ok(Fiber {
        map_degree_context: d,
        points,
        excluded_indeterminate: vec![],
        complete: total == d,
    })
}

fn random_grat_vec(rng: &mut SplitMix64, len: usize) -> Vec<GaussianRational> {
    (0..len)
        .map(|_| {
            let re = GaussianRational::from_int(rng.next_i64_range(-9, 9));
            let im = GaussianRational::from_int(rng.next_i64_range(-9, 9));
            &re + &(&im * &GaussianRational::i())
        })
        .collect()
}

fn cross(u: &[GaussianRational], v: &[GaussianRational]) -> Vec<GaussianRational> {
    vec![
        &(&u[1] * &v[2]) - &(&u[2] * &v[1]),
        &(&u[2] * &v[0]) - &(&u[0] * &v[2]),
        &(&u[0] * &v[1]) - &(&u[1] * &v[0]),
    ]
}

fn is_zero_vec(v: &[GaussianRational]) -> bool {
    v.iter().all(GaussianRational::is_zero)
}

/// Exact random invertible integer coordinate change (identity for
/// `attempt == 0`, so the plain chart is tried first).
fn rotation_matrix(rng: &mut SplitMix64, attempt: u32) -> Vec<Vec<GaussianRational>> {
    if attempt == 0 {
        return (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        if i == j {
                            GaussianRational::one()
                        } else {
                            GaussianRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
    }
    loop {
        let m: Vec<Vec<i64>> = (0..3)
            .map(|_| (0..3).map(|_| rng.next_i64_range(-4, 4)).collect())
            .collect();
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if det != 0 {
            return m
                .into_iter()
                .map(|row| row.into_iter().map(GaussianRational::from_int).collect())
                .collect();
        }
    }
}

fn fiber_p2(map: &RationalMap, w: &ProjPoint, chart_seed: u64) -> Result<Fiber, SolveError> {
    let d = map.degree();
    let bezout = d * d;
    let wr = rationalize(w);
    let stream = Stream::new(chart_seed).substream(0xf1be);
    let float_comps: Vec<FloatPoly> = map
        .components()
        .iter()
        .map(|c| FloatPoly::compile(c.as_mpoly()))
        .collect();

    let mut best: Option<Fiber> = None;
    let mut last_err = SolveError::ChartDegeneracy;
    for attempt in 0..5u32 {
        let mut rng = stream.item(attempt as u64);
        // Two independent exact covectors annihilating the rationalized target.
        let a1 = cross(&random_grat_vec(&mut rng, 3), &wr);
        let a2 = cross(&random_grat_vec(&mut rng, 3), &wr);
        if is_zero_vec(&a1) || is_zero_vec(&a2) || !independent(&a1, &a2) {
            continue;
        }
        let c1 = combo(map, &a1);
        let c2 = combo(map, &a2);
        if c1.is_zero() || c2.is_zero() {
            continue;
        }
        if !crate::polyalg::certified_coprime_mod(&[&c1, &c2]) && !gcd(&c1, &c2).is_constant() {
            return Err(SolveError::InfiniteFiber);
        }
        let s = rotation_matrix(&mut rng, attempt);
        let d1 = c1.linear_change(&s).dehomogenize(0).drop_var(0);
        let d2 = c2.linear_change(&s).dehomogenize(0).drop_var(0);
        let roots = match solve_bivariate(&d1, &d2) {
            Ok(r) => r,
            Err(SolveError::CommonFactor) => return Err(SolveError::InfiniteFiber),
            Err(e) => {
                last_err = e;
                continue;
            }
        };
        let fiber = classify_solutions(map, &float_comps, w, &s, &roots, bezout);
        if fiber.complete {
            return Ok(fiber);
        }
        let better = match &best {
            None => true,
            Some(b) => {
                fiber.count_with_multiplicity() + fiber.indeterminacy_multiplicity()
                    > b.count_with_multiplicity() + b.indeterminacy_multiplicity()
            }
        };
        if better {
            best = Some(fiber);
        }
    }
    best.ok_or(last_err)
}

fn independent(a: &[GaussianRational], b: &[GaussianRational]) -> bool {
    !is_zero_vec(&cross(a, b))
}

fn combo(map: &RationalMap, a: &[GaussianRational]) -> MPoly {
    let mut acc = MPoly::zero(map.components()[0].num_vars());
    for (ai, c) in a.iter().zip(map.components()) {
        acc = acc.add(&c.as_mpoly().scale(ai));
    }
    acc
}

fn classify_solutions(
    map: &RationalMap,
    float_comps: &[FloatPoly],
    w: &ProjPoint,
    s: &[Vec<GaussianRational>],
    roots: &[BivariateRoot],
    bezout: u32,
) -> Fiber {
    let sf: Vec<Vec<Complex64>> = s
        .iter()
        .map(|row| row.iter().map(GaussianRational::to_complex).collect())
        .collect();
    let mut points = Vec::new();
    let mut excluded = Vec::new();
    for r in roots {
        let y = [Complex64::new(1.0, 0.0), r.x, r.y];
        let z: Vec<Complex64> = (0..3)
            .map(|i| (0..3).map(|j| sf[i][j] * y[j]).sum())
            .collect();
        let Ok(zp) = ProjPoint::normalize(&z) else {
            continue;
        };
        let image: Vec<Complex64> = float_comps.iter().map(|f| f.eval(zp.coords())).collect();
        let image_norm = image.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if image_norm < 1e-8 {
            excluded.push((zp, r.multiplicity));
            continue;
        }
        if wedge_distance(&image, w.coords()) < 1e-6 {
            points.push((zp, r.multiplicity));
        }
        // Anything else is a numerically ambiguous hit; dropping it leaves
        // the fiber incomplete and triggers a chart retry upstream.
    }
    let total: u32 = points.iter().map(|&(_, m)| m).sum::<u32>()
        + excluded.iter().map(|&(_, m)| m).sum::<u32>();
    Fiber {
        map_degree_context: map.degree(),
        points,
        excluded_indeterminate: excluded,
        complete: total == bezout,
    }
}

// ---------------------------------------------------------------------------
// Monomial fast path
// ---------------------------------------------------------------------------

fn cpow_int(z: Complex64, e: i64) -> Complex64 {
    if e >= 0 {
        z.powu(e as u32)
    } else {
        Complex64::new(1.0, 0.0) / z.powu((-e) as u32)
    }
}

fn kth_roots(c: Complex64, k: u32) -> Vec<Complex64> {
    let r = c.norm().powf(1.0 / k as f64);
    let th = c.arg() / k as f64;
    (0..k)
        .map(|j| Complex64::from_polar(r, th + std::f64::consts::TAU * j as f64 / k as f64))
        .collect()
}

/// Solve the fiber on the torus through the affine exponent matrix; `None`
/// when the target's zero pattern does not reduce to a torus system.
fn fiber_monomial(
    map: &RationalMap,
    a: &crate::ratmap::ExponentMatrix,
    w: &ProjPoint,
) -> Result<Option<Fiber>, SolveError> {
    let n = map.source_dim();
    if n > 2 {
        return Err(SolveError::UnsupportedDimension(n));
    }
    let coords = w.coords();
    let max = coords.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if coords.iter().any(|c| c.norm() < 1e-8 * max) {
        // Zero coordinates in the target: the fiber sits inside coordinate
        // subspaces; reduce there when the combinatorics allow it.
        return fiber_monomial_subspace(map, a, w);
    }
    let b = a.affine_matrix(0);
    let lam = a.topological_degree();
    if lam == 0 {
        return Err(SolveError::InfiniteFiber);
    }
    let c: Vec<Complex64> = (1..=n).map(|j| coords[j] / coords[0]).collect();

    let solutions: Vec<Vec<Complex64>> = if n == 1 {
        let e = b[0][0];
        let target = if e >= 0 { c[0] } else { Complex64::new(1.0, 0.0) / c[0] };
        kth_roots(target, e.unsigned_abs() as u32)
            .into_iter()
            .map(|x| vec![x])
            .collect()
    } else {
        let bb = [[b[0][0], b[0][1]], [b[1][0], b[1][1]]];
        let (l, dm, r) = snf::diagonalize_2x2(bb);
        // y^D = c^L, then x = y^R.
        let cp: Vec<Complex64> = (0..2)
            .map(|j| cpow_int(c[0], l[j][0]) * cpow_int(c[1], l[j][1]))
            .collect();
        let mut ys: Vec<Vec<Complex64>> = vec![vec![]];
        for j in 0..2 {
            let e = dm[j][j];
            let target = if e >= 0 { cp[j] } else { Complex64::new(1.0, 0.0) / cp[j] };
            let roots = kth_roots(target, e.unsigned_abs() as u32);
            let mut next = Vec::with_capacity(ys.len() * roots.len());
            for y in &ys {
                for &root in &roots {
                    let mut v = y.clone();
                    v.push(root);
                    next.push(v);
                }
            }
            ys = next;
        }
        ys.into_iter()
            .map(|y| {
                (0..2)
                    .map(|i| cpow_int(y[0], r[i][0]) * cpow_int(y[1], r[i][1]))
                    .collect()
            })
            .collect()
    };

    let mut points = Vec::with_capacity(solutions.len());
    for x in solutions {
        let p = ProjPoint::from_affine(&x);
        points.push((p, 1u32));
    }
    debug_assert_eq!(points.len() as u64, lam);
    Ok(Some(Fiber {
        map_degree_context: map.degree(),
        points,
        excluded_indeterminate: vec![],
        complete: true,
    }))
}

/// Fiber of a monomial self-map of ℙ² over a target with zero coordinates:
/// the pre-image lies on the coordinate subspace whose zero pattern matches
/// the target's, and the restricted system is again a torus equation. Each
/// point carries the equidistributed share of the Bézout multiplicity λ.
fn fiber_monomial_subspace(
    map: &RationalMap,
    a: &crate::ratmap::ExponentMatrix,
    w: &ProjPoint,
) -> Result<Option<Fiber>, SolveError> {
    let n = map.source_dim();
    if n != 2 {
        return Ok(None);
    }
    let coords = w.coords();
    let max = coords.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    let zero_set: Vec<usize> = (0..=n)
        .filter(|&i| coords[i].norm() < 1e-8 * max)
        .collect();
    if zero_set.len() != 1 {
        return Ok(None); // coordinate-point targets go to the general path
    }
    let lam = a.topological_degree();
    if lam == 0 {
        return Err(SolveError::InfiniteFiber);
    }
    let rows = a.rows();
    let support = |i: usize| -> Vec<usize> {
        (0..=n).filter(|&j| rows[i][j] > 0).collect()
    };
    // A source coordinate j to kill: exactly the zero components must use
    // it. Several candidates would mean several solution branches, which
    // this reduction does not handle.
    let matches: Vec<usize> = (0..=n)
        .filter(|&j| {
            let kills: Vec<usize> = (0..=n).filter(|&i| support(i).contains(&j)).collect();
            kills == zero_set
        })
        .collect();
    let [kill] = matches.as_slice() else {
        return Ok(None);
    };
    let kill = *kill;
    // Remaining coordinates and components form a 1-dimensional torus system.
    let live_coords: Vec<usize> = (0..=n).filter(|&j| j != kill).collect();
    let live_comps: Vec<usize> = (0..=n).filter(|&i| i != zero_set[0]).collect();
    // Components on the live coordinates only (the killed coordinate is 0
    // there by construction).
    if live_comps
        .iter()
        .any(|&i| rows[i][kill] > 0)
    {
        return Ok(None);
    }
    let (i0, i1) = (live_comps[0], live_comps[1]);
    let (j0, j1) = (live_coords[0], live_coords[1]);
    // (z_j1 / z_j0)^e = w_i1 / w_i0 up to the balanced j0-exponents.
    let e = rows[i1][j1] as i64 - rows[i0][j1] as i64;
    if e == 0 {
        return Ok(None);
    }
    let c = coords[i1] / coords[i0];
    let target = if e >= 0 { c } else { Complex64::new(1.0, 0.0) / c };
    let roots = kth_roots(target, e.unsigned_abs() as u32);
    let count = roots.len() as u64;
    if lam % count != 0 {
        return Ok(None);
    }
    let mult = (lam / count) as u32;
    let mut points = Vec::with_capacity(roots.len());
    for x in roots {
        let mut v = vec![Complex64::new(0.0, 0.0); n + 1];
        v[j0] = Complex64::new(1.0, 0.0);
        v[j1] = x;
        let p = ProjPoint::normalize(&v).expect("nonzero");
        points.push((p, mult));
    }
    Ok(Some(Fiber {
        map_degree_context: map.degree(),
        points,
        excluded_indeterminate: vec![],
        complete: true,
    }))
}

// ---------------------------------------------------------------------------
// Indeterminacy analysis (exposed on RationalMap)
// ---------------------------------------------------------------------------

/// Isolated indeterminacy points with local multiplicities.
#[derive(Clone, Debug)]
pub struct IndeterminacyReport {
    pub points: Vec<(ProjPoint, u32)>,
    pub total_multiplicity: u32,
}

impl RationalMap {
    /// Common zeros of the components (the indeterminacy locus), with
    /// multiplicities given by the local intersection numbers of a generic
    /// pencil pair. Per-point numbers sum to q = d² - δ₂ for self-maps of ℙ².
    pub fn indeterminacy_points(
        &self,
        seed: u64,
    ) -> Result<IndeterminacyReport, crate::ratmap::MapError> {
        let n = self.source_dim();
        // A reduced tuple on P^1 has no common zeros at all.
        if n == 1 {
            return Ok(IndeterminacyReport {
                points: vec![],
                total_multiplicity: 0,
            });
        }
        if let Some(a) = self.exponent_matrix() {
            if monomial_is_holomorphic(&a) {
                return Ok(IndeterminacyReport {
                    points: vec![],
                    total_multiplicity: 0,
                });
            }
        }
        if n != 2 || self.target_dim() != 2 {
            return Err(crate::ratmap::MapError::Solver(format!(
                "indeterminacy multiplicities are computed for self-maps of P^2; got P^{n} -> P^{}",
                self.target_dim()
            )));
        }

        // Indeterminacy hits appear in the excluded part of any complete
        // fiber; two independent targets must agree.
        let stream = Stream::new(seed).substream(0x1dde);
        let mut reports: Vec<Vec<(ProjPoint, u32)>> = Vec::new();
        let mut attempt = 0u64;
        while reports.len() < 2 && attempt < 16 {
            let target = crate::projcore::fs_point(&stream, attempt, 2);
            attempt += 1;
            // The full Bézout pencil is required here: the monomial torus
            // shortcut never meets the indeterminacy locus.
            match fiber_p2(self, &target, seed ^ attempt) {
                Ok(f) if f.complete => reports.push(f.excluded_indeterminate),
                Ok(_) => continue,
                Err(SolveError::InfiniteFiber) => continue,
                Err(e) => return Err(crate::ratmap::MapError::Solver(e.to_string())),
            }
        }
        if reports.len() < 2 {
            return Err(crate::ratmap::MapError::Solver(
                "no complete generic fiber found for indeterminacy analysis".into(),
            ));
        }
        // Indeterminacy hits are degenerate roots; their computed positions
        // scatter like residual^(1/multiplicity), so matching uses a loose
        // pairing radius (points of I_P are well separated at desk scale).
        let agree = reports[0].len() == reports[1].len()
            && reports[0].iter().all(|(p, m)| {
                reports[1]
                    .iter()
                    .any(|(q, mm)| m == mm && fs_distance(p, q) < 1e-4)
            });
        if !agree {
            return Err(crate::ratmap::MapError::Solver(
                "indeterminacy multiplicities disagree between generic pencils".into(),
            ));
        }
        let points = reports.swap_remove(0);
        let total_multiplicity = points.iter().map(|&(_, m)| m).sum();
        Ok(IndeterminacyReport {
            points,
            total_multiplicity,
        })
    }

    /// Whether the map has empty indeterminacy locus. Monomial maps are
    /// checked combinatorially in any dimension; otherwise the report is used.
    pub fn is_holomorphic(&self, seed: u64) -> Result<bool, crate::ratmap::MapError> {
        if self.source_dim() == 1 {
            return Ok(true);
        }
        if let Some(a) = self.exponent_matrix() {
            return Ok(monomial_is_holomorphic(&a));
        }
        Ok(self.indeterminacy_points(seed)?.points.is_empty())
    }
}

/// A monomial map is holomorphic iff for every nonempty proper subset T of
/// the variables some component's support avoids T (no point with zero set
/// exactly T kills all components).
fn monomial_is_holomorphic(a: &crate::ratmap::ExponentMatrix) -> bool {
    let nvars = a.rows()[0].len();
    for mask in 1..(1u32 << nvars) - 1 {
        let all_vanish = a.rows().iter().all(|row| {
            (0..nvars).any(|j| mask & (1 << j) != 0 && row[j] > 0)
        });
        if all_vanish {
            return false;
        }
    }
    true
}
