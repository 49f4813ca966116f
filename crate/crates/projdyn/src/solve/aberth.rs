//! Simultaneous root finding for complex univariate polynomials by the
//! Aberth–Ehrlich iteration, with multiplicity recovery by adaptive cluster
//! merging.

use num_complex::Complex64;

/// Roots with multiplicities. `residual_bound` is the largest relative
/// backward error |p(root)| / sum_k |a_k||root|^k over the returned roots.
#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<(Complex64, u32)>,
    pub residual_bound: f64,
    pub converged: bool,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> u32 {
        self.roots.iter().map(|&(_, m)| m).sum()
    }
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn scale_at(coeffs: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    let mut acc = 0.0;
    let mut rp = 1.0;
    for c in coeffs {
        acc += c.norm() * rp;
        rp *= r;
    }
    acc.max(f64::MIN_POSITIVE)
}

/// All complex roots of `coeffs[0] + coeffs[1] x + ...`.
///
/// Exact zero leading coefficients are trimmed; zero roots are split off
/// before iterating. When the iteration stalls the best iterate is returned
/// with `converged = false`.
pub fn roots_univariate(coeffs: &[Complex64]) -> RootSet {
    let mut cs: Vec<Complex64> = coeffs.to_vec();
    while cs.last().is_some_and(|c| c.norm() == 0.0) {
        cs.pop();
    }
    if cs.len() <= 1 {
        return RootSet {
            roots: vec![],
            residual_bound: 0.0,
            converged: true,
        };
    }
    // Roots at the origin.
    let mut zero_mult = 0u32;
    while cs.first().is_some_and(|c| c.norm() == 0.0) {
        cs.remove(0);
        zero_mult += 1;
    }

    let degree = cs.len() - 1;
    let mut approx = Vec::with_capacity(degree + usize::from(zero_mult > 0));
    let mut converged = true;
    if degree > 0 {
        let mut z = initial_guesses(&cs);
        converged = aberth_iterate(&cs, &mut z);
        approx.extend(z);
    }

    let mut residual_bound: f64 = 0.0;
    for &z in &approx {
        let (p, _) = horner(&cs, z);
        residual_bound = residual_bound.max(p.norm() / scale_at(&cs, z));
    }

    let mut roots = cluster(&approx, &cs);
    if zero_mult > 0 {
        roots.push((Complex64::new(0.0, 0.0), zero_mult));
    }
    RootSet {
        roots,
        residual_bound,
        converged,
    }
}

/// Sharpen a multiplicity-m cluster centroid: the (m-1)-th derivative has a
/// simple root there, where plain Newton converges quadratically.
fn refine_multiple(cs: &[Complex64], z0: Complex64, m: u32) -> Complex64 {
    let mut d: Vec<Complex64> = cs.to_vec();
    for _ in 1..m {
        d = d
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
    }
    let mut z = z0;
    for _ in 0..20 {
        let (p, dp) = horner(&d, z);
        if dp.norm() < 1e-300 {
            return z0;
        }
        let step = p / dp;
        z -= step;
        if step.norm() < 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    // Accept only a genuine improvement of the full residual.
    let before = horner(cs, z0).0.norm();
    let after = horner(cs, z).0.norm();
    if after <= before && (z - z0).norm() < 1e-2 * (1.0 + z0.norm()) {
        z
    } else {
        z0
    }
}

fn initial_guesses(cs: &[Complex64]) -> Vec<Complex64> {
    let degree = cs.len() - 1;
    let an = cs[degree].norm();
    // Fujiwara-style bound on root magnitudes.
    let mut r: f64 = 0.0;
    for (k, c) in cs.iter().enumerate().take(degree) {
        let pow = 1.0 / (degree - k) as f64;
        r = r.max(2.0 * (c.norm() / an).powf(pow));
    }
    let r = (0.5 * r).max(1e-3);
    (0..degree)
        .map(|k| {
            let th = std::f64::consts::TAU * k as f64 / degree as f64 + 0.4;
            // Radial jitter breaks symmetric configurations that otherwise
            // evolve collectively and converge slowly.
            let wobble = 1.0 + 0.15 * (((k as f64) * 0.618_033_988_75).fract() - 0.5);
            Complex64::from_polar(r * wobble, th)
        })
        .collect()
}

fn aberth_iterate(cs: &[Complex64], z: &mut [Complex64]) -> bool {
    let degree = z.len();
    let max_iter = 100 + 4 * degree.min(500);
    let mut locked = vec![false; degree];
    for _ in 0..max_iter {
        let mut active = 0usize;
        for i in 0..degree {
            if locked[i] {
                continue;
            }
            let (p, dp) = horner(cs, z[i]);
            if p.norm() <= 1e-15 * scale_at(cs, z[i]) {
                locked[i] = true;
                continue;
            }
            active += 1;
            let w = if dp.norm() > 0.0 {
                p / dp
            } else {
                Complex64::new(1e-8, 1e-8)
            };
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..degree {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 1e-290 {
                        s += Complex64::new(1.0, 0.0) / d;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * s;
            let step = if denom.norm() > 1e-12 { w / denom } else { w };
            z[i] -= step;
            if step.norm() < 1e-14 * (1.0 + z[i].norm()) {
                locked[i] = true;
            }
        }
        if active == 0 {
            return true;
        }
    }
    // Accept if every residual is already at backward-error level; the
    // iteration can cycle in the last ulps around multiple roots.
    z.iter()
        .all(|&zi| horner(cs, zi).0.norm() <= 1e-10 * scale_at(cs, zi))
}

/// Merge root approximations into multiplicity clusters.
///
/// A multiplicity-m root computed in doubles scatters into a ring of radius
/// about eps^(1/m), so a fixed radius cannot both merge those rings and keep
/// genuinely close simple roots apart. For each presumed multiplicity m
/// (largest first) connected components under the radius kappa^(1/m) are
/// merged when the component holds at least m approximations AND the merged
/// centroid still has a backward-stable residual; the residual check throws
/// out spurious merges of well-separated simple roots (e.g. dense root
/// circles) where the centroid is nowhere near a root.
fn cluster(approx: &[Complex64], cs: &[Complex64]) -> Vec<(Complex64, u32)> {
    const KAPPA: f64 = 1e-12;
    // Beyond this multiplicity the eps^(1/m) scatter radius exceeds typical
    // root separations and double precision cannot distinguish clusters.
    const MULTIPLICITY_CAP: usize = 32;
    let mut clusters: Vec<(Complex64, u32)> = approx.iter().map(|&z| (z, 1)).collect();
    let n = approx.len().min(MULTIPLICITY_CAP);
    for m in 2..=n.max(2) {
        let tau = KAPPA.powf(1.0 / m as f64);
        // Connected components of the proximity graph at this radius.
        let k = clusters.len();
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let r = find(parent, parent[i]);
                parent[i] = r;
            }
            parent[i]
        }
        for i in 0..k {
            for j in i + 1..k {
                let scale = clusters[i].0.norm().max(clusters[j].0.norm()).max(1.0);
                if (clusters[i].0 - clusters[j].0).norm() <= tau * scale {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri] = rj;
                    }
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..k {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        let mut next: Vec<(Complex64, u32)> = Vec::with_capacity(k);
        let mut changed = false;
        for (_, members) in groups {
            let total: u32 = members.iter().map(|&i| clusters[i].1).sum();
            if members.len() > 1 && total as usize >= m {
                let centroid = members
                    .iter()
                    .map(|&i| clusters[i].0 * clusters[i].1 as f64)
                    .sum::<Complex64>()
                    / total as f64;
                let (p, _) = horner(cs, centroid);
                if p.norm() <= 1e-9 * scale_at(cs, centroid) {
                    next.push((refine_multiple(cs, centroid, total), total));
                    changed = true;
                    continue;
                }
            }
            for &i in &members {
                next.push(clusters[i]);
            }
        }
        clusters = next;
        let _ = changed;
    }
    clusters
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quadratic() {
        // z^2 - 1
        let r = roots_univariate(&[c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(r.converged);
        assert_eq!(r.roots.len(), 2);
        let mut vals: Vec<f64> = r.roots.iter().map(|(z, _)| z.re).collect();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] + 1.0).abs() < 1e-12 && (vals[1] - 1.0).abs() < 1e-12);
        assert!(r.roots.iter().all(|&(_, m)| m == 1));
    }

    #[test]
    fn triple_root_merges() {
        // (z-2)^3 = z^3 - 6z^2 + 12z - 8
        let r = roots_univariate(&[c(-8.0, 0.0), c(12.0, 0.0), c(-6.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(r.roots.len(), 1, "roots: {:?}", r.roots);
        assert_eq!(r.roots[0].1, 3);
        assert!((r.roots[0].0 - c(2.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn close_simple_roots_stay_separate() {
        // (z - 1)(z - 1 - 1e-4): well-separated relative to pair tolerance.
        let a = 1.0;
        let b = 1.0 + 1e-4;
        let r = roots_univariate(&[c(a * b, 0.0), c(-(a + b), 0.0), c(1.0, 0.0)]);
        assert_eq!(r.roots.len(), 2, "roots: {:?}", r.roots);
    }

    #[test]
    fn roots_of_unity_1024() {
        // z^1024 - 1: all roots on the unit circle within 1e-10 radially.
        let mut cs = vec![c(0.0, 0.0); 1025];
        cs[0] = c(-1.0, 0.0);
        cs[1024] = c(1.0, 0.0);
        let r = roots_univariate(&cs);
        assert!(r.converged);
        assert_eq!(r.total_multiplicity(), 1024);
        let max_radial = r
            .roots
            .iter()
            .map(|(z, _)| (z.norm() - 1.0).abs())
            .fold(0.0, f64::max);
        assert!(max_radial < 1e-10, "radial error {max_radial}");
        assert!(r.residual_bound < 1e-10);
    }

    #[test]
    fn zero_roots_split_off() {
        // z^2 (z - 3)
        let r = roots_univariate(&[c(0.0, 0.0), c(0.0, 0.0), c(-3.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(r.total_multiplicity(), 3);
        let zero = r.roots.iter().find(|(z, _)| z.norm() == 0.0).unwrap();
        assert_eq!(zero.1, 2);
    }
}
