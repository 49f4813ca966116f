//! Property tests for the algebraic and geometric invariants.

use num_complex::Complex64;
use projdyn::polyalg::{gcd, parse, GaussianRational, HomoPoly, MPoly};
use projdyn::projcore::{fs_distance, sample_fs, ProjPoint};
use proptest::prelude::*;

fn arb_coeff() -> impl Strategy<Value = GaussianRational> {
    (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4).prop_map(|(an, ad, bn, bd)| {
        let re = GaussianRational::from_ratio(an, ad);
        let im = &GaussianRational::from_ratio(bn, bd) * &GaussianRational::i();
        &re + &im
    })
}

/// Sparse homogeneous polynomial in 3 variables of the given degree.
fn arb_homo(degree: u32) -> impl Strategy<Value = HomoPoly> {
    let exps = (0..=degree).prop_flat_map(move |a| {
        (0..=(degree - a)).prop_map(move |b| vec![a, b, degree - a - b])
    });
    proptest::collection::vec((exps, arb_coeff()), 1..6).prop_map(move |terms| {
        HomoPoly::try_new(MPoly::from_terms(3, terms)).expect("constructed homogeneous")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parse_render_roundtrip(p in arb_homo(4)) {
        let text = p.render(&["t", "z", "w"]);
        let back = parse(&text, &["t", "z", "w"]).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn evaluation_respects_homogeneity(p in arb_homo(3), s in -2.0f64..2.0, t in -2.0f64..2.0) {
        // p(λ z) = λ^d p(z) to relative 1e-10.
        prop_assume!(s.abs() + t.abs() > 0.1);
        let lambda = Complex64::new(s, t);
        let z = [
            Complex64::new(0.7, -0.2),
            Complex64::new(-0.4, 0.9),
            Complex64::new(0.3, 0.5),
        ];
        let scaled: Vec<Complex64> = z.iter().map(|c| c * lambda).collect();
        let lhs = p.evaluate(&scaled);
        let rhs = lambda.powu(p.degree().unwrap_or(0)) * p.evaluate(&z);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
    }

    #[test]
    fn euler_identity(p in arb_homo(4)) {
        // sum_i z_i ∂_i p = deg(p) · p, exactly.
        let mut acc = MPoly::zero(3);
        for i in 0..3 {
            acc = acc.add(&MPoly::variable(3, i).mul(p.as_mpoly().derivative(i).as_ref()));
        }
        let expect = p
            .as_mpoly()
            .scale(&GaussianRational::from_int(p.degree().unwrap_or(0) as i64));
        prop_assert_eq!(acc, expect);
    }

    #[test]
    fn gcd_divides_and_scales(p in arb_homo(2), q in arb_homo(3), g in arb_homo(2)) {
        // gcd(p, q) divides both; gcd(p g, q g) is divisible by g.
        let d = gcd(p.as_mpoly(), q.as_mpoly());
        prop_assert!(d.divides(p.as_mpoly()));
        prop_assert!(d.divides(q.as_mpoly()));
        let pg = p.as_mpoly().mul(g.as_mpoly());
        let qg = q.as_mpoly().mul(g.as_mpoly());
        let dg = gcd(&pg, &qg);
        prop_assert!(g.as_mpoly().monic().divides(&dg));
        prop_assert!(dg.divides(&pg) && dg.divides(&qg));
    }

    #[test]
    fn resultant_vanishes_iff_shared_factor(p in arb_homo(2), q in arb_homo(2), g in arb_homo(1)) {
        // With the shared factor: zero. The resultant taken against an
        // unrelated polynomial of positive degree in the variable is a
        // polynomial identity check on constructed instances.
        // The identity concerns common factors of positive degree in the
        // eliminated variable.
        prop_assume!(g.as_mpoly().degree_in(0) > 0);
        let pg = HomoPoly::try_new(p.as_mpoly().mul(g.as_mpoly())).unwrap();
        let qg = HomoPoly::try_new(q.as_mpoly().mul(g.as_mpoly())).unwrap();
        if pg.as_mpoly().degree_in(0) > 0 && qg.as_mpoly().degree_in(0) > 0 {
            let r = pg.resultant(&qg, 0).unwrap();
            prop_assert!(r.is_zero());
        }
    }
}

trait AsRefMPoly {
    fn as_ref(&self) -> &MPoly;
}
impl AsRefMPoly for MPoly {
    fn as_ref(&self) -> &MPoly {
        self
    }
}

#[test]
fn normalize_is_idempotent_on_samples() {
    for p in sample_fs(2, 200, 5) {
        let again = ProjPoint::normalize(p.coords()).unwrap();
        assert_eq!(again.coords(), p.coords());
    }
}

#[test]
fn fs_distance_is_a_metric_on_samples() {
    let pts = sample_fs(2, 120, 9);
    for c in pts.chunks(3) {
        let (a, b, cc) = (&c[0], &c[1], &c[2]);
        assert!(fs_distance(a, b) >= 0.0);
        assert!((fs_distance(a, b) - fs_distance(b, a)).abs() < 1e-12);
        assert!(fs_distance(a, cc) <= fs_distance(a, b) + fs_distance(b, cc) + 1e-12);
        let mixed: Vec<Complex64> = a.coords().iter().map(|z| z * Complex64::new(0.3, -1.2)).collect();
        let same = ProjPoint::normalize(&mixed).unwrap();
        assert!(fs_distance(a, &same) < 1e-12);
    }
}

#[test]
fn degree_sequences_are_submultiplicative_for_random_monomial_maps() {
    use projdyn::ratmap::ExponentMatrix;
    use projdyn::rng::SplitMix64;
    let mut rng = SplitMix64::new(2024);
    let mut checked = 0;
    while checked < 40 {
        let d = 1 + rng.next_range(3) as u32;
        let rows: Vec<Vec<u32>> = (0..3)
            .map(|_| {
                let a = rng.next_range((d + 1) as u64) as u32;
                let b = rng.next_range((d - a + 1) as u64) as u32;
                vec![a, b, d - a - b]
            })
            .collect();
        let m = ExponentMatrix::new(rows);
        let Ok(map) = m.to_map(vec!["t".into(), "z".into(), "w".into()]) else {
            continue;
        };
        let Ok(seq) = map.degree_sequence(5) else {
            continue;
        };
        for j in 1..=4usize {
            for k in 1..=(5 - j) {
                assert!(
                    seq[j + k - 1] <= seq[j - 1] * seq[k - 1],
                    "violation at ({j},{k}): {seq:?}"
                );
            }
        }
        checked += 1;
    }
}
