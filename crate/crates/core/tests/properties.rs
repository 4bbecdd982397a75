use moc_core::convex::{
    hull2d, hull_diameter, membership2d, membership_lp, validate_certificate, validate_certificate_2d,
    HullMembership, Verdict, Weighted, DEFAULT_TOL,
};
use moc_core::instances::{random_hermitian, random_matrix, random_normal};
use moc_core::matrix::{block_mixer, classify, conj_add_scalar, determinant, dilate, direct_sum};
use moc_core::sigma::{compose_theta, sigma_points, sigma_product, Permutation};
use moc_core::spectra::{eig_hermitian, eig_normal, haar_unitary, match_multisets};
use moc_core::verify::{verify_moc_with_points, VerifyConfig};
use moc_core::{Complex64, ComplexMatrix, ConjMode, RngSeed};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = Complex64> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn square(max: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(complex(), n * n).prop_map(move |d| ComplexMatrix::new(n, n, d).unwrap())
    })
}

fn pair(max: usize) -> impl Strategy<Value = (ComplexMatrix, ComplexMatrix)> {
    (1..=max).prop_flat_map(|n| {
        let m = || prop::collection::vec(complex(), n * n).prop_map(move |d| ComplexMatrix::new(n, n, d).unwrap());
        (m(), m())
    })
}

fn cloud(max: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(complex(), 1..=max)
}

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn scale_of(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(1.0, f64::max)
}

proptest! {
    #[test]
    fn dilation_is_normal(x in square(6), s in complex()) {
        let n = dilate(&x, s).unwrap();
        let r = classify(&n).unwrap().normality_residual;
        prop_assert!(r <= 1e-12 * n.frobenius_norm().max(1.0));
    }

    #[test]
    fn block_mixer_is_unitary(n in 1usize..=16) {
        prop_assert!(classify(&block_mixer(n).unwrap()).unwrap().unitarity_residual <= 1e-14);
    }

    #[test]
    fn block_mixer_splits((m, nn) in pair(8)) {
        let u = block_mixer(m.rows()).unwrap();
        let big = ComplexMatrix::from_blocks(&m, &nn, &nn, &m).unwrap();
        let lhs = &(&u.adjoint() * &big) * &u;
        let rhs = direct_sum(&(&m - &nn), &(&m + &nn)).unwrap();
        let bound = 1e-12 * (m.frobenius_norm() + nn.frobenius_norm()).max(1.0);
        for (p, q) in lhs.entries().iter().zip(rhs.entries()) {
            prop_assert!((p - q).norm() <= bound);
        }
    }

    #[test]
    fn conj_add_scalar_structure(x in square(6), alpha in -10.0..10.0f64) {
        let sum = conj_add_scalar(&x, ConjMode::Sum, real(alpha)).unwrap();
        prop_assert!(classify(&sum).unwrap().hermitian_residual <= 1e-15);
        let diff = conj_add_scalar(&x, ConjMode::Difference, real(alpha)).unwrap();
        prop_assert!(classify(&diff.shift(real(-alpha))).unwrap().skew_residual <= 1e-15);
    }

    #[test]
    fn determinant_multiplies_over_direct_sums(a in square(5), c in square(5)) {
        let whole = determinant(&direct_sum(&a, &c).unwrap()).unwrap();
        let parts = determinant(&a).unwrap() * determinant(&c).unwrap();
        prop_assert!((whole - parts).norm() <= 1e-10 * whole.norm().max(parts.norm()).max(f64::MIN_POSITIVE));
    }

    #[test]
    fn hermitian_spectrum_identities(seed in any::<u64>(), n in 1usize..=8) {
        let h = random_hermitian(&mut RngSeed(seed).rng(), n);
        let spec = eig_hermitian(&h).unwrap();
        let trace: Complex64 = spec.values.iter().sum();
        let prod: Complex64 = spec.values.iter().product();
        let det = determinant(&h).unwrap();
        prop_assert!((trace - h.trace()).norm() <= 1e-10 * h.trace().norm().max(1.0));
        prop_assert!((prod - det).norm() <= 1e-8 * det.norm().max(prod.norm()));
    }

    #[test]
    fn normal_solver_agrees_on_hermitian_input(seed in any::<u64>(), n in 1usize..=8) {
        let h = random_hermitian(&mut RngSeed(seed).rng(), n);
        let a = eig_hermitian(&h).unwrap();
        let b = eig_normal(&h, RngSeed(seed)).unwrap();
        prop_assert!(match_multisets(&a.values, &b.values, 1e-8 * scale_of(&a.values)).unwrap().matched);
    }

    #[test]
    fn spectrum_invariant_under_unitary_similarity(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = RngSeed(seed).rng();
        let a = random_normal(&mut rng, n);
        let u = haar_unitary(n, RngSeed(seed ^ 0x5a5a)).unwrap();
        let b = &(&u * &a) * &u.adjoint();
        let sa = eig_normal(&a, RngSeed(1)).unwrap();
        let sb = eig_normal(&b, RngSeed(2)).unwrap();
        prop_assert!(match_multisets(&sa.values, &sb.values, 1e-7 * scale_of(&sa.values)).unwrap().matched);
    }

    #[test]
    fn skew_hermitian_spectrum_is_imaginary(x in square(6)) {
        let s = conj_add_scalar(&x, ConjMode::Difference, real(0.0)).unwrap();
        let spec = eig_normal(&s, RngSeed(0)).unwrap();
        prop_assert!(spec.values.iter().all(|z| z.re.abs() <= 1e-9));
    }

    #[test]
    fn sigma_points_ignore_input_order(
        a in prop::collection::vec(complex(), 1..=6),
        rot_a in 0usize..6,
        rot_b in 0usize..6,
        b_seed in any::<u64>(),
    ) {
        let n = a.len();
        let b: Vec<Complex64> = {
            let mut rng = RngSeed(b_seed).rng();
            (0..n).map(|_| moc_core::instances::random_complex(&mut rng)).collect()
        };
        let mut a2 = a.clone();
        a2.rotate_left(rot_a % n);
        a2.reverse();
        let mut b2 = b.clone();
        b2.rotate_left(rot_b % n);
        let p = sigma_points(&a, &b, 1000).unwrap();
        let q = sigma_points(&a2, &b2, 1000).unwrap();
        let tol = 1e-12 * scale_of(&p.points);
        prop_assert!(match_multisets(&p.points, &q.points, tol).unwrap().matched);
    }

    #[test]
    fn sigma_provenance(a in prop::collection::vec(complex(), 1..=6), shift in complex()) {
        let b: Vec<Complex64> = a.iter().map(|z| z * shift + 1.0).collect();
        let set = sigma_points(&a, &b, 1000).unwrap();
        let n = a.len();
        prop_assert_eq!(set.len(), (1..=n).product::<usize>());
        for k in 0..set.len() {
            prop_assert_eq!(set.recompute(k), set.points[k]);
            prop_assert_eq!(sigma_product(&a, &b, &set.perm(k)), set.points[k]);
        }
    }

    #[test]
    fn block_preserving_sigma_points_are_products(
        a in prop::collection::vec(complex(), 1..=3),
        c in prop::collection::vec(complex(), 1..=3),
        seed in any::<u64>(),
    ) {
        let mut rng = RngSeed(seed).rng();
        let b: Vec<Complex64> = a.iter().map(|_| moc_core::instances::random_complex(&mut rng)).collect();
        let d: Vec<Complex64> = c.iter().map(|_| moc_core::instances::random_complex(&mut rng)).collect();
        let (n, m) = (a.len(), c.len());
        let e: Vec<Complex64> = a.iter().chain(&c).copied().collect();
        let f: Vec<Complex64> = b.iter().chain(&d).copied().collect();
        let big = sigma_points(&e, &f, 1000).unwrap();
        let restricted: Vec<Complex64> = (0..big.len())
            .filter(|&k| (0..n).all(|i| big.perm(k).apply(i) < n))
            .map(|k| big.points[k])
            .collect();
        let z = sigma_points(&a, &b, 1000).unwrap();
        let v = sigma_points(&c, &d, 1000).unwrap();
        let mut products = Vec::new();
        for k in 0..z.len() {
            for l in 0..v.len() {
                products.push(z.points[k] * v.points[l]);
                let theta = compose_theta(&z.perm(k), &v.perm(l));
                let w = sigma_product(&e, &f, &theta);
                prop_assert!((w - z.points[k] * v.points[l]).norm() <= 1e-12 * w.norm().max(1.0));
            }
        }
        prop_assert_eq!(restricted.len(), z.len() * v.len());
        prop_assert_eq!(products.len(), (1..=n).product::<usize>() * (1..=m).product::<usize>());
        let tol = 1e-12 * scale_of(&restricted);
        prop_assert!(match_multisets(&restricted, &products, tol).unwrap().matched);
    }

    #[test]
    fn hull_is_convex_and_contains_inputs(points in cloud(200)) {
        let idx = hull2d(&points).unwrap();
        let poly: Vec<Complex64> = idx.iter().map(|&i| points[i]).collect();
        let d = hull_diameter(&poly);
        let k = poly.len();
        if k >= 3 {
            for i in 0..k {
                let e1 = poly[(i + 1) % k] - poly[i];
                let e2 = poly[(i + 2) % k] - poly[(i + 1) % k];
                prop_assert!(e1.re * e2.im - e1.im * e2.re >= -1e-12 * d * d);
            }
        }
        for p in &points {
            let m = membership2d(&points, *p, DEFAULT_TOL).unwrap();
            prop_assert!(m.signed_distance <= 1e-12);
            prop_assert!(m.verdict.is_member());
        }
    }

    #[test]
    fn planar_and_lp_agree(points in cloud(300), query in complex()) {
        let planar = membership2d(&points, query, DEFAULT_TOL).unwrap();
        let gens: Vec<Vec<f64>> = points.iter().map(|z| vec![z.re, z.im]).collect();
        let q = [query.re, query.im];
        let lp = membership_lp(&gens, &q, DEFAULT_TOL).unwrap();
        if planar.verdict.is_member() != lp.verdict.is_member() {
            prop_assert!(planar.signed_distance.abs() <= 2.0 * DEFAULT_TOL);
        }
        if planar.verdict.is_member() {
            prop_assert!(validate_certificate_2d(&points, &planar, query).unwrap());
        }
        if lp.verdict.is_member() {
            prop_assert!(validate_certificate(&gens, &lp, &q).unwrap());
        }
    }

    #[test]
    fn membership_is_rigid_motion_invariant(
        points in cloud(100),
        query in complex(),
        shift in complex(),
        angle in 0.0..std::f64::consts::TAU,
    ) {
        let rot = Complex64::from_polar(1.0, angle);
        let moved: Vec<Complex64> = points.iter().map(|z| z * rot + shift).collect();
        let before = membership2d(&points, query, 1e-9).unwrap();
        let after = membership2d(&moved, query * rot + shift, 1e-9).unwrap();
        prop_assert_eq!(before.verdict.is_member(), after.verdict.is_member());
        if before.signed_distance.abs() > 1e-6 {
            prop_assert_eq!(before.verdict, after.verdict);
        }
    }

    #[test]
    fn certificates_compose(
        z in cloud(12),
        v in cloud(12),
        wz in prop::collection::vec(0.01..1.0f64, 12),
        wv in prop::collection::vec(0.01..1.0f64, 12),
    ) {
        let weights = |w: &[f64], k: usize| {
            let total: f64 = w[..k].iter().sum();
            w[..k].iter().map(|x| x / total).collect::<Vec<_>>()
        };
        let t = weights(&wz, z.len());
        let s = weights(&wv, v.len());
        let p: Complex64 = z.iter().zip(&t).map(|(g, w)| g * w).sum();
        let q: Complex64 = v.iter().zip(&s).map(|(g, w)| g * w).sum();
        let cert_p = membership2d(&z, p, DEFAULT_TOL).unwrap();
        let cert_q = membership2d(&v, q, DEFAULT_TOL).unwrap();
        prop_assert!(cert_p.verdict.is_member() && cert_q.verdict.is_member());

        let mut gens = Vec::new();
        let mut outer = Vec::new();
        for wp in cert_p.certificate.as_ref().unwrap() {
            for wq in cert_q.certificate.as_ref().unwrap() {
                outer.push(Weighted { index: gens.len(), weight: wp.weight * wq.weight });
                gens.push(vec![
                    (z[wp.index] * v[wq.index]).re,
                    (z[wp.index] * v[wq.index]).im,
                ]);
            }
        }
        let query = p * q;
        let size = gens.iter().map(|g| g[0].hypot(g[1])).fold(query.norm().max(1.0), f64::max);
        let composed = HullMembership {
            verdict: Verdict::Inside,
            signed_distance: 0.0,
            certificate: Some(outer),
            tolerance_used: 1e-10 * size,
        };
        prop_assert!(validate_certificate(&gens, &composed, &[query.re, query.im]).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moc_reports_are_consistent(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = RngSeed(seed).rng();
        let a = random_normal(&mut rng, n);
        let b = random_normal(&mut rng, n);
        let cfg = VerifyConfig { seed: RngSeed(seed), ..VerifyConfig::default() };
        let (r, pts) = verify_moc_with_points(&a, &b, &cfg).unwrap();
        prop_assert_eq!(r.sigma_count, (1..=n).product::<usize>());
        let lu = determinant(&(&a + &b)).unwrap();
        prop_assert!((r.det_sum - lu).norm() <= 1e-12 * lu.norm().max(1.0));
        if r.membership.certificate.is_some() {
            prop_assert!(validate_certificate_2d(&pts.points, &r.membership, r.det_sum).unwrap());
        }
        if n <= 3 {
            prop_assert!(r.verdict().is_member());
        }
    }

    #[test]
    fn dilation_pairs_are_members(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = RngSeed(seed).rng();
        let x = random_matrix(&mut rng, n);
        let y = random_matrix(&mut rng, n);
        let s = moc_core::instances::random_complex(&mut rng);
        let t = moc_core::instances::random_complex(&mut rng);
        let r = moc_core::verify::verify_theorem1(&x, &y, s, t, &VerifyConfig::default()).unwrap();
        prop_assert!(r.holds(), "{:?}", r.violations);
    }
}

#[test]
fn permutation_string_round_trips() {
    let p: Permutation = "2 0 1".parse().unwrap();
    assert_eq!(p.to_string(), "2 0 1");
}
