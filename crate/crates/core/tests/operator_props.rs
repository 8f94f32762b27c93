use proptest::prelude::*;
use secondkind::curvature::{
    kahler_space_form, product, random_curvature, random_kahler_curvature, space_form,
};
use secondkind::operator::{
    alpha_sum, bruteforce_min_alpha_sum, classify, nonneg_threshold, nonpos_threshold, spectrum,
    Verdict,
};
use secondkind::{sym2_dim, ComplexStructure, CurvatureTensor};

fn trace_identity_holds(r: &CurvatureTensor) -> bool {
    let n = r.dim() as f64;
    let s = spectrum(r).unwrap();
    let want = (n + 2.0) / (2.0 * n) * r.scalar();
    (s.sum() - want).abs() <= 1e-9 * (1.0 + want.abs())
}

#[test]
fn trace_identity_on_constructors() {
    for n in 2..=5 {
        assert!(trace_identity_holds(&space_form(n, 1.3).unwrap()));
    }
    for m in 1..=3 {
        assert!(trace_identity_holds(&kahler_space_form(m, -0.7).unwrap().0));
    }
    let r = product(
        &space_form(2, 1.0).unwrap(),
        &CurvatureTensor::zero(1).unwrap(),
    );
    assert!(trace_identity_holds(&r));
}

#[test]
fn ky_fan_oracle_never_beats_the_eigenbasis() {
    for (k, n) in [(0u64, 4usize), (1, 5)] {
        let r = random_curvature(n, k, 1.0).unwrap();
        let s = spectrum(&r).unwrap();
        for alpha in [1.0, 2.5, n as f64, sym2_dim(n) as f64] {
            let g = alpha_sum(&s, alpha).unwrap();
            let bf = bruteforce_min_alpha_sum(&r, alpha, 100, k).unwrap();
            assert!((bf.per_sample[0] - g).abs() < 1e-9);
            assert!(bf.per_sample.iter().all(|&v| v >= g - 1e-8));
        }
    }
}

fn einstein_factor(kind: u8, size: usize, kappa: f64) -> CurvatureTensor {
    match kind % 3 {
        0 => space_form(size + 1, kappa).unwrap(),
        1 => kahler_space_form(size, kappa).unwrap().0,
        _ => product(
            &space_form(size + 1, kappa).unwrap(),
            &space_form(size + 1, kappa).unwrap(),
        ),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn trace_identity_on_random_tensors(n in 2usize..6, seed in any::<u64>()) {
        prop_assert!(trace_identity_holds(&random_curvature(n, seed, 1.0).unwrap()));
    }

    #[test]
    fn classification_is_sign_symmetric(n in 2usize..5, seed in any::<u64>(), t in 0.0f64..1.0) {
        let r = random_curvature(n, seed, 1.0).unwrap();
        let alpha = 1.0 + t * (sym2_dim(n) as f64 - 1.0);
        let v = classify(&r, alpha).unwrap();
        let w = classify(&r.neg(), alpha).unwrap();
        let flipped = match v {
            Verdict::Nonnegative => Verdict::Nonpositive,
            Verdict::Nonpositive => Verdict::Nonnegative,
            other => other,
        };
        prop_assert_eq!(w, flipped);
        let s = spectrum(&r).unwrap();
        prop_assert_eq!(nonpos_threshold(&s), nonneg_threshold(&spectrum(&r.neg()).unwrap()));
    }

    #[test]
    fn alpha_sum_is_convex(n in 2usize..5, seed in any::<u64>(), x in 0.0f64..1.0, y in 0.0f64..1.0, t in 0.0f64..1.0) {
        let s = spectrum(&random_curvature(n, seed, 1.0).unwrap()).unwrap();
        let top = s.len() as f64 - 1.0;
        let (a, b) = (1.0 + x * top, 1.0 + y * top);
        let mid = t * a + (1.0 - t) * b;
        let g = |z| alpha_sum(&s, z).unwrap();
        prop_assert!(g(mid) <= t * g(a) + (1.0 - t) * g(b) + 1e-12);
    }

    #[test]
    fn einstein_product_spectrum(k1 in 0u8..3, k2 in 0u8..3, s1 in 1usize..3, s2 in 1usize..3,
                                 c1 in -2.0f64..2.0, c2 in -2.0f64..2.0) {
        let r1 = einstein_factor(k1, s1, c1);
        let r2 = einstein_factor(k2, s2, c2);
        let (n1, n2) = (r1.dim() as f64, r2.dim() as f64);
        let rho1 = r1.einstein_constant(1e-9).unwrap();
        let rho2 = r2.einstein_constant(1e-9).unwrap();
        let mut want = spectrum(&r1).unwrap().eigenvalues;
        want.extend(spectrum(&r2).unwrap().eigenvalues);
        want.extend(std::iter::repeat_n(0.0, r1.dim() * r2.dim()));
        want.push(-(n2 * rho1 + n1 * rho2) / (n1 + n2));
        want.sort_by(f64::total_cmp);
        let got = spectrum(&product(&r1, &r2)).unwrap().eigenvalues;
        prop_assert_eq!(got.len(), want.len());
        for (a, b) in got.iter().zip(&want) {
            prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
        }
    }

    #[test]
    fn random_kahler_tensors_are_kahler(m in 1usize..4, seed in any::<u64>()) {
        let j = ComplexStructure::standard(m).unwrap();
        let r = random_kahler_curvature(&j, seed, 1.0).unwrap();
        prop_assert!(r.kahler_defect(&j).unwrap() < 1e-12);
        let (a, b) = r.symmetry_defects();
        prop_assert!(a < 1e-12 && b < 1e-12);
    }
}
