use num_rational::Ratio;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use secondkind::curvature::{product, random_curvature, random_kahler_curvature, space_form};
use secondkind::operator::{alpha_sum, nonneg_threshold, spectrum};
use secondkind::rigidity::{
    a_const, b_const, f_lemma, f_lemma_gap, kahler_diagonals, product_diagonals,
};
use secondkind::{ComplexStructure, CurvatureTensor};

fn a_rational(n1: i64, n2: i64) -> Ratio<i64> {
    Ratio::from_integer(1 + n1 * n2) + Ratio::new(n1 * (n2 - 1) + n2 * (n1 - 1), n1 + n2)
}

#[test]
fn a_const_identity_in_rational_arithmetic() {
    for n in 2..=32i64 {
        for k in 1..=n / 2 {
            let lhs = a_rational(k, n - k);
            let rhs = Ratio::from_integer(k * (n - k)) + Ratio::new(2 * k * (n - k), n);
            assert_eq!(lhs - rhs, Ratio::from_integer(0), "k={k}, n={n}");
            let approx = *rhs.numer() as f64 / *rhs.denom() as f64;
            assert!((a_const(k as usize, (n - k) as usize) - approx).abs() < 1e-12);
        }
    }
}

#[test]
fn b_const_table() {
    assert_eq!(b_const(1, 1), 7.5);
    assert_eq!(b_const(2, 2), 29.0);
    assert!((b_const(2, 1) - 97.0 / 6.0).abs() < 1e-13);
}

#[test]
fn f_lemma_on_random_multisets() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..1000 {
        let size = rng.gen_range(2..=50);
        let all_equal = case % 5 == 0;
        let base = rng.gen_range(-5.0..5.0);
        let values: Vec<f64> = (0..size)
            .map(|_| {
                if all_equal {
                    base
                } else {
                    rng.gen_range(-5.0..5.0)
                }
            })
            .collect();
        for step in 0..8 {
            let x = 1.0 + (size as f64 - 1.0) * step as f64 / 8.0;
            let gap = f_lemma_gap(&values, x).unwrap();
            assert!(gap >= -1e-12, "inequality failed: {values:?}, x={x}");
            let detected_equal = gap.abs() <= 1e-9;
            assert_eq!(
                detected_equal, all_equal,
                "equality case: {values:?}, x={x}"
            );
        }
        let mean = values.iter().sum::<f64>() / size as f64;
        let full = f_lemma(&values, size as f64).unwrap();
        assert!((full - size as f64 * mean).abs() < 1e-9);
    }
}

#[test]
fn line_model_equality_for_small_dimensions() {
    let line = CurvatureTensor::zero(1).unwrap();
    for n in 4..=10 {
        let s = spectrum(&product(&space_form(n - 1, 1.0).unwrap(), &line)).unwrap();
        let a = a_const(n - 1, 1);
        assert!(alpha_sum(&s, a).unwrap().abs() < 1e-12);
        assert!((nonneg_threshold(&s).unwrap() - a).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn product_diagonal_averages(n1 in 2usize..5, n2 in 2usize..5, seed in any::<u64>()) {
        let r1 = random_curvature(n1, seed, 1.0).unwrap();
        let r2 = random_curvature(n2, seed.wrapping_add(1), 1.0).unwrap();
        let d = product_diagonals(&r1, &r2).unwrap();
        let (f1, f2) = (n1 as f64, n2 as f64);
        let (s1, s2) = (r1.scalar(), r2.scalar());
        let mean1 = d.factor1.iter().sum::<f64>() / d.factor1.len() as f64;
        prop_assert!((mean1 - (f1 + 2.0) * s1 / (2.0 * f1) / d.factor1.len() as f64).abs() < 1e-9);
        prop_assert!(d.mixed_sum.abs() < 1e-10);
        let zeta = -(f2 * f2 * s1 + f1 * f1 * s2) / (f1 * f2 * (f1 + f2));
        prop_assert!((d.zeta - zeta).abs() < 1e-9);
        prop_assert_eq!(d.factor2.len(), (n2 - 1) * (n2 + 2) / 2);
    }

    #[test]
    fn kahler_diagonal_trace_identities(m in 1usize..4, seed in any::<u64>()) {
        let j = ComplexStructure::standard(m).unwrap();
        let r = random_kahler_curvature(&j, seed, 1.0).unwrap();
        let d = kahler_diagonals(&r, &j).unwrap();
        let (mf, s) = (m as f64, r.scalar());
        let minus: f64 = d.minus_family.iter().sum();
        prop_assert!((minus + (mf - 1.0) / (2.0 * mf) * s).abs() < 1e-9);
        prop_assert_eq!(d.plus_family.len(), m * (m + 1));
        let mean = d.plus_family.iter().sum::<f64>() / d.plus_family.len() as f64;
        prop_assert!((mean - s / (mf * (mf + 1.0))).abs() < 1e-9);
    }
}
