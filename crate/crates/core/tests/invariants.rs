use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use thoma_core::coalescent::{coeff_row, d_n, Precision};
use thoma_core::density::{self, KernelTable};
use thoma_core::dual::{Collapse, DualProcess};
use thoma_core::partition::{enumerate_partitions, Partition};
use thoma_core::rational::int;
use thoma_core::symfunc::{SymAlgebra, SymConfig};
use thoma_core::thoma::ThomaPoint;
use thoma_core::zmeasure::{ZMeasure, ZParams};

fn young(alg: &SymAlgebra, params: ZParams) -> ZMeasure {
    let g = alg.graph(params.vartheta()).unwrap();
    ZMeasure::with_graph(params, g).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn finite_rows_are_distributions(m in 1usize..25, theta in 0.2f64..4.0, t in 0.01f64..3.0) {
        let row = coeff_row(t, m, theta, Precision::Auto).unwrap();
        prop_assert!(row.values.iter().all(|&v| v >= -1e-12));
        prop_assert!((row.total() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn limit_coefficients_are_nonnegative(n in 0usize..15, theta in 0.2f64..4.0, t in 0.1f64..3.0) {
        prop_assert!(d_n(t, n, theta).unwrap() >= -1e-14);
    }

    #[test]
    fn dual_law_sums_to_one(parts in proptest::collection::vec(1usize..4, 1..4), theta in 0.3f64..3.0, t in 0.05f64..2.0) {
        let mut parts = parts;
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let nu = Partition::new(parts).unwrap();
        let law = DualProcess::new(theta).unwrap().law(&nu, t, Collapse::AbsorbedAtOne).unwrap();
        let total: f64 = law.iter().map(|(_, p)| p).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }
}

#[test]
fn principal_measure_levels_sum_to_one() {
    let alg = SymAlgebra::new(SymConfig::default());
    for z in [Complex64::new(0.5, 0.8), Complex64::new(-1.5, 0.3), Complex64::new(2.0, 2.0)] {
        let zm = young(&alg, ZParams::principal(z, int(1)).unwrap());
        for n in 1..=8 {
            let total: f64 = enumerate_partitions(n).iter().map(|eta| zm.m_n(eta).unwrap().0).sum();
            assert!((total - 1.0).abs() < 1e-11, "z={z} n={n}: {total}");
        }
    }
}

#[test]
fn density_at_equal_points_is_finite_and_positive() {
    let alg = SymAlgebra::new(SymConfig::default());
    let zm = young(&alg, ZParams::complementary(0.3, 0.7, int(1)).unwrap());
    let table = KernelTable::for_truncation(&alg, &zm, 8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let x = ThomaPoint::sample(&mut rng, 2, 1);
        let ev = density::density(&table, 0.7, &x, &x, 8).unwrap();
        assert!(ev.value_mixture.is_finite() && ev.value_mixture > 0.0);
        assert!(ev.consistent(), "{ev:?}");
    }
}
